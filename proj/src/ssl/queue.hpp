#pragma once

#include <deque>
#include <string>
#include <vector>

#include "core/mat.hpp"

namespace trajalign::ssl {

// MoCo-style FIFO queue of detached location embeddings. Entries carry an
// optional tag (the source svi_id) so an anchor's own stale positive can be
// excluded from its negative set; random-location entries are untagged.
class NegativeQueue {
public:
    struct Entry {
        std::vector<double> v;
        std::string tag;
    };

    NegativeQueue(int dim, int capacity) : dim_(dim), capacity_(capacity) {}

    int dim() const { return dim_; }
    int capacity() const { return capacity_; }
    int size() const { return static_cast<int>(entries_.size()); }

    // Appends in order; evicts strictly oldest-first past capacity.
    void push(const double* v, int dim, const std::string& tag = "");
    void push_rows(const Mat& rows, const std::vector<std::string>& tags);

    // FIFO-ordered copy (oldest first).
    const std::deque<Entry>& entries() const { return entries_; }
    Mat snapshot_matrix() const;

    void clear() { entries_.clear(); }

private:
    int dim_;
    int capacity_;
    std::deque<Entry> entries_;
};

}  // namespace trajalign::ssl
