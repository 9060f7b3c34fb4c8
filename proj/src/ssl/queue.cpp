#include "ssl/queue.hpp"

#include "core/error.hpp"

namespace trajalign::ssl {

void NegativeQueue::push(const double* v, int dim, const std::string& tag) {
    require(dim == dim_, "DimensionMismatch",
            "queue expects dimension " + std::to_string(dim_) + ", got " +
                std::to_string(dim));
    Entry e;
    e.v.assign(v, v + dim);
    e.tag = tag;
    entries_.push_back(std::move(e));
    while (static_cast<int>(entries_.size()) > capacity_) entries_.pop_front();
}

void NegativeQueue::push_rows(const Mat& rows, const std::vector<std::string>& tags) {
    require(tags.empty() || tags.size() == static_cast<size_t>(rows.rows),
            "DimensionMismatch", "tag count must match row count");
    for (int i = 0; i < rows.rows; ++i)
        push(rows.row(i), rows.cols, tags.empty() ? "" : tags[i]);
}

Mat NegativeQueue::snapshot_matrix() const {
    Mat m(static_cast<int>(entries_.size()), dim_);
    int i = 0;
    for (const auto& e : entries_) {
        std::copy(e.v.begin(), e.v.end(), m.row(i));
        ++i;
    }
    return m;
}

}  // namespace trajalign::ssl
