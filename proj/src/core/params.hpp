#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/mat.hpp"

namespace trajalign {

struct OptimConfig {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-4;
};

struct ParamBlock {
    std::string name;
    Mat w;  // parameter values
    Mat g;  // gradient accumulator
    Mat m;  // Adam first moment
    Mat v;  // Adam second moment
    bool frozen = false;
};

// Named parameter blocks in registration order (the order is part of the
// checkpoint contract). Frozen blocks are skipped by the optimizer and keep
// their moments untouched.
class ParamStore {
public:
    Mat& create(const std::string& name, int rows, int cols);

    bool has(const std::string& name) const { return index_.count(name) != 0; }
    ParamBlock& block(const std::string& name);
    const ParamBlock& block(const std::string& name) const;
    Mat& param(const std::string& name) { return block(name).w; }
    const Mat& param(const std::string& name) const { return block(name).w; }
    Mat& grad(const std::string& name) { return block(name).g; }

    std::vector<ParamBlock>& blocks() { return blocks_; }
    const std::vector<ParamBlock>& blocks() const { return blocks_; }

    void zero_grads();
    // One Adam step (decoupled weight decay) over all unfrozen blocks.
    void adam_step(const OptimConfig& cfg);

    // Freeze/unfreeze every block whose name starts with `prefix`.
    void set_frozen(const std::string& prefix, bool frozen);

    int64_t step_count() const { return step_; }
    void set_step_count(int64_t s) { step_ = s; }

    size_t total_params() const;
    // FNV-1a over the raw parameter bytes of blocks matching `prefix`
    // (all blocks if empty). Used to assert frozen parameters stay bit-identical.
    uint64_t checksum(const std::string& prefix = "") const;

private:
    std::vector<ParamBlock> blocks_;
    std::unordered_map<std::string, size_t> index_;
    int64_t step_ = 0;
};

}  // namespace trajalign
