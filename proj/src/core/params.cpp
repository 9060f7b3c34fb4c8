#include "core/params.hpp"

#include <cmath>
#include <cstring>

#include "core/error.hpp"
#include "kernels/kernels.hpp"

namespace trajalign {

Mat& ParamStore::create(const std::string& name, int rows, int cols) {
    require(index_.count(name) == 0, "DuplicateParameter", name);
    index_[name] = blocks_.size();
    ParamBlock b;
    b.name = name;
    b.w.resize(rows, cols);
    b.g.resize(rows, cols);
    b.m.resize(rows, cols);
    b.v.resize(rows, cols);
    blocks_.push_back(std::move(b));
    return blocks_.back().w;
}

ParamBlock& ParamStore::block(const std::string& name) {
    auto it = index_.find(name);
    require(it != index_.end(), "UnknownParameter", name);
    return blocks_[it->second];
}

const ParamBlock& ParamStore::block(const std::string& name) const {
    auto it = index_.find(name);
    require(it != index_.end(), "UnknownParameter", name);
    return blocks_[it->second];
}

void ParamStore::zero_grads() {
    for (auto& b : blocks_) b.g.zero();
}

void ParamStore::adam_step(const OptimConfig& cfg) {
    ++step_;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step_));
    for (auto& b : blocks_) {
        if (b.frozen) continue;
        kernels::adam_update(static_cast<int>(b.w.size()), b.w.data(), b.g.data(),
                             b.m.data(), b.v.data(), cfg.lr, cfg.beta1, cfg.beta2,
                             cfg.eps, cfg.weight_decay, bc1, bc2);
    }
}

void ParamStore::set_frozen(const std::string& prefix, bool frozen) {
    for (auto& b : blocks_) {
        if (b.name.rfind(prefix, 0) == 0) b.frozen = frozen;
    }
}

size_t ParamStore::total_params() const {
    size_t n = 0;
    for (const auto& b : blocks_) n += b.w.size();
    return n;
}

uint64_t ParamStore::checksum(const std::string& prefix) const {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* data, size_t len) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& b : blocks_) {
        if (!prefix.empty() && b.name.rfind(prefix, 0) != 0) continue;
        mix(b.name.data(), b.name.size());
        mix(b.w.data(), b.w.size() * sizeof(double));
    }
    return h;
}

}  // namespace trajalign
