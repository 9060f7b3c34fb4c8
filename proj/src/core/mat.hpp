#pragma once

#include <cassert>
#include <cstring>
#include <vector>

namespace trajalign {

// Dense row-major matrix of doubles. Vectors are 1 x n or n x 1 as convenient.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
    Mat(int r, int c, double fill) : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

    double* data() { return a.data(); }
    const double* data() const { return a.data(); }
    double* row(int i) { return a.data() + static_cast<size_t>(i) * cols; }
    const double* row(int i) const { return a.data() + static_cast<size_t>(i) * cols; }
    double& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
    size_t size() const { return a.size(); }
    bool empty() const { return a.empty(); }

    void zero() { std::memset(a.data(), 0, a.size() * sizeof(double)); }
    void resize(int r, int c) {
        rows = r;
        cols = c;
        a.assign(static_cast<size_t>(r) * c, 0.0);
    }
};

}  // namespace trajalign
