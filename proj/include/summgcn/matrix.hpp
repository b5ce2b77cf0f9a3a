#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace summgcn {

// Row-major dense matrix of 64-bit floats.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double* row(std::size_t r) { return values.data() + r * cols; }
    const double* row(std::size_t r) const { return values.data() + r * cols; }

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    void fill(double x) { values.assign(values.size(), x); }

    bool all_finite() const {
        for (double v : values) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    bool same_shape(const DenseMatrix& o) const { return rows == o.rows && cols == o.cols; }

    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        return a.rows == b.rows && a.cols == b.cols && a.values == b.values;
    }
};

}  // namespace summgcn
