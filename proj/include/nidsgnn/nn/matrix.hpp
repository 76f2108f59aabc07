#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace nidsgnn::nn {

// Row-major dense matrix of doubles. The only tensor type in the project.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}
    Matrix(std::size_t r, std::size_t c, std::vector<double> d)
        : rows(r), cols(c), data(std::move(d)) {
        if (data.size() != rows * cols)
            throw std::invalid_argument("Matrix: data size does not match shape");
    }

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
    std::size_t size() const { return data.size(); }
    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    void zero() { std::fill(data.begin(), data.end(), 0.0); }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }

    static Matrix ones(std::size_t r, std::size_t c) { return Matrix(r, c, 1.0); }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    // Glorot-uniform init: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
    static Matrix glorot(std::size_t r, std::size_t c, std::mt19937_64& rng) {
        const double a = std::sqrt(6.0 / double(r + c));
        std::uniform_real_distribution<double> dist(-a, a);
        Matrix m(r, c);
        for (double& v : m.data) v = dist(rng);
        return m;
    }
};

inline std::string shape_str(const Matrix& m) {
    return std::to_string(m.rows) + "x" + std::to_string(m.cols);
}

inline void check_shapes_mul(const Matrix& a, const Matrix& b, const char* op) {
    if (a.cols != b.rows)
        throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                    shape_str(a) + " * " + shape_str(b));
}

}  // namespace nidsgnn::nn
