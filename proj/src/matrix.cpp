// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace tpca {

SquareMatrix::SquareMatrix(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("SquareMatrix: dim must be >= 1");
    data_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
}

SquareMatrix SquareMatrix::identity(int dim) {
    SquareMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::from_rows(int dim, std::vector<double> entries) {
    if (dim < 1) throw std::invalid_argument("SquareMatrix: dim must be >= 1");
    if (entries.size() != static_cast<std::size_t>(dim) * dim)
        throw std::invalid_argument("SquareMatrix: entry count != dim*dim");
    for (double x : entries)
        if (!std::isfinite(x))
            throw std::invalid_argument("SquareMatrix: non-finite entry");
    SquareMatrix m;
    m.dim_ = dim;
    m.data_ = std::move(entries);
    return m;
}

double SquareMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

double SquareMatrix::quad_form(std::span<const double> v) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
        const double* row = data_.data() + static_cast<std::size_t>(i) * dim_;
        double r = 0.0;
        for (int j = 0; j < dim_; ++j) r += row[j] * v[static_cast<std::size_t>(j)];
        s += v[static_cast<std::size_t>(i)] * r;
    }
    return s;
}

double SquareMatrix::inner(const SquareMatrix& a, const SquareMatrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("inner: dim mismatch");
    return dot(a.data(), b.data());
}

SquareMatrix SquareMatrix::transpose_sum() const {
    SquareMatrix r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r(i, j) = (*this)(i, j) + (*this)(j, i);
    return r;
}

bool SquareMatrix::all_finite() const {
    for (double x : data_)
        if (!std::isfinite(x)) return false;
    return true;
}

void SquareMatrix::scale_add(double a, double b, const SquareMatrix& other) {
    if (other.dim_ != dim_) throw std::invalid_argument("scale_add: dim mismatch");
    const double* o = other.data_.data();
    double* p = data_.data();
    const std::size_t n = data_.size();
    for (std::size_t i = 0; i < n; ++i) p[i] = a * p[i] + b * o[i];
}

UnitVector UnitVector::normalized(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("UnitVector: empty vector");
    double n = norm2(v);
    if (!std::isfinite(n) || n == 0.0)
        throw std::invalid_argument("UnitVector: zero or non-finite vector");
    for (double& x : v) x /= n;
    return UnitVector(std::move(v));
}

UnitVector UnitVector::from_unit(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("UnitVector: empty vector");
    double n = norm2(v);
    if (std::abs(n - 1.0) > 1e-12)
        throw std::invalid_argument("UnitVector: norm deviates from 1 by more than 1e-12");
    return UnitVector(std::move(v));
}

UnitVector UnitVector::negated() const {
    std::vector<double> v(data_);
    for (double& x : v) x = -x;
    return UnitVector(std::move(v));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) {
    return std::sqrt(dot(a, a));
}

}  // namespace tpca
