// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace tpca {

/// Dense d x d real matrix, row-major storage.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(int dim);  // zero-initialized

    static SquareMatrix identity(int dim);

    /// Builds from external row-major entries; rejects NaN/Inf and size
    /// mismatches.
    static SquareMatrix from_rows(int dim, std::vector<double> entries);

    int dim() const { return dim_; }

    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * dim_ + j]; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * dim_ + j]; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    double frobenius_norm() const;

    /// v^T M v for a length-d vector.
    double quad_form(std::span<const double> v) const;

    /// <A, B> = tr(A^T B), the entrywise inner product.
    static double inner(const SquareMatrix& a, const SquareMatrix& b);

    /// M + M^T.
    SquareMatrix transpose_sum() const;

    bool all_finite() const;

    /// *this = a * (*this) + b * other. The workhorse of the optimizer loop.
    void scale_add(double a, double b, const SquareMatrix& other);

private:
    int dim_ = 0;
    std::vector<double> data_;
};

/// Euclidean unit vector; norm checked to 1 +/- 1e-12 on construction from
/// external data.
class UnitVector {
public:
    UnitVector() = default;

    /// Normalizes v; throws on zero or non-finite input.
    static UnitVector normalized(std::vector<double> v);

    /// Accepts v only if already unit to 1e-12.
    static UnitVector from_unit(std::vector<double> v);

    int dim() const { return static_cast<int>(data_.size()); }
    double operator[](int i) const { return data_[static_cast<std::size_t>(i)]; }
    std::span<const double> data() const { return data_; }
    const std::vector<double>& vec() const { return data_; }

    UnitVector negated() const;

private:
    explicit UnitVector(std::vector<double> v) : data_(std::move(v)) {}
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace tpca
