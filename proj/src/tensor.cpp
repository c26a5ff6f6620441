// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/tensor.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace tpca {

BudgetExceededError::BudgetExceededError(int dim_, int order_, std::size_t budget_)
    : std::length_error("tensor of dim " + std::to_string(dim_) + " and order " +
                        std::to_string(order_) + " exceeds the element budget of " +
                        std::to_string(budget_)),
      dim(dim_),
      order(order_),
      budget(budget_) {}

std::size_t tensor_element_count(int dim, int order, std::size_t budget) {
    if (dim < 1) throw std::invalid_argument("tensor dim must be >= 1");
    if (order < 1) throw std::invalid_argument("tensor order must be >= 1");
    std::size_t n = 1;
    for (int i = 0; i < order; ++i) {
        if (n > budget / static_cast<std::size_t>(dim))
            throw BudgetExceededError(dim, order, budget);
        n *= static_cast<std::size_t>(dim);
    }
    if (n > budget) throw BudgetExceededError(dim, order, budget);
    return n;
}

DenseTensor::DenseTensor(int order, int dim, std::size_t budget)
    : order_(order), dim_(dim) {
    data_.assign(tensor_element_count(dim, order, budget), 0.0);
}

DenseTensor DenseTensor::from_flat(int order, int dim, std::vector<double> data,
                                   std::size_t budget) {
    const std::size_t n = tensor_element_count(dim, order, budget);
    if (data.size() != n)
        throw std::invalid_argument("DenseTensor::from_flat: data length != dim^order");
    DenseTensor t(order, dim, budget);
    t.data_ = std::move(data);
    return t;
}

double DenseTensor::frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

std::size_t flat_index(std::span<const int> multi_index, int dim) {
    if (multi_index.empty()) throw std::invalid_argument("flat_index: empty multi-index");
    std::size_t pos = 0;
    for (int idx : multi_index) {
        if (idx < 1 || idx > dim)
            throw std::out_of_range("flat_index: index " + std::to_string(idx) +
                                    " outside [1, " + std::to_string(dim) + "]");
        pos = pos * static_cast<std::size_t>(dim) + static_cast<std::size_t>(idx - 1);
    }
    return pos + 1;
}

std::vector<int> multi_index_from_flat(std::size_t flat_pos, int dim, int order) {
    const std::size_t n = tensor_element_count(dim, order, std::numeric_limits<std::size_t>::max());
    if (flat_pos < 1 || flat_pos > n)
        throw std::out_of_range("multi_index_from_flat: position outside [1, dim^order]");
    std::vector<int> idx(static_cast<std::size_t>(order));
    std::size_t rem = flat_pos - 1;
    for (int m = order - 1; m >= 0; --m) {
        idx[static_cast<std::size_t>(m)] =
            static_cast<int>(rem % static_cast<std::size_t>(dim)) + 1;
        rem /= static_cast<std::size_t>(dim);
    }
    return idx;
}

DenseTensor rank_one_tensor(std::span<const double> v, int order, std::size_t budget) {
    const int d = static_cast<int>(v.size());
    DenseTensor t(order, d, budget);
    // Repeated Kronecker expansion: after step m the buffer holds v^{(x)m}.
    std::span<double> out = t.data();
    out[0] = 1.0;
    std::size_t len = 1;
    for (int m = 0; m < order; ++m) {
        // Expand in place from the back so the source block is not clobbered.
        for (std::size_t i = static_cast<std::size_t>(d); i-- > 0;) {
            const double vi = v[i];
            const std::size_t base = i * len;
            for (std::size_t q = len; q-- > 0;) out[base + q] = vi * out[q];
        }
        len *= static_cast<std::size_t>(d);
    }
    return t;
}

double tensor_inner(const DenseTensor& a, const DenseTensor& b) {
    if (a.order() != b.order() || a.dim() != b.dim())
        throw std::invalid_argument("tensor_inner: shape mismatch");
    const double* pa = a.data().data();
    const double* pb = b.data().data();
    double s = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) s += pa[i] * pb[i];
    return s;
}

DenseTensor mode1_contract(const DenseTensor& t, std::span<const double> u) {
    if (t.order() < 2) throw std::invalid_argument("mode1_contract: order must be >= 2");
    if (static_cast<int>(u.size()) != t.dim())
        throw std::invalid_argument("mode1_contract: dim mismatch");
    const int d = t.dim();
    DenseTensor r(t.order() - 1, d);
    const std::size_t block = r.size();
    const double* src = t.data().data();
    double* dst = r.data().data();
    for (int i = 0; i < d; ++i) {
        const double ui = u[static_cast<std::size_t>(i)];
        const double* s = src + static_cast<std::size_t>(i) * block;
        for (std::size_t q = 0; q < block; ++q) dst[q] += ui * s[q];
    }
    return r;
}

DenseTensor contract_last_mode(const DenseTensor& t, std::span<const double> u) {
    if (t.order() < 2) throw std::invalid_argument("contract_last_mode: order must be >= 2");
    if (static_cast<int>(u.size()) != t.dim())
        throw std::invalid_argument("contract_last_mode: dim mismatch");
    const int d = t.dim();
    DenseTensor r(t.order() - 1, d);
    const std::size_t rows = r.size();
    const double* src = t.data().data();
    double* dst = r.data().data();
    for (std::size_t q = 0; q < rows; ++q) {
        const double* row = src + q * static_cast<std::size_t>(d);
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += row[j] * u[static_cast<std::size_t>(j)];
        dst[q] = s;
    }
    return r;
}

double contract_all_modes(const DenseTensor& t, std::span<const double> v) {
    if (static_cast<int>(v.size()) != t.dim())
        throw std::invalid_argument("contract_all_modes: dim mismatch");
    if (t.order() == 1) {
        double s = 0.0;
        for (int i = 0; i < t.dim(); ++i) s += t.data()[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        return s;
    }
    DenseTensor cur = mode1_contract(t, v);
    while (cur.order() > 1) cur = mode1_contract(cur, v);
    double s = 0.0;
    for (int i = 0; i < cur.dim(); ++i) s += cur.data()[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    return s;
}

std::vector<double> partial_trace_vector(const DenseTensor& t) {
    const int k = t.order();
    if (k % 2 == 0 || k < 3)
        throw std::invalid_argument("partial_trace_vector: order must be odd and >= 3");
    const int d = t.dim();
    const int pairs = (k - 1) / 2;
    // Stride of mode m (1-based) in flat storage is d^{k-m}; pair p couples
    // modes (2p, 2p+1), so one unit of its index advances the flat position by
    // d^{k-2p} + d^{k-2p-1}.
    std::vector<std::size_t> pair_stride(static_cast<std::size_t>(pairs));
    {
        std::vector<std::size_t> mode_stride(static_cast<std::size_t>(k));
        mode_stride[static_cast<std::size_t>(k - 1)] = 1;
        for (int m = k - 2; m >= 0; --m)
            mode_stride[static_cast<std::size_t>(m)] =
                mode_stride[static_cast<std::size_t>(m + 1)] * static_cast<std::size_t>(d);
        for (int p = 0; p < pairs; ++p)
            pair_stride[static_cast<std::size_t>(p)] =
                mode_stride[static_cast<std::size_t>(2 * p + 1)] +
                mode_stride[static_cast<std::size_t>(2 * p + 2)];
    }
    const std::size_t mode1_stride = t.size() / static_cast<std::size_t>(d);
    const double* src = t.data().data();
    std::vector<double> out(static_cast<std::size_t>(d), 0.0);

    std::vector<int> j(static_cast<std::size_t>(pairs), 0);
    std::size_t offset = 0;
    while (true) {
        for (int i = 0; i < d; ++i)
            out[static_cast<std::size_t>(i)] +=
                src[static_cast<std::size_t>(i) * mode1_stride + offset];
        int p = pairs - 1;
        for (; p >= 0; --p) {
            j[static_cast<std::size_t>(p)] += 1;
            offset += pair_stride[static_cast<std::size_t>(p)];
            if (j[static_cast<std::size_t>(p)] < d) break;
            offset -= pair_stride[static_cast<std::size_t>(p)] * static_cast<std::size_t>(d);
            j[static_cast<std::size_t>(p)] = 0;
        }
        if (p < 0) break;
    }
    return out;
}

}  // namespace tpca
