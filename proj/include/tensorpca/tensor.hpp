// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace tpca {

/// Default cap on d^k; construction past it throws rather than truncating.
inline constexpr std::size_t kDefaultElementBudget = std::size_t{1} << 27;

class BudgetExceededError : public std::length_error {
public:
    BudgetExceededError(int dim, int order, std::size_t budget);
    int dim;
    int order;
    std::size_t budget;
};

/// Checked d^order; throws BudgetExceededError when the count exceeds budget
/// (overflow included).
std::size_t tensor_element_count(int dim, int order, std::size_t budget);

/// Dense order-k, dimension-d real tensor stored flat in lexicographic order:
/// position of (i_1,...,i_k), 1-based, is (i_1-1)d^{k-1} + ... + (i_{k-1}-1)d + i_k.
class DenseTensor {
public:
    DenseTensor(int order, int dim, std::size_t budget = kDefaultElementBudget);

    static DenseTensor from_flat(int order, int dim, std::vector<double> data,
                                 std::size_t budget = kDefaultElementBudget);

    int order() const { return order_; }
    int dim() const { return dim_; }
    std::size_t size() const { return data_.size(); }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    double frobenius_norm() const;

private:
    int order_ = 0;
    int dim_ = 0;
    std::vector<double> data_;
};

/// Lexicographic flat position of a multi-index, 1-based on both sides.
/// Storage inside DenseTensor is 0-based; this defines the file and API
/// convention.
std::size_t flat_index(std::span<const int> multi_index, int dim);

/// Inverse of flat_index: 1-based flat position back to the 1-based tuple.
std::vector<int> multi_index_from_flat(std::size_t flat_pos, int dim, int order);

/// v^{tensor-power order}; entry at (i_1,...,i_k) is the product of v(i_j).
DenseTensor rank_one_tensor(std::span<const double> v, int order,
                            std::size_t budget = kDefaultElementBudget);

/// Entrywise dot product of identically shaped tensors.
double tensor_inner(const DenseTensor& a, const DenseTensor& b);

/// Applies u to the first mode: result(i_2,...,i_k) = sum_i u(i) T(i,i_2,...,i_k).
DenseTensor mode1_contract(const DenseTensor& t, std::span<const double> u);

/// Applies u to the last mode: result(i_1,...,i_{k-1}) = sum_j T(...,j) u(j).
DenseTensor contract_last_mode(const DenseTensor& t, std::span<const double> u);

/// <v^{tensor-power k}, T>, computed by k successive mode contractions.
double contract_all_modes(const DenseTensor& t, std::span<const double> v);

/// Partial trace of an odd-order tensor: mode 1 stays free, modes (2,3),
/// (4,5), ... are contracted pairwise against the identity:
/// result(i) = sum_{j_1,...,j_p} T(i, j_1, j_1, ..., j_p, j_p). Not normalized.
std::vector<double> partial_trace_vector(const DenseTensor& t);

}  // namespace tpca
