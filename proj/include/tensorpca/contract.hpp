// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tensorpca/matrix.hpp"
#include "tensorpca/tensor.hpp"

namespace tpca {

/// Contracts the first two modes of T against W:
/// result(i_3,...,i_k) = sum_{a,b} W(a,b) T(a,b,i_3,...,i_k).
DenseTensor contract_front_pair(const DenseTensor& t, const SquareMatrix& w);

/// Contracts the last two modes of T against W:
/// result(i_1,...,i_{k-2}) = sum_{a,b} T(...,a,b) W(a,b).
DenseTensor contract_back_pair(const DenseTensor& t, const SquareMatrix& w);

/// <W^{(x)m}, T> for T of even order 2m, with W's (row, col) modes paired to
/// T's modes (1,2), (3,4), ..., (2m-1, 2m). Computed by m successive
/// front-pair contractions.
double contract_matrix_power(const DenseTensor& t, const SquareMatrix& w);

/// Gradient of W -> <W^{(x)m}, T>: entry (i,j) sums the single-slot
/// contractions over all m slots. The full sum is required because sampled
/// noise tensors are not symmetric.
SquareMatrix reward_gradient(const DenseTensor& t, const SquareMatrix& w);

}  // namespace tpca
