// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "tensorpca/tensor.hpp"

namespace tpca {

/// Binary tensor file: magic "SPKT", then u32 version (currently 1), u32 k,
/// u32 d, followed by d^k IEEE-754 doubles, all little-endian, in flat_index
/// order.
void save_tensor(const std::filesystem::path& path, const DenseTensor& t);

DenseTensor load_tensor(const std::filesystem::path& path,
                        std::size_t budget = kDefaultElementBudget);

}  // namespace tpca
