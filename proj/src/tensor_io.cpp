// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/tensor_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace tpca {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'K', 'T'};
constexpr std::uint32_t kVersion = 1;

std::uint32_t to_le32(std::uint32_t x) {
    if constexpr (std::endian::native == std::endian::little) return x;
    return ((x & 0xFFu) << 24) | ((x & 0xFF00u) << 8) | ((x >> 8) & 0xFF00u) | (x >> 24);
}

std::uint64_t byteswap64(std::uint64_t x) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((x >> (8 * i)) & 0xFFu);
    return r;
}

}  // namespace

void save_tensor(const std::filesystem::path& path, const DenseTensor& t) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("save_tensor: cannot open " + path.string());
    out.write(kMagic, 4);
    const std::uint32_t header[3] = {to_le32(kVersion),
                                     to_le32(static_cast<std::uint32_t>(t.order())),
                                     to_le32(static_cast<std::uint32_t>(t.dim()))};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(t.data().data()),
                  static_cast<std::streamsize>(t.size() * sizeof(double)));
    } else {
        for (double x : t.data()) {
            std::uint64_t bits = byteswap64(std::bit_cast<std::uint64_t>(x));
            out.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
        }
    }
    if (!out) throw std::runtime_error("save_tensor: write failed for " + path.string());
}

DenseTensor load_tensor(const std::filesystem::path& path, std::size_t budget) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_tensor: cannot open " + path.string());
    char magic[4];
    std::uint32_t header[3];
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_tensor: bad magic in " + path.string());
    const std::uint32_t version = to_le32(header[0]);
    if (version != kVersion)
        throw std::runtime_error("load_tensor: unsupported version " + std::to_string(version));
    const int k = static_cast<int>(to_le32(header[1]));
    const int d = static_cast<int>(to_le32(header[2]));
    const std::size_t n = tensor_element_count(d, k, budget);
    std::vector<double> data(n);
    if constexpr (std::endian::native == std::endian::little) {
        in.read(reinterpret_cast<char*>(data.data()),
                static_cast<std::streamsize>(n * sizeof(double)));
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t bits;
            in.read(reinterpret_cast<char*>(&bits), sizeof(bits));
            data[i] = std::bit_cast<double>(byteswap64(bits));
        }
    }
    if (!in) throw std::runtime_error("load_tensor: truncated payload in " + path.string());
    return DenseTensor::from_flat(k, d, std::move(data), budget);
}

}  // namespace tpca
