// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/contract.hpp"

namespace tpca {

namespace {

void check_even_pairing(const DenseTensor& t, const SquareMatrix& w, const char* who) {
    if (t.order() % 2 != 0)
        throw std::invalid_argument(std::string(who) + ": tensor order must be even");
    if (t.dim() != w.dim())
        throw std::invalid_argument(std::string(who) + ": tensor/matrix dim mismatch");
}

}  // namespace

DenseTensor contract_front_pair(const DenseTensor& t, const SquareMatrix& w) {
    if (t.order() < 2) throw std::invalid_argument("contract_front_pair: order must be >= 2");
    if (t.dim() != w.dim()) throw std::invalid_argument("contract_front_pair: dim mismatch");
    const int d = t.dim();
    DenseTensor r(t.order() - 2, d);
    const std::size_t block = r.size();
    const std::size_t npairs = static_cast<std::size_t>(d) * d;
    const double* src = t.data().data();
    const double* wf = w.data().data();
    double* dst = r.data().data();
    for (std::size_t p = 0; p < npairs; ++p) {
        const double wp = wf[p];
        if (wp == 0.0) continue;
        const double* s = src + p * block;
        for (std::size_t q = 0; q < block; ++q) dst[q] += wp * s[q];
    }
    return r;
}

DenseTensor contract_back_pair(const DenseTensor& t, const SquareMatrix& w) {
    if (t.order() < 2) throw std::invalid_argument("contract_back_pair: order must be >= 2");
    if (t.dim() != w.dim()) throw std::invalid_argument("contract_back_pair: dim mismatch");
    const int d = t.dim();
    DenseTensor r(t.order() - 2, d);
    const std::size_t rows = r.size();
    const std::size_t npairs = static_cast<std::size_t>(d) * d;
    const double* src = t.data().data();
    const double* wf = w.data().data();
    double* dst = r.data().data();
    for (std::size_t q = 0; q < rows; ++q) {
        const double* row = src + q * npairs;
        double s = 0.0;
        for (std::size_t p = 0; p < npairs; ++p) s += row[p] * wf[p];
        dst[q] = s;
    }
    return r;
}

double contract_matrix_power(const DenseTensor& t, const SquareMatrix& w) {
    check_even_pairing(t, w, "contract_matrix_power");
    const int m = t.order() / 2;
    if (m == 1) {
        // order-2 tensor: plain entrywise product with W
        const double* src = t.data().data();
        const double* wf = w.data().data();
        double s = 0.0;
        const std::size_t n = t.size();
        for (std::size_t i = 0; i < n; ++i) s += src[i] * wf[i];
        return s;
    }
    DenseTensor cur = contract_front_pair(t, w);
    while (cur.order() > 2) cur = contract_front_pair(cur, w);
    const double* src = cur.data().data();
    const double* wf = w.data().data();
    double s = 0.0;
    const std::size_t n = cur.size();
    for (std::size_t i = 0; i < n; ++i) s += src[i] * wf[i];
    return s;
}

SquareMatrix reward_gradient(const DenseTensor& t, const SquareMatrix& w) {
    check_even_pairing(t, w, "reward_gradient");
    const int d = t.dim();
    const int m = t.order() / 2;
    SquareMatrix g(d);

    // Slot l of m leaves T's pair l free, contracts pairs 1..l-1 (front) and
    // pairs l+1..m (back) against W. The running `front` tensor carries the
    // front contractions so they are shared across slots.
    const DenseTensor* front = &t;
    DenseTensor front_store(2, d);  // placeholder; replaced on first front step
    for (int slot = 1; slot <= m; ++slot) {
        if (m - slot == 0) {
            // front tensor is already order 2: it IS the slot term
            const double* src = front->data().data();
            double* dst = g.data().data();
            const std::size_t n = front->size();
            for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
        } else {
            DenseTensor cur = contract_back_pair(*front, w);
            while (cur.order() > 2) cur = contract_back_pair(cur, w);
            const double* src = cur.data().data();
            double* dst = g.data().data();
            const std::size_t n = cur.size();
            for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
        }
        if (slot < m) {
            front_store = contract_front_pair(*front, w);
            front = &front_store;
        }
    }
    return g;
}

}  // namespace tpca
