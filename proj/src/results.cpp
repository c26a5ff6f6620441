// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/results.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace tpca {

void RunTrace::append(TraceRecord rec) {
    if (!records.empty() && rec.t <= records.back().t)
        throw std::logic_error("RunTrace: t must be strictly increasing");
    records.push_back(rec);
}

void RunTrace::write_csv(std::ostream& out) const {
    out << "t,eta,alpha,frob_norm,reward,error\n";
    char buf[160];
    for (const TraceRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.eta,
                      r.alpha, r.frob_norm, r.reward, r.error);
        out << buf;
    }
}

}  // namespace tpca
