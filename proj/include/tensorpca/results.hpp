// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tensorpca/matrix.hpp"

namespace tpca {

struct TraceRecord {
    long t = 0;
    double eta = 0.0;
    double alpha = 0.0;
    double frob_norm = 0.0;
    double reward = 0.0;  // NaN when no sample was drawn at this record
    double error = 0.0;   // NaN when the estimate was not extracted here
};

/// Per-iteration diagnostics with strictly increasing t.
struct RunTrace {
    std::vector<TraceRecord> records;

    void append(TraceRecord rec);

    /// CSV with header `t,eta,alpha,frob_norm,reward,error`; floats printed
    /// with %.17g so identical runs produce byte-identical files.
    void write_csv(std::ostream& out) const;
};

struct RecoveryResult {
    UnitVector estimate;
    std::vector<UnitVector> candidates;  // even k: {estimate}; odd k: {+v1,-v1,+v2,-v2}
    int selected_instance = 0;           // odd k: 1 or 2; even k: 0
    double error = 0.0;                  // min-sign squared distance to the true signal
    long samples_used = 0;
    std::uint64_t seed = 0;
    RunTrace trace;
};

}  // namespace tpca
