// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "tensorpca/baselines.hpp"
#include "tensorpca/noise.hpp"
#include "tensorpca/optim.hpp"
#include "tensorpca/results.hpp"
#include "tensorpca/stream.hpp"

namespace tpca {

using nlohmann::json;

// Stream configs: {d, k, lambda, noise:{kind, sigma}, seed, signal?: [floats]}
NoiseModel noise_model_from_json(const json& j);
json noise_model_to_json(const NoiseModel& m);

StreamConfig stream_config_from_json(const json& j);
json stream_config_to_json(const StreamConfig& c);

/// Method config for nsga / nsga_odd. Recognized keys: eta0 ("auto" or
/// number), eta0_scale, T1, selection {kind: holdout|random_pick, fraction},
/// preprocess {kind: random_unit|partial_trace|given, n1, u}, trace_every,
/// trace_errors. `num_samples` is supplied by the caller (the harness grid).
NsgaConfig nsga_config_from_json(const json& j, long num_samples);
json nsga_config_to_json(const NsgaConfig& c);

/// Method config for the vector baselines. Recognized keys: eta0 (required),
/// T1, momentum, normalize_each_step, init, trace_every.
VectorSgaConfig vector_sga_config_from_json(const json& j, long num_samples);
json vector_sga_config_to_json(const VectorSgaConfig& c);

/// RecoveryResult without the trace (the trace has its own CSV format).
json recovery_result_to_json(const RecoveryResult& r);

}  // namespace tpca
