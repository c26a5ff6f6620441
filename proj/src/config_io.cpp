// SPDX-License-Identifier: Apache-2.0
#include "tensorpca/config_io.hpp"

namespace tpca {

namespace {

void require_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
    for (const char* key : keys)
        if (!j.contains(key))
            throw std::invalid_argument(std::string(what) + ": missing key '" + key + "'");
}

std::vector<double> doubles_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) v.push_back(x.get<double>());
    return v;
}

}  // namespace

NoiseModel noise_model_from_json(const json& j) {
    require_keys(j, {"kind", "sigma"}, "noise");
    NoiseModel m;
    m.kind = noise_kind_from_name(j.at("kind").get<std::string>());
    m.sigma = j.at("sigma").get<double>();
    if (m.sigma < 0.0) throw std::invalid_argument("noise: sigma must be >= 0");
    return m;
}

json noise_model_to_json(const NoiseModel& m) {
    return json{{"kind", noise_kind_name(m.kind)}, {"sigma", m.sigma}};
}

StreamConfig stream_config_from_json(const json& j) {
    require_keys(j, {"d", "k", "lambda", "noise", "seed"}, "stream config");
    StreamConfig c;
    c.d = j.at("d").get<int>();
    c.k = j.at("k").get<int>();
    c.lambda = j.at("lambda").get<double>();
    c.noise = noise_model_from_json(j.at("noise"));
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("signal") && !j.at("signal").is_null())
        c.signal = UnitVector::normalized(doubles_from_json(j.at("signal"), "signal"));
    return c;
}

json stream_config_to_json(const StreamConfig& c) {
    json j{{"d", c.d},
           {"k", c.k},
           {"lambda", c.lambda},
           {"noise", noise_model_to_json(c.noise)},
           {"seed", c.seed},
           {"rng", Rng::algorithm()}};
    if (c.signal) j["signal"] = c.signal->vec();
    return j;
}

NsgaConfig nsga_config_from_json(const json& j, long num_samples) {
    NsgaConfig c;
    c.num_samples = num_samples;
    if (j.contains("eta0") && !j.at("eta0").is_null()) {
        const auto& e = j.at("eta0");
        if (e.is_string()) {
            if (e.get<std::string>() != "auto")
                throw std::invalid_argument("nsga config: eta0 must be a number or \"auto\"");
        } else {
            c.eta0 = e.get<double>();
        }
    }
    if (j.contains("eta0_scale")) c.eta0_scale = j.at("eta0_scale").get<double>();
    if (j.contains("T1") && !j.at("T1").is_null()) c.decay_phase = j.at("T1").get<long>();
    if (j.contains("trace_every")) c.trace_every = j.at("trace_every").get<long>();
    if (j.contains("trace_errors")) c.trace_errors = j.at("trace_errors").get<bool>();
    if (j.contains("selection")) {
        const json& s = j.at("selection");
        const std::string kind = s.at("kind").get<std::string>();
        if (kind == "random_pick") {
            c.selection = RandomPickSelection{};
        } else if (kind == "holdout") {
            HoldoutSelection h;
            if (s.contains("fraction")) h.fraction = s.at("fraction").get<double>();
            c.selection = h;
        } else {
            throw std::invalid_argument("nsga config: unknown selection kind " + kind);
        }
    }
    if (j.contains("preprocess")) {
        const json& p = j.at("preprocess");
        const std::string kind = p.at("kind").get<std::string>();
        if (kind == "random_unit") {
            c.preprocess = RandomUnitPreprocess{};
        } else if (kind == "partial_trace") {
            PartialTracePreprocess pt;
            pt.n1 = p.at("n1").get<long>();
            c.preprocess = pt;
        } else if (kind == "given") {
            c.preprocess = GivenPreprocess{
                UnitVector::normalized(doubles_from_json(p.at("u"), "preprocess.u"))};
        } else {
            throw std::invalid_argument("nsga config: unknown preprocess kind " + kind);
        }
    }
    return c;
}

json nsga_config_to_json(const NsgaConfig& c) {
    json j;
    j["N"] = c.num_samples;
    if (c.eta0)
        j["eta0"] = *c.eta0;
    else
        j["eta0"] = "auto";
    j["eta0_scale"] = c.eta0_scale;
    if (c.decay_phase) j["T1"] = *c.decay_phase;
    j["trace_every"] = c.trace_every;
    j["trace_errors"] = c.trace_errors;
    if (std::holds_alternative<RandomPickSelection>(c.selection)) {
        j["selection"] = json{{"kind", "random_pick"}};
    } else {
        j["selection"] = json{{"kind", "holdout"},
                              {"fraction", std::get<HoldoutSelection>(c.selection).fraction}};
    }
    if (std::holds_alternative<RandomUnitPreprocess>(c.preprocess)) {
        j["preprocess"] = json{{"kind", "random_unit"}};
    } else if (const auto* pt = std::get_if<PartialTracePreprocess>(&c.preprocess)) {
        j["preprocess"] = json{{"kind", "partial_trace"}, {"n1", pt->n1}};
    } else {
        j["preprocess"] =
            json{{"kind", "given"}, {"u", std::get<GivenPreprocess>(c.preprocess).u.vec()}};
    }
    return j;
}

VectorSgaConfig vector_sga_config_from_json(const json& j, long num_samples) {
    VectorSgaConfig c;
    c.num_samples = num_samples;
    require_keys(j, {"eta0"}, "vector sga config");
    c.eta0 = j.at("eta0").get<double>();
    if (j.contains("T1") && !j.at("T1").is_null()) c.decay_phase = j.at("T1").get<long>();
    if (j.contains("momentum")) c.momentum = j.at("momentum").get<double>();
    if (j.contains("normalize_each_step"))
        c.normalize_each_step = j.at("normalize_each_step").get<bool>();
    if (j.contains("init") && !j.at("init").is_null())
        c.init = UnitVector::normalized(doubles_from_json(j.at("init"), "init"));
    if (j.contains("trace_every")) c.trace_every = j.at("trace_every").get<long>();
    return c;
}

json vector_sga_config_to_json(const VectorSgaConfig& c) {
    json j;
    j["N"] = c.num_samples;
    j["eta0"] = c.eta0;
    if (c.decay_phase) j["T1"] = *c.decay_phase;
    j["momentum"] = c.momentum;
    j["normalize_each_step"] = c.normalize_each_step;
    if (c.init) j["init"] = c.init->vec();
    j["trace_every"] = c.trace_every;
    return j;
}

json recovery_result_to_json(const RecoveryResult& r) {
    json cands = json::array();
    for (const UnitVector& c : r.candidates) cands.push_back(c.vec());
    return json{{"seed", r.seed},
                {"rng", Rng::algorithm()},
                {"estimate", r.estimate.vec()},
                {"candidates", cands},
                {"selected_instance", r.selected_instance},
                {"error", r.error},
                {"samples_used", r.samples_used}};
}

}  // namespace tpca
