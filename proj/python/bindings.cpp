// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tensorpca/config_io.hpp"
#include "tensorpca/diagnostics.hpp"
#include "tensorpca/eigensolver.hpp"
#include "tensorpca/harness.hpp"
#include "tensorpca/tensor_io.hpp"

namespace py = pybind11;
using namespace tpca;

namespace {

json py_to_json(const py::handle& obj) {
    if (obj.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj)) return obj.cast<std::int64_t>();
    if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    if (py::isinstance<py::dict>(obj)) {
        json j = json::object();
        for (auto item : obj.cast<py::dict>())
            j[item.first.cast<std::string>()] = py_to_json(item.second);
        return j;
    }
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        json j = json::array();
        for (auto item : obj.cast<py::sequence>()) j.push_back(py_to_json(item));
        return j;
    }
    throw std::invalid_argument("unsupported python value in config");
}

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return py::none();
        case json::value_t::boolean: return py::bool_(j.get<bool>());
        case json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
        case json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
        case json::value_t::number_float: return py::float_(j.get<double>());
        case json::value_t::string: return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& x : j) out.append(json_to_py(x));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default: throw std::logic_error("unexpected json value");
    }
}

SquareMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    const int d = static_cast<int>(rows.size());
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(d) * d);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != d)
            throw std::invalid_argument("matrix rows must form a square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return SquareMatrix::from_rows(d, std::move(flat));
}

std::vector<std::vector<double>> matrix_to_rows(const SquareMatrix& m) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.dim()));
    for (int i = 0; i < m.dim(); ++i) {
        rows[static_cast<std::size_t>(i)].assign(
            m.data().begin() + static_cast<std::ptrdiff_t>(i) * m.dim(),
            m.data().begin() + static_cast<std::ptrdiff_t>(i + 1) * m.dim());
    }
    return rows;
}

py::dict report_to_dict(const CheckReport& r) {
    py::dict d;
    d["name"] = r.name;
    d["max_abs_error"] = r.max_abs_error;
    d["max_rel_error"] = r.max_rel_error;
    d["trials"] = r.trials;
    d["pass"] = r.pass;
    d["tolerance"] = r.tolerance;
    return d;
}

RecoveryResult dispatch(const std::string& method, ObservationStream& stream,
                        const json& method_config, long num_samples) {
    if (method == "nsga")
        return nsga_even(stream, nsga_config_from_json(method_config, num_samples));
    if (method == "nsga_odd")
        return nsga_odd(stream, nsga_config_from_json(method_config, num_samples));
    const VectorSgaConfig cfg = vector_sga_config_from_json(method_config, num_samples);
    if (method == "sga") return sga_vector(stream, cfg);
    if (method == "sga_projected") return sga_projected(stream, cfg);
    if (method == "sga_accelerated") return sga_accelerated(stream, cfg);
    throw std::invalid_argument("unknown method: " + method);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spiked tensor PCA core operations";

    py::register_exception<BudgetExceededError>(m, "BudgetExceededError");

    py::class_<DenseTensor>(m, "DenseTensor")
        .def(py::init([](int order, int dim) { return DenseTensor(order, dim); }),
             py::arg("order"), py::arg("dim"))
        .def_static(
            "from_flat",
            [](int order, int dim, std::vector<double> data) {
                return DenseTensor::from_flat(order, dim, std::move(data));
            },
            py::arg("order"), py::arg("dim"), py::arg("data"))
        .def_property_readonly("order", &DenseTensor::order)
        .def_property_readonly("dim", &DenseTensor::dim)
        .def_property_readonly(
            "data",
            [](const DenseTensor& t) {
                return std::vector<double>(t.data().begin(), t.data().end());
            })
        .def("frobenius_norm", &DenseTensor::frobenius_norm)
        .def("__len__", &DenseTensor::size);

    m.def(
        "flat_index",
        [](const std::vector<int>& idx, int d) { return flat_index(idx, d); },
        py::arg("multi_index"), py::arg("d"),
        "1-based lexicographic flat position of a 1-based multi-index");
    m.def("multi_index_from_flat", &multi_index_from_flat, py::arg("flat_pos"), py::arg("d"),
          py::arg("k"));
    m.def(
        "rank_one_tensor",
        [](const std::vector<double>& v, int k) { return rank_one_tensor(v, k); },
        py::arg("v"), py::arg("k"));
    m.def("tensor_inner", &tensor_inner, py::arg("a"), py::arg("b"));
    m.def(
        "mode1_contract",
        [](const DenseTensor& t, const std::vector<double>& u) { return mode1_contract(t, u); },
        py::arg("t"), py::arg("u"));
    m.def("partial_trace_vector", &partial_trace_vector, py::arg("t"));
    m.def(
        "contract_matrix_power",
        [](const DenseTensor& t, const std::vector<std::vector<double>>& w) {
            return contract_matrix_power(t, matrix_from_rows(w));
        },
        py::arg("t"), py::arg("w"));
    m.def(
        "reward_gradient",
        [](const DenseTensor& t, const std::vector<std::vector<double>>& w) {
            return matrix_to_rows(reward_gradient(t, matrix_from_rows(w)));
        },
        py::arg("t"), py::arg("w"));
    m.def(
        "sym_top_eigenvector",
        [](const std::vector<std::vector<double>>& mat, double tol, long max_iter) {
            EigenResult r = sym_top_eigenvector(matrix_from_rows(mat), tol, max_iter);
            return py::make_tuple(r.vector.vec(), r.value);
        },
        py::arg("m"), py::arg("tol") = 1e-10, py::arg("max_iter") = 10000);

    m.def(
        "alignment",
        [](const std::vector<double>& v, const std::vector<std::vector<double>>& w) {
            return alignment(UnitVector::normalized(v), matrix_from_rows(w));
        },
        py::arg("v"), py::arg("w"));
    m.def(
        "recovery_error",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return recovery_error(UnitVector::from_unit(a), UnitVector::from_unit(b));
        },
        py::arg("vhat"), py::arg("vstar"));
    m.def("step_schedule", &step_schedule, py::arg("t"), py::arg("eta0"), py::arg("t1"));
    m.def(
        "default_eta0_even",
        [](int d, int k, double lam, long n) {
            Eta0Breakdown b = default_eta0_even(d, k, lam, n);
            py::dict out;
            out["log_branch"] = b.log_branch;
            out["dim_branch"] = b.dim_branch;
            out["value"] = b.value;
            return out;
        },
        py::arg("d"), py::arg("k"), py::arg("lambda_"), py::arg("num_samples"));
    m.def(
        "effective_snr",
        [](double lam, const std::vector<double>& vstar, const std::vector<double>& u) {
            return effective_snr(lam, UnitVector::from_unit(vstar), UnitVector::from_unit(u));
        },
        py::arg("lambda_"), py::arg("vstar"), py::arg("u"));
    m.def(
        "nsga_step",
        [](const std::vector<std::vector<double>>& w, const DenseTensor& t, double eta,
           double reward_sign) {
            SquareMatrix wm = matrix_from_rows(w);
            const double reward = nsga_step(wm, t, eta, reward_sign);
            return py::make_tuple(matrix_to_rows(wm), reward);
        },
        py::arg("w"), py::arg("t_even"), py::arg("eta"), py::arg("reward_sign") = 1.0);

    m.def(
        "sample_observation",
        [](const py::dict& stream_config, long count) {
            ObservationStream stream(stream_config_from_json(py_to_json(stream_config)));
            std::vector<DenseTensor> out;
            out.reserve(static_cast<std::size_t>(count));
            for (long i = 0; i < count; ++i) out.push_back(stream.next_observation());
            return out;
        },
        py::arg("stream_config"), py::arg("count") = 1,
        "draws `count` observations from a fresh stream");

    m.def(
        "run_method",
        [](const py::dict& stream_config, const std::string& method,
           const py::dict& method_config, long num_samples, bool include_trace) {
            ObservationStream stream(stream_config_from_json(py_to_json(stream_config)));
            RecoveryResult res = dispatch(method, stream, py_to_json(method_config), num_samples);
            py::dict out = json_to_py(recovery_result_to_json(res)).cast<py::dict>();
            out["signal"] = stream.signal().vec();
            if (include_trace) {
                py::dict tr;
                std::vector<long> t;
                std::vector<double> eta, alpha, fro, reward, error;
                for (const TraceRecord& r : res.trace.records) {
                    t.push_back(r.t);
                    eta.push_back(r.eta);
                    alpha.push_back(r.alpha);
                    fro.push_back(r.frob_norm);
                    reward.push_back(r.reward);
                    error.push_back(r.error);
                }
                tr["t"] = t;
                tr["eta"] = eta;
                tr["alpha"] = alpha;
                tr["frob_norm"] = fro;
                tr["reward"] = reward;
                tr["error"] = error;
                out["trace"] = tr;
            }
            return out;
        },
        py::arg("stream_config"), py::arg("method"), py::arg("method_config"),
        py::arg("num_samples"), py::arg("include_trace") = false);

    m.def(
        "noise_moment_check",
        [](const std::string& kind, double sigma, int d, int k, long n_samples, int directions,
           std::uint64_t seed) {
            return report_to_dict(noise_moment_check({noise_kind_from_name(kind), sigma}, d, k,
                                                     n_samples, directions, seed));
        },
        py::arg("kind"), py::arg("sigma"), py::arg("d"), py::arg("k"),
        py::arg("n_samples") = 100000, py::arg("directions") = 10, py::arg("seed") = 0);
    m.def(
        "subgaussian_tail_check",
        [](const std::string& kind, double sigma, int d, int k, long n_samples,
           std::uint64_t seed) {
            return report_to_dict(
                subgaussian_tail_check({noise_kind_from_name(kind), sigma}, d, k, n_samples, seed));
        },
        py::arg("kind"), py::arg("sigma"), py::arg("d"), py::arg("k"),
        py::arg("n_samples") = 100000, py::arg("seed") = 0);
    m.def(
        "gradient_check_suite",
        [](int d, int k, int trials, std::uint64_t seed) {
            return report_to_dict(gradient_check_suite(d, k, trials, seed));
        },
        py::arg("d"), py::arg("k"), py::arg("trials") = 20, py::arg("seed") = 7);

    m.def("save_tensor", &save_tensor, py::arg("path"), py::arg("t"));
    m.def(
        "load_tensor", [](const std::filesystem::path& p) { return load_tensor(p); },
        py::arg("path"));
}
