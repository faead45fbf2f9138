#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qreservoir/experiment.hpp"
#include "qreservoir/version.hpp"

namespace py = pybind11;
using namespace qrc;

namespace {

// Lets python classes with fit/predict act as the forecasting model.
class PyEstimator : public Estimator {
public:
    using Estimator::Estimator;
    void fit(const Matrix& features, const Matrix& targets) override {
        PYBIND11_OVERRIDE_PURE(void, Estimator, fit, features, targets);
    }
    Matrix predict(const Matrix& features) const override {
        PYBIND11_OVERRIDE_PURE(Matrix, Estimator, predict, features);
    }
};

Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    m.rows = rows.size();
    for (const auto& r : rows) {
        if (m.cols == 0) m.cols = r.size();
        if (r.size() != m.cols) throw ValidationError("matrix rows have differing lengths");
        m.data.insert(m.data.end(), r.begin(), r.end());
    }
    return m;
}

std::vector<std::vector<double>> matrix_to_rows(const Matrix& m) {
    std::vector<std::vector<double>> rows(m.rows, std::vector<double>(m.cols));
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) rows[r][c] = m.at(r, c);
    }
    return rows;
}

RunOptions run_options(std::int64_t shots, std::uint64_t seed, double noise, int threads) {
    RunOptions opts;
    opts.shots = shots;
    opts.seed = seed;
    opts.noise_p = noise;
    opts.threads = threads;
    return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "quantum reservoir computing toolkit: trajectory statevector simulation, "
              "hook-based reservoir schemes, linear readout, closed-loop forecasting";

    py::register_exception<ValidationError>(m, "QrcValidationError", PyExc_ValueError);
    py::register_exception<IndexError>(m, "QrcIndexError", PyExc_IndexError);
    py::register_exception<CapacityError>(m, "QrcCapacityError", PyExc_ValueError);
    py::register_exception<SchemeError>(m, "QrcSchemeError", PyExc_RuntimeError);
    py::register_exception<DecodeError>(m, "QrcDecodeError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "QrcConfigError", PyExc_ValueError);

    // --- randomness --------------------------------------------------------
    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id") = 0)
        .def("uniform", &RngStream::uniform)
        .def("gaussian", &RngStream::gaussian)
        .def("next_u64", &RngStream::next_u64);
    m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("salt"));

    // --- simulator ---------------------------------------------------------
    py::class_<UnitaryMatrix>(m, "UnitaryMatrix")
        .def(py::init<int, std::vector<cplx>>(), py::arg("k_qubits"), py::arg("entries"))
        .def_property_readonly("k_qubits", &UnitaryMatrix::k_qubits)
        .def_property_readonly("dim", &UnitaryMatrix::dim)
        .def("entries", &UnitaryMatrix::entries)
        .def("at", &UnitaryMatrix::at, py::arg("row"), py::arg("col"))
        .def("unitarity_error", &UnitaryMatrix::unitarity_error)
        .def("to_text", &UnitaryMatrix::to_text);

    auto gates_mod = m.def_submodule("gates", "standard named gates (LSB-first convention)");
    gates_mod.def("h", &gates::h);
    gates_mod.def("x", &gates::x);
    gates_mod.def("y", &gates::y);
    gates_mod.def("z", &gates::z);
    gates_mod.def("rx", &gates::rx, py::arg("theta"));
    gates_mod.def("ry", &gates::ry, py::arg("theta"));
    gates_mod.def("rz", &gates::rz, py::arg("theta"));
    gates_mod.def("cx", &gates::cx);
    gates_mod.def("identity", &gates::identity, py::arg("k_qubits"));

    m.def(
        "haar_random_unitary",
        [](int k_qubits, std::uint64_t seed, std::uint64_t stream_id) {
            RngStream rng(seed, stream_id);
            return haar_random_unitary(k_qubits, rng);
        },
        py::arg("k_qubits"), py::arg("seed"), py::arg("stream_id") = 0);

    py::class_<StateVector>(m, "StateVector")
        .def(py::init<int>(), py::arg("n_qubits"))
        .def_property_readonly("n_qubits", &StateVector::n_qubits)
        .def_property_readonly("dim", &StateVector::dim)
        .def("amplitudes", &StateVector::amplitudes)
        .def("norm_sq", &StateVector::norm_sq)
        .def("reset_to_zero", &StateVector::reset_to_zero)
        .def("apply_unitary", &StateVector::apply_unitary, py::arg("u"), py::arg("targets"))
        .def("probabilities", &StateVector::probabilities, py::arg("qubits"))
        .def("measure", &StateVector::measure, py::arg("qubits"), py::arg("rng"))
        .def("reset", &StateVector::reset, py::arg("qubit"), py::arg("rng"))
        .def("prepare", &StateVector::prepare, py::arg("qubits"), py::arg("target_amps"),
             py::arg("rng"))
        .def("apply_depolarizing", &StateVector::apply_depolarizing, py::arg("qubit"),
             py::arg("p"), py::arg("rng"))
        .def("apply_pauli", &StateVector::apply_pauli, py::arg("pauli"), py::arg("qubit"))
        .def("to_text", &StateVector::to_text);

    // --- circuits ----------------------------------------------------------
    py::enum_<InstrKind>(m, "InstrKind")
        .value("Unitary", InstrKind::Unitary)
        .value("Prepare", InstrKind::Prepare)
        .value("Measure", InstrKind::Measure)
        .value("Noise", InstrKind::Noise);

    py::class_<Instruction>(m, "Instruction")
        .def_readonly("kind", &Instruction::kind)
        .def_readonly("qubits", &Instruction::qubits)
        .def_readonly("clbits", &Instruction::clbits)
        .def_readonly("label", &Instruction::label)
        .def_readonly("tag", &Instruction::tag);

    py::class_<Circuit>(m, "Circuit")
        .def_readonly("n_qubits", &Circuit::n_qubits)
        .def_readonly("n_clbits", &Circuit::n_clbits)
        .def_readonly("instructions", &Circuit::instructions);

    py::class_<CircuitBuilder>(m, "CircuitBuilder")
        .def(py::init<int>(), py::arg("n_qubits"))
        .def("add_unitary",
             static_cast<CircuitBuilder& (CircuitBuilder::*)(const UnitaryMatrix&,
                                                             const std::vector<int>&, std::string)>(
                 &CircuitBuilder::add_unitary),
             py::arg("u"), py::arg("targets"), py::arg("label") = "U",
             py::return_value_policy::reference_internal)
        .def("add_h", &CircuitBuilder::add_h, py::return_value_policy::reference_internal)
        .def("add_x", &CircuitBuilder::add_x, py::return_value_policy::reference_internal)
        .def("add_y", &CircuitBuilder::add_y, py::return_value_policy::reference_internal)
        .def("add_z", &CircuitBuilder::add_z, py::return_value_policy::reference_internal)
        .def("add_rx", &CircuitBuilder::add_rx, py::arg("qubit"), py::arg("theta"),
             py::return_value_policy::reference_internal)
        .def("add_ry", &CircuitBuilder::add_ry, py::arg("qubit"), py::arg("theta"),
             py::return_value_policy::reference_internal)
        .def("add_rz", &CircuitBuilder::add_rz, py::arg("qubit"), py::arg("theta"),
             py::return_value_policy::reference_internal)
        .def("add_cx", &CircuitBuilder::add_cx, py::arg("control"), py::arg("target"),
             py::return_value_policy::reference_internal)
        .def("add_prepare", &CircuitBuilder::add_prepare, py::arg("amps"), py::arg("targets"),
             py::return_value_policy::reference_internal)
        .def("add_measure", &CircuitBuilder::add_measure, py::arg("qubits"), py::arg("clbits"),
             py::return_value_policy::reference_internal)
        .def("measure_all", &CircuitBuilder::measure_all,
             py::return_value_policy::reference_internal)
        .def("add_depolarizing", &CircuitBuilder::add_depolarizing, py::arg("qubit"),
             py::arg("p"), py::return_value_policy::reference_internal)
        .def("set_tag", &CircuitBuilder::set_tag, py::arg("tag"))
        .def("clear_tag", &CircuitBuilder::clear_tag)
        .def_property_readonly("n_qubits", &CircuitBuilder::n_qubits)
        .def_property_readonly("n_clbits", &CircuitBuilder::n_clbits)
        .def("qubits", &CircuitBuilder::qubits)
        .def("build", static_cast<Circuit (CircuitBuilder::*)() const&>(&CircuitBuilder::build));

    m.def("validate", &validate, py::arg("circuit"));
    m.def("render_text", &render_text, py::arg("circuit"));
    m.def("structurally_equal", &structurally_equal, py::arg("a"), py::arg("b"));

    py::class_<ShotTable>(m, "ShotTable")
        .def_readonly("shots", &ShotTable::shots)
        .def_readonly("n_clbits", &ShotTable::n_clbits)
        .def_readonly("ones_count", &ShotTable::ones_count)
        .def("mean", &ShotTable::mean, py::arg("clbit"))
        .def("has_raw", &ShotTable::has_raw)
        .def("raw_bit", &ShotTable::raw_bit, py::arg("shot"), py::arg("clbit"))
        .def("to_csv", &ShotTable::to_csv);

    m.def(
        "execute",
        [](const Circuit& circuit, std::int64_t shots, std::uint64_t seed, double noise,
           int threads, bool keep_raw) {
            ExecutionOptions opts;
            opts.shots = shots;
            opts.seed = seed;
            opts.depolarizing_p = noise;
            opts.threads = threads;
            opts.keep_raw = keep_raw;
            return execute(circuit, opts);
        },
        py::arg("circuit"), py::arg("shots") = 1, py::arg("seed") = 0, py::arg("noise") = 0.0,
        py::arg("threads") = 1, py::arg("keep_raw") = false);

    // --- codec and series --------------------------------------------------
    py::class_<Alphabet>(m, "Alphabet")
        .def(py::init<std::vector<std::string>, int>(), py::arg("symbols"), py::arg("k_qubits"))
        .def_static("binary", &Alphabet::binary)
        .def_static("with_min_qubits", &Alphabet::with_min_qubits, py::arg("symbols"))
        .def_readonly("symbols", &Alphabet::symbols)
        .def_readonly("k_qubits", &Alphabet::k_qubits)
        .def("index_of", &Alphabet::index_of, py::arg("symbol"))
        .def("__len__", [](const Alphabet& a) { return a.size(); });

    m.def("encode_basis", &encode_basis, py::arg("symbol"), py::arg("alphabet"));
    m.def("encode_basis_index", &encode_basis_index, py::arg("index"), py::arg("alphabet"));
    m.def("encode_angle", &encode_angle, py::arg("x"));
    m.def("decode_symbol", &decode_symbol, py::arg("prediction"), py::arg("alphabet"));
    m.def("decode_symbol_index", &decode_symbol_index, py::arg("prediction"), py::arg("alphabet"));

    py::enum_<SeriesKind>(m, "SeriesKind")
        .value("Symbolic", SeriesKind::Symbolic)
        .value("Real", SeriesKind::Real);

    py::class_<SeriesValue>(m, "SeriesValue")
        .def_readonly("kind", &SeriesValue::kind)
        .def_readonly("real", &SeriesValue::real)
        .def_readonly("index", &SeriesValue::index)
        .def_readonly("symbol", &SeriesValue::symbol)
        .def("__repr__", [](const SeriesValue& v) {
            return v.kind == SeriesKind::Symbolic ? "SeriesValue('" + v.symbol + "')"
                                                  : "SeriesValue(" + std::to_string(v.real) + ")";
        });

    py::class_<TimeSeries>(m, "TimeSeries")
        .def_static("symbolic", &TimeSeries::symbolic, py::arg("symbols"), py::arg("alphabet"))
        .def_static("symbolic_indices", &TimeSeries::symbolic_indices, py::arg("indices"),
                    py::arg("alphabet"))
        .def_static("real", &TimeSeries::real, py::arg("values"))
        .def_property_readonly("kind", &TimeSeries::kind)
        .def("__len__", &TimeSeries::size)
        .def_property_readonly("alphabet", &TimeSeries::alphabet)
        .def("indices", &TimeSeries::indices)
        .def("reals", &TimeSeries::reals)
        .def("at", &TimeSeries::at, py::arg("t"))
        .def("push_back", &TimeSeries::push_back, py::arg("value"))
        .def("prefix", &TimeSeries::prefix, py::arg("count"));

    m.def("target_dim", &target_dim, py::arg("series"));
    m.def("make_targets", &make_targets, py::arg("series"), py::arg("from_t"), py::arg("to_t"));
    m.def("decode_prediction", &decode_prediction, py::arg("row"), py::arg("series"));

    // --- readout -----------------------------------------------------------
    py::class_<Matrix>(m, "Matrix")
        .def(py::init<>())
        .def(py::init(&matrix_from_rows), py::arg("rows"))
        .def_readonly("rows", &Matrix::rows)
        .def_readonly("cols", &Matrix::cols)
        .def("at", static_cast<double (Matrix::*)(std::size_t, std::size_t) const>(&Matrix::at),
             py::arg("row"), py::arg("col"))
        .def("tolist", &matrix_to_rows);

    py::class_<Estimator, PyEstimator>(m, "Estimator")
        .def(py::init<>())
        .def("fit", &Estimator::fit, py::arg("features"), py::arg("targets"))
        .def("predict", &Estimator::predict, py::arg("features"));

    py::class_<LinearModel>(m, "LinearModel")
        .def_readonly("n_features", &LinearModel::n_features)
        .def_readonly("n_targets", &LinearModel::n_targets)
        .def_readonly("weights", &LinearModel::weights)
        .def_readonly("intercept", &LinearModel::intercept)
        .def_readonly("lambda_", &LinearModel::lambda)
        .def("weight", &LinearModel::weight, py::arg("feature"), py::arg("target"))
        .def("weight_frobenius_norm", &LinearModel::weight_frobenius_norm);

    py::class_<RidgeReadout, Estimator>(m, "RidgeReadout")
        .def(py::init<double, bool>(), py::arg("lambda_") = 1e-6, py::arg("fit_intercept") = true)
        .def("fitted", &RidgeReadout::fitted)
        .def("model", &RidgeReadout::model);

    m.def("fit_ridge", &fit_ridge, py::arg("features"), py::arg("targets"), py::arg("lambda_"),
          py::arg("fit_intercept") = true);
    m.def("model_predict", &model_predict, py::arg("model"), py::arg("features"));
    m.def("mse", &mse, py::arg("truth"), py::arg("predicted"));
    m.def("accuracy", &accuracy, py::arg("truth"), py::arg("predicted"));
    m.def("model_to_text", static_cast<std::string (*)(const LinearModel&)>(&to_text),
          py::arg("model"));
    m.def("model_from_text", &model_from_text, py::arg("text"));

    // --- reservoir schemes -------------------------------------------------
    py::enum_<FeatureMode>(m, "FeatureMode")
        .value("Marginal", FeatureMode::Marginal)
        .value("Distribution", FeatureMode::Distribution);
    py::enum_<SchemeKind>(m, "SchemeKind")
        .value("Static", SchemeKind::Static)
        .value("Incremental", SchemeKind::Incremental);
    py::enum_<Provenance>(m, "Provenance")
        .value("Static", Provenance::Static)
        .value("Incremental", Provenance::Incremental);

    // The builder is handed to python hooks as a non-owning reference so
    // their edits land in the circuit under construction.
    py::class_<ReservoirHooks>(m, "ReservoirHooks")
        .def(py::init([](int n_qubits, py::object before, py::object during, py::object after) {
                 ReservoirHooks hooks;
                 hooks.n_qubits = n_qubits;
                 if (!before.is_none()) {
                     hooks.before = [f = before](CircuitBuilder& b) {
                         py::gil_scoped_acquire gil;
                         f(py::cast(&b, py::return_value_policy::reference));
                     };
                 }
                 if (!during.is_none()) {
                     hooks.during = [f = during](CircuitBuilder& b, const SeriesValue& v) {
                         py::gil_scoped_acquire gil;
                         f(py::cast(&b, py::return_value_policy::reference), py::cast(v));
                     };
                 }
                 if (!after.is_none()) {
                     hooks.after = [f = after](CircuitBuilder& b) {
                         py::gil_scoped_acquire gil;
                         f(py::cast(&b, py::return_value_policy::reference));
                     };
                 }
                 return hooks;
             }),
             py::arg("n_qubits"), py::arg("before") = py::none(), py::arg("during") = py::none(),
             py::arg("after") = py::none())
        .def_readonly("n_qubits", &ReservoirHooks::n_qubits);

    py::class_<FeatureMatrix>(m, "FeatureMatrix")
        .def_readonly("values", &FeatureMatrix::values)
        .def_readonly("provenance", &FeatureMatrix::provenance)
        .def_readonly("shots", &FeatureMatrix::shots)
        .def("to_csv", &FeatureMatrix::to_csv);

    m.def("build_static_circuit", &build_static_circuit, py::arg("hooks"), py::arg("series"));
    m.def("build_incremental_circuits", &build_incremental_circuits, py::arg("hooks"),
          py::arg("series"), py::arg("memory"));

    m.def(
        "run_static",
        [](const ReservoirHooks& hooks, const TimeSeries& series, std::int64_t shots,
           std::uint64_t seed, double noise, int threads) {
            return run_static(hooks, series, run_options(shots, seed, noise, threads));
        },
        py::arg("hooks"), py::arg("series"), py::arg("shots") = 1, py::arg("seed") = 0,
        py::arg("noise") = 0.0, py::arg("threads") = 1);

    m.def(
        "run_incremental",
        [](const ReservoirHooks& hooks, const TimeSeries& series, int memory, std::int64_t shots,
           std::uint64_t seed, double noise, int threads, FeatureMode mode) {
            return run_incremental(hooks, series, memory, run_options(shots, seed, noise, threads),
                                   mode);
        },
        py::arg("hooks"), py::arg("series"), py::arg("memory"), py::arg("shots") = 1,
        py::arg("seed") = 0, py::arg("noise") = 0.0, py::arg("threads") = 1,
        py::arg("feature_mode") = FeatureMode::Marginal);

    py::class_<PredictionRun>(m, "PredictionRun")
        .def_readonly("predictions", &PredictionRun::predictions)
        .def_readonly("feature_rows", &PredictionRun::feature_rows);

    m.def(
        "predict",
        [](const ReservoirHooks& hooks, SchemeKind scheme, int memory, FeatureMode mode,
           const Estimator& model, const TimeSeries& from_series, int num_pred,
           std::int64_t shots, std::uint64_t seed, double noise, int threads) {
            SchemeConfig cfg;
            cfg.kind = scheme;
            cfg.memory = memory;
            cfg.feature_mode = mode;
            return predict(hooks, cfg, model, from_series, num_pred,
                           run_options(shots, seed, noise, threads));
        },
        py::arg("hooks"), py::arg("scheme"), py::arg("memory"), py::arg("feature_mode"),
        py::arg("model"), py::arg("from_series"), py::arg("num_pred"), py::arg("shots") = 1,
        py::arg("seed") = 0, py::arg("noise") = 0.0, py::arg("threads") = 1);

    m.def("feature_csv", &feature_csv, py::arg("features"));
    m.def("prediction_csv", &prediction_csv, py::arg("run"));

    // --- experiments -------------------------------------------------------
    py::enum_<TaskKind>(m, "TaskKind")
        .value("BinaryPeriodic", TaskKind::BinaryPeriodic)
        .value("Sine", TaskKind::Sine)
        .value("File", TaskKind::File);

    py::class_<TaskSpec>(m, "TaskSpec")
        .def_readonly("kind", &TaskSpec::kind)
        .def_readonly("period", &TaskSpec::period)
        .def_readonly("length", &TaskSpec::length)
        .def_readonly("samples", &TaskSpec::samples)
        .def_readonly("path", &TaskSpec::path);

    py::class_<OperatorSpec>(m, "OperatorSpec")
        .def_readonly("haar", &OperatorSpec::haar)
        .def_readonly("k_qubits", &OperatorSpec::k_qubits)
        .def_readonly("seed", &OperatorSpec::seed)
        .def_readonly("path", &OperatorSpec::path);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_readonly("scheme", &ExperimentConfig::scheme)
        .def_readonly("n_qubits", &ExperimentConfig::n_qubits)
        .def_readonly("memory", &ExperimentConfig::memory)
        .def_readonly("shots", &ExperimentConfig::shots)
        .def_readonly("seed", &ExperimentConfig::seed)
        .def_readonly("task", &ExperimentConfig::task)
        .def_readonly("train_fraction", &ExperimentConfig::train_fraction)
        .def_readonly("num_pred", &ExperimentConfig::num_pred)
        .def_readonly("lambda_", &ExperimentConfig::lambda)
        .def_readonly("noise_p", &ExperimentConfig::noise_p)
        .def_readonly("feature_mode", &ExperimentConfig::feature_mode)
        .def_readonly("warnings", &ExperimentConfig::warnings);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("train_mse", &ExperimentResult::train_mse)
        .def_readonly("prediction_accuracy", &ExperimentResult::prediction_accuracy)
        .def_readonly("prediction_mse", &ExperimentResult::prediction_mse)
        .def_readonly("features", &ExperimentResult::features)
        .def_readonly("prediction", &ExperimentResult::prediction)
        .def_readonly("circuit_text", &ExperimentResult::circuit_text)
        .def_readonly("metrics_text", &ExperimentResult::metrics_text);

    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("resolved_config_text", &resolved_config_text, py::arg("config"));
    m.def("task_series", &task_series, py::arg("task"), py::arg("length"));
    m.def(
        "benchmark_hooks",
        [](int n_qubits, const UnitaryMatrix& op, SchemeKind scheme, const TimeSeries& exemplar) {
            return benchmark_hooks(n_qubits, std::make_shared<const UnitaryMatrix>(op), scheme,
                                   exemplar);
        },
        py::arg("n_qubits"), py::arg("op"), py::arg("scheme"), py::arg("exemplar"));
    m.def("run_experiment", &run_experiment, py::arg("config"), py::arg("out_dir") = "",
          py::arg("threads") = 0);
    m.def("dump_circuit", &dump_circuit, py::arg("config"), py::arg("steps") = 3);
    m.def("save_unitary", &save_unitary, py::arg("u"), py::arg("path"));
    m.def("load_unitary", &load_unitary, py::arg("path"));

#ifdef QRC_VERSION
    m.attr("__version__") = QRC_VERSION;
#else
    m.attr("__version__") = kVersion;
#endif
}
