#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qreservoir/experiment.hpp"

using namespace qrc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / ("qrc_test_" + name);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
    const ExperimentConfig cfg = parse_config(
        "scheme: static\n"
        "n_qubits: 4\n"
        "task: binary_periodic(2, 100)\n");
    CHECK(cfg.scheme == SchemeKind::Static);
    CHECK(cfg.n_qubits == 4);
    CHECK(cfg.shots == 10000);
    CHECK(cfg.seed == 1);
    CHECK(cfg.lambda == 1e-6);
    CHECK(cfg.noise_p == 0.0);
    CHECK(cfg.train_fraction == 1.0);
    CHECK(cfg.num_pred == 10);
    CHECK(cfg.feature_mode == FeatureMode::Marginal);
    REQUIRE(cfg.op.has_value());
    CHECK(cfg.op->haar);
    CHECK(cfg.op->k_qubits == 4);
    CHECK(cfg.op->seed == cfg.seed);
    CHECK(cfg.warnings.empty());
}

TEST_CASE("config errors name the offending key") {
    CHECK_THROWS_WITH_AS(parse_config("n_qubits: 4\ntask: binary_periodic(2, 10)\nshotz: 5\n"),
                         doctest::Contains("shotz"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config("n_qubits: 4\ntask: binary_periodic(2, 10)\nshots: 0\n"),
        doctest::Contains("shots"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config("n_qubits: 4\ntask: binary_periodic(2, 10)\nshots: abc\n"),
        doctest::Contains("shots"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config("n_qubits: 4\ntask: binary_periodic(2, 10)\ntrain_fraction: 1.5\n"),
        doctest::Contains("train_fraction"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("task: binary_periodic(2, 10)\n"),
                         doctest::Contains("n_qubits"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("n_qubits: 2\n"), doctest::Contains("task"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config("n_qubits: 2\ntask: binary_periodic(2, 10)\noperator: haar(3, 5)\n"),
        doctest::Contains("operator"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config("scheme: incremental\nn_qubits: 2\ntask: binary_periodic(2, 10)\n"),
        doctest::Contains("memory"), ConfigError);
}

TEST_CASE("memory with the static scheme is kept but flagged") {
    const ExperimentConfig cfg = parse_config(
        "scheme: static\n"
        "n_qubits: 2\n"
        "memory: 3\n"
        "task: binary_periodic(2, 10)\n");
    REQUIRE(cfg.warnings.size() == 1);
    CHECK(cfg.warnings[0].find("memory") != std::string::npos);
}

TEST_CASE("resolved config text reparses to the same configuration") {
    const ExperimentConfig cfg = parse_config(
        "scheme: incremental\n"
        "n_qubits: 3\n"
        "memory: 2\n"
        "shots: 512\n"
        "seed: 9\n"
        "operator: haar(3, 77)\n"
        "task: sine(20, 50, 4)\n"
        "train_fraction: 0.8\n"
        "num_pred: 5\n"
        "readout: ridge(0.001)\n"
        "noise: depolarizing(0.05)\n"
        "feature_mode: distribution\n");
    const ExperimentConfig back = parse_config(resolved_config_text(cfg));
    CHECK(back.scheme == cfg.scheme);
    CHECK(back.n_qubits == cfg.n_qubits);
    CHECK(back.memory == cfg.memory);
    CHECK(back.shots == cfg.shots);
    CHECK(back.seed == cfg.seed);
    CHECK(back.op->k_qubits == cfg.op->k_qubits);
    CHECK(back.op->seed == cfg.op->seed);
    CHECK(back.task.kind == cfg.task.kind);
    CHECK(back.task.period == cfg.task.period);
    CHECK(back.task.samples == cfg.task.samples);
    CHECK(back.train_fraction == cfg.train_fraction);
    CHECK(back.num_pred == cfg.num_pred);
    CHECK(back.lambda == cfg.lambda);
    CHECK(back.noise_p == cfg.noise_p);
    CHECK(back.feature_mode == cfg.feature_mode);
}

TEST_CASE("task generators") {
    TaskSpec task;
    task.kind = TaskKind::BinaryPeriodic;
    task.period = 2;
    const TimeSeries alt = task_series(task, 6);
    CHECK(alt.indices() == std::vector<int>{0, 1, 0, 1, 0, 1});

    task.period = 4;
    const TimeSeries square = task_series(task, 8);
    CHECK(square.indices() == std::vector<int>{0, 0, 1, 1, 0, 0, 1, 1});

    TaskSpec sine;
    sine.kind = TaskKind::Sine;
    sine.period = 8;
    sine.samples = 0;
    const TimeSeries wave = task_series(sine, 9);
    CHECK(wave.kind() == SeriesKind::Real);
    CHECK(wave.reals()[0] == doctest::Approx(0.5));
    CHECK(wave.reals()[2] == doctest::Approx(1.0));
    CHECK(wave.reals()[6] == doctest::Approx(0.0));
    CHECK(wave.reals()[8] == doctest::Approx(0.5));

    sine.samples = 3;
    const TimeSeries quantized = task_series(sine, 9);
    CHECK(quantized.kind() == SeriesKind::Symbolic);
    CHECK(quantized.alphabet().size() == 3);
    CHECK(quantized.indices()[0] == 1);
    CHECK(quantized.indices()[2] == 2);
    CHECK(quantized.indices()[6] == 0);
}

TEST_CASE("file tasks classify integer and real series") {
    TempDir dir("file_tasks");
    const fs::path ints = dir.path / "bits.txt";
    std::ofstream(ints) << "# comment\n0\n1\n1\n0\n";
    TaskSpec task;
    task.kind = TaskKind::File;
    task.path = ints.string();
    const TimeSeries s = task_series(task, 100);
    CHECK(s.kind() == SeriesKind::Symbolic);
    CHECK(s.size() == 4);
    CHECK(s.alphabet().symbols == std::vector<std::string>{"0", "1"});
    CHECK(task_base_length(task) == 4);

    const fs::path reals = dir.path / "wave.txt";
    std::ofstream(reals) << "0.1 0.2 0.3\n0.25\n";
    task.path = reals.string();
    const TimeSeries r = task_series(task, 100);
    CHECK(r.kind() == SeriesKind::Real);
    CHECK(r.size() == 4);
}

TEST_CASE("run_experiment writes deterministic artifacts") {
    const ExperimentConfig cfg = parse_config(
        "scheme: static\n"
        "n_qubits: 2\n"
        "task: binary_periodic(2, 12)\n"
        "shots: 64\n"
        "seed: 5\n"
        "num_pred: 3\n");
    TempDir a("artifacts_a"), b("artifacts_b");
    const ExperimentResult first = run_experiment(cfg, a.path.string());
    const ExperimentResult second = run_experiment(cfg, b.path.string());

    for (const char* name :
         {"features.csv", "predictions.csv", "metrics.txt", "circuit.txt", "resolved_config.txt"}) {
        CAPTURE(name);
        CHECK(fs::exists(a.path / name));
        CHECK(slurp(a.path / name) == slurp(b.path / name));
    }

    const std::string features = slurp(a.path / "features.csv");
    CHECK(features.rfind("t,f0,f1\n", 0) == 0);
    CHECK(first.features.values.rows == 12);
    CHECK(first.features.values.cols == 2);
    REQUIRE(first.prediction_accuracy.has_value());
    CHECK(*first.prediction_accuracy >= 0.0);
    CHECK(*first.prediction_accuracy <= 1.0);
    CHECK(first.train_mse >= 0.0);
    CHECK(first.prediction.predictions.size() == 3);
    CHECK(second.metrics_text == first.metrics_text);

    // The resolved config reproduces the run byte-for-byte.
    TempDir c("artifacts_c");
    const ExperimentConfig resolved = parse_config(slurp(a.path / "resolved_config.txt"));
    run_experiment(resolved, c.path.string());
    CHECK(slurp(c.path / "features.csv") == slurp(a.path / "features.csv"));
    CHECK(slurp(c.path / "predictions.csv") == slurp(a.path / "predictions.csv"));
}

TEST_CASE("incremental sine experiment keeps marginal feature width") {
    const ExperimentConfig cfg = parse_config(
        "scheme: incremental\n"
        "n_qubits: 3\n"
        "memory: 3\n"
        "task: sine(8, 12, 0)\n"
        "shots: 32\n"
        "num_pred: 2\n");
    const ExperimentResult result = run_experiment(cfg, "");
    CHECK(result.features.values.cols == 3);  // marginal mode: one column per qubit
    CHECK(result.features.values.rows == 12);
    CHECK(result.prediction_mse.has_value());
    CHECK(!result.prediction_accuracy.has_value());
}

TEST_CASE("dump_circuit shows the requested block structure") {
    const ExperimentConfig static_cfg = parse_config(
        "scheme: static\n"
        "n_qubits: 2\n"
        "task: binary_periodic(2, 50)\n");
    const std::string text = dump_circuit(static_cfg, 3);
    std::size_t preps = 0;
    for (std::size_t i = 0; text.find("P", i) != std::string::npos; i = text.find("P", i) + 1) {
        ++preps;
    }
    CHECK(preps == 3);  // one prepare box per step on the encode wire

    const ExperimentConfig inc_cfg = parse_config(
        "scheme: incremental\n"
        "n_qubits: 2\n"
        "memory: 2\n"
        "task: binary_periodic(2, 50)\n");
    const std::string window = dump_circuit(inc_cfg, 3);
    std::size_t wpreps = 0;
    for (std::size_t i = 0; window.find("P", i) != std::string::npos;
         i = window.find("P", i) + 1) {
        ++wpreps;
    }
    CHECK(wpreps == 2);  // window of length `memory`

    CHECK_THROWS_AS(dump_circuit(static_cfg, 0), ConfigError);
}

TEST_CASE("experiment stage errors carry the stage label") {
    ExperimentConfig cfg = parse_config(
        "scheme: static\n"
        "n_qubits: 2\n"
        "task: binary_periodic(2, 1)\n");
    CHECK_THROWS_WITH_AS(run_experiment(cfg, ""), doctest::Contains("stage 'task'"), Error);

    TaskSpec missing;
    missing.kind = TaskKind::File;
    missing.path = "/nonexistent/series.txt";
    cfg.task = missing;
    CHECK_THROWS_WITH_AS(run_experiment(cfg, ""), doctest::Contains("stage 'task'"), Error);
}

TEST_CASE("unitary file IO round-trips and validates") {
    TempDir dir("unitary_io");
    RngStream gen(3, 1);
    const UnitaryMatrix u = haar_random_unitary(2, gen);
    const fs::path path = dir.path / "op.txt";
    save_unitary(u, path.string());
    const UnitaryMatrix back = load_unitary(path.string());
    CHECK(back.k_qubits() == 2);
    CHECK(back.entries() == u.entries());

    std::ofstream(path) << "not a matrix\n";
    CHECK_THROWS_AS(load_unitary(path.string()), ConfigError);

    // A matrix file is accepted as the experiment operator.
    save_unitary(u, path.string());
    const ExperimentConfig cfg = parse_config(
        "scheme: static\nn_qubits: 2\ntask: binary_periodic(2, 8)\nshots: 16\nnum_pred: 2\n"
        "operator: " + path.string() + "\n");
    const ExperimentResult result = run_experiment(cfg, "");
    CHECK(result.features.values.rows == 8);
}
