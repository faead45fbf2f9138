#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qreservoir/reservoir.hpp"

namespace qrc {

struct OperatorSpec {
    bool haar = true;
    int k_qubits = 0;            // haar only
    std::uint64_t seed = 0;      // haar only
    std::string path;            // matrix file otherwise
};

enum class TaskKind { BinaryPeriodic, Sine, File };

struct TaskSpec {
    TaskKind kind = TaskKind::BinaryPeriodic;
    int period = 2;
    int length = 0;
    int samples = 0;  // sine quantization levels; 0 keeps the series continuous
    std::string path;
};

// Declarative experiment description. Key names in the config file match the
// field names here.
struct ExperimentConfig {
    SchemeKind scheme = SchemeKind::Static;
    int n_qubits = 0;
    int memory = 1;  // incremental only
    std::int64_t shots = 10000;
    std::uint64_t seed = 1;
    std::optional<OperatorSpec> op;  // defaults to haar(n_qubits, seed)
    TaskSpec task;
    double train_fraction = 1.0;
    int num_pred = 10;
    double lambda = 1e-6;
    double noise_p = 0.0;
    FeatureMode feature_mode = FeatureMode::Marginal;
    std::vector<std::string> warnings;  // non-fatal parse notes
};

// Parses the flat "key: value" config format ('#' comments). Unknown keys,
// type mismatches and range violations raise ConfigError naming the key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// The fully resolved, reloadable form: every default and seed made explicit.
std::string resolved_config_text(const ExperimentConfig& config);

// Task series generation/loading. Generated tasks can produce any length, so
// evaluation continuations are exact.
TimeSeries task_series(const TaskSpec& task, std::size_t length);
// Natural length: generated tasks return `length`; file tasks the file size.
std::size_t task_base_length(const TaskSpec& task);

// The built-in benchmark reservoir. `during` prepares the encoded value on
// the low qubits and applies the fixed operator to the full register. The
// static variant measures every qubit between the encoding and the operator
// (read out, then evolve); the incremental variant measures in `after`.
ReservoirHooks benchmark_hooks(int n_qubits, std::shared_ptr<const UnitaryMatrix> op,
                               SchemeKind scheme, const TimeSeries& exemplar);

// Operator construction per config (haar sample or matrix file).
UnitaryMatrix resolve_operator(const ExperimentConfig& config);

struct ExperimentResult {
    double train_mse = 0.0;
    std::optional<double> prediction_accuracy;  // discrete tasks with eval targets
    std::optional<double> prediction_mse;       // when eval targets exist
    FeatureMatrix features;
    PredictionRun prediction;
    std::string circuit_text;
    std::string metrics_text;
};

// Full pipeline: build the task series, run the scheme over the training
// prefix, fit the ridge readout on one-step-ahead pairs, forecast num_pred
// steps, and write features.csv, predictions.csv, metrics.txt, circuit.txt
// and resolved_config.txt into out_dir. Any stage error aborts with a
// stage-labeled message and removes partial artifacts. Pass an empty out_dir
// to skip writing.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                                int threads = 0);

// Renders the circuit the config would build over the first `steps` inputs
// (the step-`steps` window circuit for the incremental scheme).
std::string dump_circuit(const ExperimentConfig& config, int steps);

// Unitary matrix file IO (full precision, reloadable).
void save_unitary(const UnitaryMatrix& u, const std::string& path);
UnitaryMatrix load_unitary(const std::string& path);

}  // namespace qrc
