#pragma once

#include <functional>

#include "qreservoir/circuit.hpp"
#include "qreservoir/readout.hpp"
#include "qreservoir/series.hpp"

namespace qrc {

// User-supplied circuit-construction hooks. `before` prepares the register,
// `during` is expanded once per timestep with that step's value, `after`
// closes the circuit. Hooks interact with the system only through the
// builder they are handed; they never execute circuits. `before` and
// `after` may be empty.
struct ReservoirHooks {
    int n_qubits = 0;
    std::function<void(CircuitBuilder&)> before;
    std::function<void(CircuitBuilder&, const SeriesValue&)> during;
    std::function<void(CircuitBuilder&)> after;
};

enum class FeatureMode { Marginal, Distribution };
enum class SchemeKind { Static, Incremental };
enum class Provenance { Static, Incremental };

// Decoded reservoir output: row t holds the features for timestep t, each
// entry an exact ratio count/shots.
struct FeatureMatrix {
    Matrix values;
    Provenance provenance = Provenance::Static;
    std::int64_t shots = 0;

    // "t,f0,f1,..." with one row per timestep.
    std::string to_csv() const;
};

struct RunOptions {
    std::int64_t shots = 1;
    std::uint64_t seed = 0;
    double noise_p = 0.0;  // depolarizing after each unitary when > 0
    int threads = 1;       // 0 = hardware concurrency
};

// One circuit for the whole series: before, a tagged `during` block per
// timestep (fresh clbits each), then after. Errors with SchemeError when
// `during` writes differing clbit counts across timesteps.
Circuit build_static_circuit(const ReservoirHooks& hooks, const TimeSeries& series);

// Executes the static circuit; row t averages the clbits written by during
// block t over all shots. Collapse propagates down each trajectory, so
// correlations between timesteps within a shot are preserved. Requires
// measurement inside `during`.
FeatureMatrix run_static(const ReservoirHooks& hooks, const TimeSeries& series,
                         const RunOptions& opts);

// One circuit per timestep over the moving window of at most `memory`
// inputs ending at t; every circuit starts from |0...0>.
std::vector<Circuit> build_incremental_circuits(const ReservoirHooks& hooks,
                                                const TimeSeries& series, int memory);

// Executes each window circuit (window t uses seed derive_seed(seed, t), so
// row t depends only on the window's inputs). Features come from the clbits
// written by `after`: per-clbit averages in Marginal mode, the full 2^m
// empirical outcome distribution in Distribution mode. Requires measurement
// inside `after`.
FeatureMatrix run_incremental(const ReservoirHooks& hooks, const TimeSeries& series, int memory,
                              const RunOptions& opts, FeatureMode mode = FeatureMode::Marginal);

struct SchemeConfig {
    SchemeKind kind = SchemeKind::Static;
    int memory = 1;  // incremental only
    FeatureMode feature_mode = FeatureMode::Marginal;
};

// Closed-loop forecast trace.
struct PredictionRun {
    TimeSeries predictions;  // length num_pred, same kind as the input series
    Matrix feature_rows;     // num_pred x F: the final feature row per step
};

// Autoregressive forecasting: run the scheme on the working series, feed the
// final feature row to the trained model, decode the output back into the
// series' value kind, append, repeat num_pred times. Iteration i re-runs the
// full scheme on the extended series with seed derive_seed(seed, i).
PredictionRun predict(const ReservoirHooks& hooks, const SchemeConfig& scheme,
                      const Estimator& model, const TimeSeries& from_series, int num_pred,
                      const RunOptions& opts);

// Feature matrix CSV export: header "t,f0,...", one row per timestep.
std::string feature_csv(const FeatureMatrix& features);
// Prediction CSV export: header "step,value", steps numbered from 1.
std::string prediction_csv(const PredictionRun& run);

}  // namespace qrc
