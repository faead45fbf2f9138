#include "qreservoir/reservoir.hpp"

#include <cmath>
#include <cstdio>

namespace qrc {

namespace {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct StaticBuild {
    Circuit circuit;
    std::vector<std::vector<int>> step_clbits;  // clbits written by during block t
};

StaticBuild build_static_impl(const ReservoirHooks& hooks, const TimeSeries& series) {
    if (series.empty()) throw ValidationError("reservoir run needs a non-empty series");
    if (!hooks.during) throw SchemeError("reservoir hooks must provide a during function");

    CircuitBuilder builder(hooks.n_qubits);
    if (hooks.before) hooks.before(builder);
    StaticBuild out;
    out.step_clbits.reserve(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        const int first = builder.n_clbits();
        builder.set_tag(static_cast<int>(t));
        hooks.during(builder, series.at(t));
        builder.clear_tag();
        std::vector<int> written;
        for (int c = first; c < builder.n_clbits(); ++c) written.push_back(c);
        if (t > 0 && written.size() != out.step_clbits.front().size()) {
            throw SchemeError("during block " + std::to_string(t) + " wrote " +
                              std::to_string(written.size()) + " clbits; block 0 wrote " +
                              std::to_string(out.step_clbits.front().size()));
        }
        out.step_clbits.push_back(std::move(written));
    }
    if (hooks.after) hooks.after(builder);
    out.circuit = std::move(builder).build();
    return out;
}

struct IncrementalBuild {
    Circuit circuit;
    std::vector<int> feature_clbits;  // clbits written by the after hook
};

IncrementalBuild build_incremental_impl(const ReservoirHooks& hooks, const TimeSeries& series,
                                        int memory, std::size_t t) {
    CircuitBuilder builder(hooks.n_qubits);
    if (hooks.before) hooks.before(builder);
    const std::size_t start = t + 1 >= static_cast<std::size_t>(memory)
                                  ? t + 1 - static_cast<std::size_t>(memory)
                                  : 0;
    for (std::size_t j = start; j <= t; ++j) {
        builder.set_tag(static_cast<int>(j));
        hooks.during(builder, series.at(j));
        builder.clear_tag();
    }
    const int first = builder.n_clbits();
    if (hooks.after) hooks.after(builder);
    IncrementalBuild out;
    for (int c = first; c < builder.n_clbits(); ++c) out.feature_clbits.push_back(c);
    out.circuit = std::move(builder).build();
    return out;
}

ExecutionOptions exec_options(const RunOptions& opts, std::uint64_t seed, bool keep_raw) {
    ExecutionOptions eo;
    eo.shots = opts.shots;
    eo.seed = seed;
    eo.depolarizing_p = opts.noise_p;
    eo.threads = opts.threads;
    eo.keep_raw = keep_raw;
    return eo;
}

}  // namespace

Circuit build_static_circuit(const ReservoirHooks& hooks, const TimeSeries& series) {
    return build_static_impl(hooks, series).circuit;
}

FeatureMatrix run_static(const ReservoirHooks& hooks, const TimeSeries& series,
                         const RunOptions& opts) {
    StaticBuild build = build_static_impl(hooks, series);
    const std::size_t width = build.step_clbits.front().size();
    if (width == 0) {
        throw SchemeError("the static scheme requires measurement in the during hook");
    }
    const ShotTable table = execute(build.circuit, exec_options(opts, opts.seed, false));

    FeatureMatrix features;
    features.provenance = Provenance::Static;
    features.shots = opts.shots;
    features.values = Matrix(series.size(), width);
    for (std::size_t t = 0; t < series.size(); ++t) {
        for (std::size_t f = 0; f < width; ++f) {
            features.values.at(t, f) = table.mean(build.step_clbits[t][f]);
        }
    }
    return features;
}

std::vector<Circuit> build_incremental_circuits(const ReservoirHooks& hooks,
                                                const TimeSeries& series, int memory) {
    if (series.empty()) throw ValidationError("reservoir run needs a non-empty series");
    if (!hooks.during) throw SchemeError("reservoir hooks must provide a during function");
    if (memory < 1) throw ValidationError("memory must be >= 1, got " + std::to_string(memory));
    std::vector<Circuit> circuits;
    circuits.reserve(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        circuits.push_back(build_incremental_impl(hooks, series, memory, t).circuit);
    }
    return circuits;
}

FeatureMatrix run_incremental(const ReservoirHooks& hooks, const TimeSeries& series, int memory,
                              const RunOptions& opts, FeatureMode mode) {
    if (series.empty()) throw ValidationError("reservoir run needs a non-empty series");
    if (!hooks.during) throw SchemeError("reservoir hooks must provide a during function");
    if (memory < 1) throw ValidationError("memory must be >= 1, got " + std::to_string(memory));

    FeatureMatrix features;
    features.provenance = Provenance::Incremental;
    features.shots = opts.shots;

    std::size_t n_meas = 0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        IncrementalBuild build = build_incremental_impl(hooks, series, memory, t);
        if (t == 0) {
            n_meas = build.feature_clbits.size();
            if (n_meas == 0) {
                throw SchemeError("the incremental scheme requires measurement in the after hook");
            }
            if (mode == FeatureMode::Distribution && n_meas > 20) {
                throw CapacityError("distribution mode over more than 20 measured bits");
            }
            const std::size_t width = mode == FeatureMode::Marginal ? n_meas
                                                                    : (std::size_t{1} << n_meas);
            features.values = Matrix(series.size(), width);
        } else if (build.feature_clbits.size() != n_meas) {
            throw SchemeError("after hook wrote " + std::to_string(build.feature_clbits.size()) +
                              " clbits at step " + std::to_string(t) + "; step 0 wrote " +
                              std::to_string(n_meas));
        }

        // Row t must depend only on the window's inputs: derive the seed from
        // the step index, never from earlier series content.
        const std::uint64_t step_seed = derive_seed(opts.seed, static_cast<std::uint64_t>(t));
        const bool keep_raw = mode == FeatureMode::Distribution;
        const ShotTable table = execute(build.circuit, exec_options(opts, step_seed, keep_raw));

        if (mode == FeatureMode::Marginal) {
            for (std::size_t f = 0; f < n_meas; ++f) {
                features.values.at(t, f) = table.mean(build.feature_clbits[f]);
            }
        } else {
            std::vector<std::int64_t> joint(std::size_t{1} << n_meas, 0);
            for (std::int64_t s = 0; s < table.shots; ++s) {
                std::size_t outcome = 0;
                for (std::size_t j = 0; j < n_meas; ++j) {
                    outcome |= static_cast<std::size_t>(
                                   table.raw_bit(s, build.feature_clbits[j]))
                               << j;
                }
                ++joint[outcome];
            }
            for (std::size_t o = 0; o < joint.size(); ++o) {
                features.values.at(t, o) =
                    static_cast<double>(joint[o]) / static_cast<double>(table.shots);
            }
        }
    }
    return features;
}

PredictionRun predict(const ReservoirHooks& hooks, const SchemeConfig& scheme,
                      const Estimator& model, const TimeSeries& from_series, int num_pred,
                      const RunOptions& opts) {
    if (from_series.empty()) throw ValidationError("predict needs a non-empty starting series");
    if (num_pred < 1) throw ValidationError("num_pred must be >= 1, got " + std::to_string(num_pred));

    PredictionRun run;
    run.predictions = from_series.prefix(0);
    TimeSeries working = from_series;

    for (int step = 0; step < num_pred; ++step) {
        RunOptions step_opts = opts;
        step_opts.seed = derive_seed(opts.seed, 0x9E370000ULL + static_cast<std::uint64_t>(step));
        const FeatureMatrix features =
            scheme.kind == SchemeKind::Static
                ? run_static(hooks, working, step_opts)
                : run_incremental(hooks, working, scheme.memory, step_opts, scheme.feature_mode);

        const std::size_t last = features.values.rows - 1;
        if (step == 0) {
            run.feature_rows = Matrix(static_cast<std::size_t>(num_pred), features.values.cols);
        }
        std::vector<double> row(features.values.cols);
        for (std::size_t f = 0; f < row.size(); ++f) {
            row[f] = features.values.at(last, f);
            run.feature_rows.at(static_cast<std::size_t>(step), f) = row[f];
        }

        Matrix x(1, row.size());
        x.data = row;
        const Matrix y = model.predict(x);
        if (y.rows != 1) throw DecodeError("model returned " + std::to_string(y.rows) + " rows");
        const SeriesValue value = decode_prediction(y.data, working);
        working.push_back(value);
        run.predictions.push_back(value);
    }
    return run;
}

std::string FeatureMatrix::to_csv() const { return feature_csv(*this); }

std::string feature_csv(const FeatureMatrix& features) {
    std::string out = "t";
    for (std::size_t f = 0; f < features.values.cols; ++f) out += ",f" + std::to_string(f);
    out += '\n';
    for (std::size_t t = 0; t < features.values.rows; ++t) {
        out += std::to_string(t);
        for (std::size_t f = 0; f < features.values.cols; ++f) {
            out += ',';
            out += format_full(features.values.at(t, f));
        }
        out += '\n';
    }
    return out;
}

std::string prediction_csv(const PredictionRun& run) {
    std::string out = "step,value\n";
    for (std::size_t i = 0; i < run.predictions.size(); ++i) {
        const SeriesValue v = run.predictions.at(i);
        out += std::to_string(i + 1);
        out += ',';
        out += v.kind == SeriesKind::Symbolic ? v.symbol : format_full(v.real);
        out += '\n';
    }
    return out;
}

}  // namespace qrc
