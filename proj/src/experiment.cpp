#include "qreservoir/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qrc {

namespace {

constexpr std::uint64_t kFeatureRunSalt = 101;
constexpr std::uint64_t kPredictSalt = 202;

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// "name(a, b, c)" -> {name, {a, b, c}}; returns false when not call syntax.
bool parse_call(const std::string& value, std::string& name, std::vector<std::string>& args) {
    const std::size_t open = value.find('(');
    if (open == std::string::npos || value.back() != ')') return false;
    name = trim(value.substr(0, open));
    args.clear();
    std::string inner = value.substr(open + 1, value.size() - open - 2);
    std::stringstream ss(inner);
    std::string piece;
    while (std::getline(ss, piece, ',')) args.push_back(trim(piece));
    if (args.size() == 1 && args[0].empty()) args.clear();
    return !name.empty();
}

long long parse_int(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0') {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
    }
    return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0' || value.find('-') != std::string::npos) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" +
                          value + "'");
    }
    return v;
}

double parse_real(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (errno != 0 || end == value.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw ConfigError("config key '" + key + "': expected a finite number, got '" + value +
                          "'");
    }
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error("failed writing '" + path + "'");
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw Error(std::string("stage '") + name + "': " + e.what());
    }
}

TimeSeries load_series_file(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<double> values;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        double v;
        while (ls >> v) values.push_back(v);
    }
    if (values.empty()) throw ConfigError("series file '" + path + "' holds no values");
    for (double v : values) {
        if (!std::isfinite(v)) throw ConfigError("series file '" + path + "' has non-finite values");
    }
    bool integral = true;
    for (double v : values) {
        if (v != std::floor(v) || std::abs(v) > 1e9) {
            integral = false;
            break;
        }
    }
    if (integral) {
        std::vector<long long> distinct;
        for (double v : values) {
            const long long i = static_cast<long long>(v);
            if (std::find(distinct.begin(), distinct.end(), i) == distinct.end()) {
                distinct.push_back(i);
            }
        }
        std::sort(distinct.begin(), distinct.end());
        if (distinct.size() <= 16) {
            std::vector<std::string> symbols;
            for (long long i : distinct) symbols.push_back(std::to_string(i));
            const Alphabet alphabet = Alphabet::with_min_qubits(symbols);
            std::vector<int> idx;
            idx.reserve(values.size());
            for (double v : values) {
                idx.push_back(alphabet.index_of(std::to_string(static_cast<long long>(v))));
            }
            return TimeSeries::symbolic_indices(std::move(idx), alphabet);
        }
    }
    return TimeSeries::real(std::move(values));
}

}  // namespace

// ---------------------------------------------------------------------------
// Config parsing

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    bool saw_task = false, saw_qubits = false, saw_memory = false;
    std::vector<std::string> seen;

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t sep = line.find(':');
        if (sep == std::string::npos) sep = line.find('=');
        if (sep == std::string::npos) {
            throw ConfigError("config line '" + line + "' is not 'key: value'");
        }
        const std::string key = trim(line.substr(0, sep));
        const std::string value = trim(line.substr(sep + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("config line '" + line + "' is not 'key: value'");
        }
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
            throw ConfigError("config key '" + key + "' given more than once");
        }
        seen.push_back(key);

        std::string call;
        std::vector<std::string> args;

        if (key == "scheme") {
            if (value == "static") {
                cfg.scheme = SchemeKind::Static;
            } else if (value == "incremental") {
                cfg.scheme = SchemeKind::Incremental;
            } else {
                throw ConfigError("config key 'scheme': expected static|incremental, got '" +
                                  value + "'");
            }
        } else if (key == "n_qubits") {
            const long long v = parse_int(key, value);
            if (v < 1 || v > kMaxQubits) {
                throw ConfigError("config key 'n_qubits': must be in 1.." +
                                  std::to_string(kMaxQubits) + ", got " + std::to_string(v));
            }
            cfg.n_qubits = static_cast<int>(v);
            saw_qubits = true;
        } else if (key == "memory") {
            const long long v = parse_int(key, value);
            if (v < 1) throw ConfigError("config key 'memory': must be >= 1, got " + value);
            cfg.memory = static_cast<int>(v);
            saw_memory = true;
        } else if (key == "shots") {
            const long long v = parse_int(key, value);
            if (v < 1) throw ConfigError("config key 'shots': must be >= 1, got " + value);
            cfg.shots = v;
        } else if (key == "seed") {
            cfg.seed = parse_uint(key, value);
        } else if (key == "operator") {
            OperatorSpec op;
            if (parse_call(value, call, args) && call == "haar") {
                if (args.size() != 1 && args.size() != 2) {
                    throw ConfigError("config key 'operator': haar takes (k) or (k, seed)");
                }
                op.haar = true;
                const long long k = parse_int(key, args[0]);
                if (k < 1 || k > kMaxHaarQubits) {
                    throw ConfigError("config key 'operator': haar k must be in 1.." +
                                      std::to_string(kMaxHaarQubits) + ", got " + args[0]);
                }
                op.k_qubits = static_cast<int>(k);
                op.seed = args.size() == 2 ? parse_uint(key, args[1]) : 0;
                if (args.size() == 1) op.k_qubits = -op.k_qubits;  // mark "seed not given"
            } else {
                op.haar = false;
                op.path = value;
            }
            cfg.op = op;
        } else if (key == "task") {
            TaskSpec task;
            if (parse_call(value, call, args) && call == "binary_periodic") {
                if (args.size() != 2) {
                    throw ConfigError("config key 'task': binary_periodic takes (period, length)");
                }
                task.kind = TaskKind::BinaryPeriodic;
                task.period = static_cast<int>(parse_int(key, args[0]));
                task.length = static_cast<int>(parse_int(key, args[1]));
                if (task.period < 1) throw ConfigError("config key 'task': period must be >= 1");
                if (task.length < 1) throw ConfigError("config key 'task': length must be >= 1");
            } else if (parse_call(value, call, args) && call == "sine") {
                if (args.size() != 2 && args.size() != 3) {
                    throw ConfigError(
                        "config key 'task': sine takes (period, length[, samples])");
                }
                task.kind = TaskKind::Sine;
                task.period = static_cast<int>(parse_int(key, args[0]));
                task.length = static_cast<int>(parse_int(key, args[1]));
                task.samples = args.size() == 3 ? static_cast<int>(parse_int(key, args[2])) : 0;
                if (task.period < 1) throw ConfigError("config key 'task': period must be >= 1");
                if (task.length < 1) throw ConfigError("config key 'task': length must be >= 1");
                if (task.samples != 0 && (task.samples < 2 || task.samples > 65536)) {
                    throw ConfigError(
                        "config key 'task': sine samples must be 0 (continuous) or in 2..65536");
                }
            } else {
                task.kind = TaskKind::File;
                task.path = value;
            }
            cfg.task = task;
            saw_task = true;
        } else if (key == "train_fraction") {
            const double v = parse_real(key, value);
            if (!(v > 0.0 && v <= 1.0)) {
                throw ConfigError("config key 'train_fraction': must be in (0, 1], got " + value);
            }
            cfg.train_fraction = v;
        } else if (key == "num_pred") {
            const long long v = parse_int(key, value);
            if (v < 1) throw ConfigError("config key 'num_pred': must be >= 1, got " + value);
            cfg.num_pred = static_cast<int>(v);
        } else if (key == "readout") {
            if (!parse_call(value, call, args) || call != "ridge" || args.size() != 1) {
                throw ConfigError("config key 'readout': expected ridge(lambda), got '" + value +
                                  "'");
            }
            const double v = parse_real(key, args[0]);
            if (v < 0.0) throw ConfigError("config key 'readout': lambda must be >= 0");
            cfg.lambda = v;
        } else if (key == "noise") {
            if (value == "none") {
                cfg.noise_p = 0.0;
            } else if (parse_call(value, call, args) && call == "depolarizing" &&
                       args.size() == 1) {
                const double v = parse_real(key, args[0]);
                if (!(v >= 0.0 && v <= 1.0)) {
                    throw ConfigError("config key 'noise': probability must be in [0, 1]");
                }
                cfg.noise_p = v;
            } else {
                throw ConfigError("config key 'noise': expected none|depolarizing(p), got '" +
                                  value + "'");
            }
        } else if (key == "feature_mode") {
            if (value == "marginal") {
                cfg.feature_mode = FeatureMode::Marginal;
            } else if (value == "distribution") {
                cfg.feature_mode = FeatureMode::Distribution;
            } else {
                throw ConfigError(
                    "config key 'feature_mode': expected marginal|distribution, got '" + value +
                    "'");
            }
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }

    if (!saw_qubits) throw ConfigError("config key 'n_qubits' is required");
    if (!saw_task) throw ConfigError("config key 'task' is required");
    if (saw_memory && cfg.scheme == SchemeKind::Static) {
        cfg.warnings.push_back("config key 'memory' is ignored for scheme=static");
    }
    if (!saw_memory && cfg.scheme == SchemeKind::Incremental) {
        throw ConfigError("config key 'memory' is required for scheme=incremental");
    }

    // Resolve the defaulted operator pieces.
    if (!cfg.op) {
        OperatorSpec op;
        op.haar = true;
        op.k_qubits = cfg.n_qubits;
        op.seed = cfg.seed;
        cfg.op = op;
    } else if (cfg.op->haar && cfg.op->k_qubits < 0) {
        cfg.op->k_qubits = -cfg.op->k_qubits;
        cfg.op->seed = cfg.seed;
    }
    if (cfg.op->haar && cfg.op->k_qubits != cfg.n_qubits) {
        throw ConfigError("config key 'operator': haar k (" + std::to_string(cfg.op->k_qubits) +
                          ") must match n_qubits (" + std::to_string(cfg.n_qubits) + ")");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    return parse_config(read_file(path));
}

std::string resolved_config_text(const ExperimentConfig& cfg) {
    std::string out;
    out += std::string("scheme: ") +
           (cfg.scheme == SchemeKind::Static ? "static" : "incremental") + '\n';
    out += "n_qubits: " + std::to_string(cfg.n_qubits) + '\n';
    if (cfg.scheme == SchemeKind::Incremental) {
        out += "memory: " + std::to_string(cfg.memory) + '\n';
    }
    out += "shots: " + std::to_string(cfg.shots) + '\n';
    out += "seed: " + std::to_string(cfg.seed) + '\n';
    const OperatorSpec& op = *cfg.op;
    if (op.haar) {
        out += "operator: haar(" + std::to_string(op.k_qubits) + ", " + std::to_string(op.seed) +
               ")\n";
    } else {
        out += "operator: " + op.path + '\n';
    }
    switch (cfg.task.kind) {
        case TaskKind::BinaryPeriodic:
            out += "task: binary_periodic(" + std::to_string(cfg.task.period) + ", " +
                   std::to_string(cfg.task.length) + ")\n";
            break;
        case TaskKind::Sine:
            out += "task: sine(" + std::to_string(cfg.task.period) + ", " +
                   std::to_string(cfg.task.length) + ", " + std::to_string(cfg.task.samples) +
                   ")\n";
            break;
        case TaskKind::File:
            out += "task: " + cfg.task.path + '\n';
            break;
    }
    out += "train_fraction: " + format_full(cfg.train_fraction) + '\n';
    out += "num_pred: " + std::to_string(cfg.num_pred) + '\n';
    out += "readout: ridge(" + format_full(cfg.lambda) + ")\n";
    if (cfg.noise_p > 0.0) {
        out += "noise: depolarizing(" + format_full(cfg.noise_p) + ")\n";
    } else {
        out += "noise: none\n";
    }
    out += std::string("feature_mode: ") +
           (cfg.feature_mode == FeatureMode::Marginal ? "marginal" : "distribution") + '\n';
    return out;
}

// ---------------------------------------------------------------------------
// Tasks

TimeSeries task_series(const TaskSpec& task, std::size_t length) {
    switch (task.kind) {
        case TaskKind::BinaryPeriodic: {
            // Square wave: floor(period/2) zeros then the remaining ones.
            const int half = task.period / 2;
            std::vector<int> idx(length);
            for (std::size_t t = 0; t < length; ++t) {
                idx[t] = static_cast<int>(t % static_cast<std::size_t>(task.period)) < half ? 0 : 1;
            }
            return TimeSeries::symbolic_indices(std::move(idx), Alphabet::binary());
        }
        case TaskKind::Sine: {
            std::vector<double> values(length);
            for (std::size_t t = 0; t < length; ++t) {
                const double angle =
                    2.0 * 3.14159265358979323846 * static_cast<double>(t) / task.period;
                values[t] = 0.5 * (std::sin(angle) + 1.0);
            }
            if (task.samples == 0) return TimeSeries::real(std::move(values));
            std::vector<std::string> symbols;
            for (int i = 0; i < task.samples; ++i) symbols.push_back(std::to_string(i));
            const Alphabet alphabet = Alphabet::with_min_qubits(std::move(symbols));
            std::vector<int> idx(length);
            for (std::size_t t = 0; t < length; ++t) {
                idx[t] = static_cast<int>(std::lround(values[t] * (task.samples - 1)));
            }
            return TimeSeries::symbolic_indices(std::move(idx), alphabet);
        }
        case TaskKind::File: {
            TimeSeries s = load_series_file(task.path);
            return length < s.size() ? s.prefix(length) : s;
        }
    }
    throw Error("unreachable task kind");
}

std::size_t task_base_length(const TaskSpec& task) {
    if (task.kind == TaskKind::File) return load_series_file(task.path).size();
    return static_cast<std::size_t>(task.length);
}

// ---------------------------------------------------------------------------
// Built-in reservoir

ReservoirHooks benchmark_hooks(int n_qubits, std::shared_ptr<const UnitaryMatrix> op,
                               SchemeKind scheme, const TimeSeries& exemplar) {
    if (!op) throw ValidationError("benchmark_hooks: null operator");
    if (op->k_qubits() != n_qubits) {
        throw ValidationError("benchmark reservoir applies the operator to the full register: "
                              "operator acts on " +
                              std::to_string(op->k_qubits()) + " qubits, register has " +
                              std::to_string(n_qubits));
    }
    const int k_enc = exemplar.kind() == SeriesKind::Symbolic ? exemplar.alphabet().k_qubits : 1;
    if (k_enc > n_qubits) {
        throw ValidationError("encoding needs " + std::to_string(k_enc) +
                              " qubits but the register has " + std::to_string(n_qubits));
    }
    const Alphabet alphabet =
        exemplar.kind() == SeriesKind::Symbolic ? exemplar.alphabet() : Alphabet();
    const SeriesKind kind = exemplar.kind();

    std::vector<int> encode_qubits(static_cast<std::size_t>(k_enc));
    for (int i = 0; i < k_enc; ++i) encode_qubits[i] = i;

    ReservoirHooks hooks;
    hooks.n_qubits = n_qubits;
    hooks.before = [n_qubits](CircuitBuilder& b) {
        for (int q = 0; q < n_qubits; ++q) b.add_h(q);
    };
    // Static variant reads the register out between encoding and evolution:
    // the measurement captures the state while it still carries last step's
    // information at full strength, and the operator then scrambles the
    // collapsed state into the next step's memory. Measuring after the
    // operator instead leaves only a weak trace of past inputs (the Haar
    // scramble plus full collapse forgets almost everything in one step).
    hooks.during = [op, encode_qubits, alphabet, kind, scheme](CircuitBuilder& b,
                                                               const SeriesValue& v) {
        const std::vector<cplx> amps = kind == SeriesKind::Symbolic
                                           ? encode_basis_index(v.index, alphabet)
                                           : encode_angle(v.real);
        b.add_prepare(amps, encode_qubits);
        if (scheme == SchemeKind::Static) b.measure_all();
        b.add_unitary(op, b.qubits());
    };
    if (scheme == SchemeKind::Incremental) {
        hooks.after = [](CircuitBuilder& b) { b.measure_all(); };
    }
    return hooks;
}

UnitaryMatrix resolve_operator(const ExperimentConfig& cfg) {
    const OperatorSpec& op = *cfg.op;
    if (op.haar) {
        RngStream rng(op.seed, 0);
        return haar_random_unitary(op.k_qubits, rng);
    }
    UnitaryMatrix u = load_unitary(op.path);
    if (u.k_qubits() != cfg.n_qubits) {
        throw ConfigError("config key 'operator': matrix in '" + op.path + "' acts on " +
                          std::to_string(u.k_qubits()) + " qubits, n_qubits is " +
                          std::to_string(cfg.n_qubits));
    }
    return u;
}

// ---------------------------------------------------------------------------
// Pipeline

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                                int threads) {
    ExperimentResult result;

    const std::size_t base_len = stage("task", [&] { return task_base_length(cfg.task); });
    std::size_t train_len =
        static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(base_len)));
    train_len = std::min(train_len, base_len);
    if (train_len < 2) {
        throw Error("stage 'task': training prefix needs at least 2 elements (task length " +
                    std::to_string(base_len) + ", train_fraction " +
                    format_full(cfg.train_fraction) + ")");
    }
    const std::size_t total_len =
        cfg.task.kind == TaskKind::File
            ? base_len
            : train_len + static_cast<std::size_t>(cfg.num_pred);
    const TimeSeries full = stage("task", [&] { return task_series(cfg.task, total_len); });
    const TimeSeries train = full.prefix(train_len);

    const auto op = stage("operator", [&] {
        return std::make_shared<const UnitaryMatrix>(resolve_operator(cfg));
    });
    const ReservoirHooks hooks = stage("hooks", [&] {
        return benchmark_hooks(cfg.n_qubits, op, cfg.scheme, train);
    });

    RunOptions run_opts;
    run_opts.shots = cfg.shots;
    run_opts.seed = derive_seed(cfg.seed, kFeatureRunSalt);
    run_opts.noise_p = cfg.noise_p;
    run_opts.threads = threads;

    result.features = stage("features", [&] {
        return cfg.scheme == SchemeKind::Static
                   ? run_static(hooks, train, run_opts)
                   : run_incremental(hooks, train, cfg.memory, run_opts, cfg.feature_mode);
    });

    RidgeReadout readout(cfg.lambda);
    Matrix x(train_len - 1, result.features.values.cols);
    for (std::size_t t = 0; t + 1 < train_len; ++t) {
        for (std::size_t f = 0; f < x.cols; ++f) x.at(t, f) = result.features.values.at(t, f);
    }
    const Matrix y = make_targets(train, 1, train_len);
    stage("fit-readout", [&] {
        readout.fit(x, y);
        return 0;
    });
    result.train_mse = stage("fit-readout", [&] { return mse(y, readout.predict(x)); });

    SchemeConfig scheme_cfg;
    scheme_cfg.kind = cfg.scheme;
    scheme_cfg.memory = cfg.memory;
    scheme_cfg.feature_mode = cfg.feature_mode;
    RunOptions pred_opts = run_opts;
    pred_opts.seed = derive_seed(cfg.seed, kPredictSalt);
    result.prediction = stage("predict", [&] {
        return predict(hooks, scheme_cfg, readout, train, cfg.num_pred, pred_opts);
    });

    // Evaluate against whatever continuation the task provides.
    const std::size_t eval_len =
        std::min(total_len - train_len, static_cast<std::size_t>(cfg.num_pred));
    if (eval_len > 0) {
        if (full.kind() == SeriesKind::Symbolic) {
            std::vector<int> truth, predicted;
            for (std::size_t i = 0; i < eval_len; ++i) {
                truth.push_back(full.indices()[train_len + i]);
                predicted.push_back(result.prediction.predictions.at(i).index);
            }
            result.prediction_accuracy = accuracy(truth, predicted);
            Matrix yt(eval_len, 1), yp(eval_len, 1);
            for (std::size_t i = 0; i < eval_len; ++i) {
                yt.at(i, 0) = truth[i];
                yp.at(i, 0) = predicted[i];
            }
            result.prediction_mse = mse(yt, yp);
        } else {
            Matrix yt(eval_len, 1), yp(eval_len, 1);
            for (std::size_t i = 0; i < eval_len; ++i) {
                yt.at(i, 0) = full.reals()[train_len + i];
                yp.at(i, 0) = result.prediction.predictions.at(i).real;
            }
            result.prediction_mse = mse(yt, yp);
        }
    }

    result.circuit_text = stage("render", [&] {
        if (cfg.scheme == SchemeKind::Static) return render_text(build_static_circuit(hooks, train));
        return render_text(build_incremental_circuits(hooks, train, cfg.memory).front());
    });

    std::string metrics = "train_mse = " + format_full(result.train_mse) + '\n';
    metrics += "evaluated_steps = " + std::to_string(eval_len) + '\n';
    if (result.prediction_mse) {
        metrics += "prediction_mse = " + format_full(*result.prediction_mse) + '\n';
    }
    if (result.prediction_accuracy) {
        metrics += "prediction_accuracy = " + format_full(*result.prediction_accuracy) + '\n';
    }
    result.metrics_text = metrics;

    if (!out_dir.empty()) {
        namespace fs = std::filesystem;
        stage("artifacts", [&] {
            fs::create_directories(out_dir);
            return 0;
        });
        std::vector<std::string> written;
        auto emit = [&](const std::string& name, const std::string& content) {
            const std::string path = (fs::path(out_dir) / name).string();
            write_file(path, content);
            written.push_back(path);
        };
        try {
            emit("features.csv", feature_csv(result.features));
            emit("predictions.csv", prediction_csv(result.prediction));
            emit("metrics.txt", result.metrics_text);
            emit("circuit.txt", result.circuit_text);
            emit("resolved_config.txt", resolved_config_text(cfg));
        } catch (const std::exception& e) {
            std::error_code ec;
            for (const std::string& path : written) fs::remove(path, ec);
            throw Error(std::string("stage 'artifacts': ") + e.what());
        }
    }
    return result;
}

std::string dump_circuit(const ExperimentConfig& cfg, int steps) {
    if (steps < 1) throw ConfigError("dump-circuit steps must be >= 1");
    const std::size_t base_len = task_base_length(cfg.task);
    const std::size_t use = std::min(static_cast<std::size_t>(steps), base_len);
    const TimeSeries series = task_series(cfg.task, use).prefix(use);
    const auto op = std::make_shared<const UnitaryMatrix>(resolve_operator(cfg));
    const ReservoirHooks hooks = benchmark_hooks(cfg.n_qubits, op, cfg.scheme, series);
    if (cfg.scheme == SchemeKind::Static) {
        return render_text(build_static_circuit(hooks, series));
    }
    return render_text(build_incremental_circuits(hooks, series, cfg.memory).back());
}

// ---------------------------------------------------------------------------
// Unitary file IO

void save_unitary(const UnitaryMatrix& u, const std::string& path) {
    std::string out = "unitary v1\n";
    out += "k " + std::to_string(u.k_qubits()) + '\n';
    for (int r = 0; r < u.dim(); ++r) {
        for (int c = 0; c < u.dim(); ++c) {
            if (c > 0) out += ' ';
            out += format_full(u.at(r, c).real()) + ' ' + format_full(u.at(r, c).imag());
        }
        out += '\n';
    }
    write_file(path, out);
}

UnitaryMatrix load_unitary(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line, word;
    if (!std::getline(in, line) || line != "unitary v1") {
        throw ConfigError("'" + path + "' is not a unitary matrix file");
    }
    int k = 0;
    in >> word >> k;
    if (word != "k" || k < 1 || k > kMaxQubits) {
        throw ConfigError("'" + path + "' has an invalid qubit count");
    }
    const std::size_t dim = std::size_t{1} << k;
    std::vector<cplx> entries(dim * dim);
    for (cplx& e : entries) {
        double re, im;
        if (!(in >> re >> im)) throw ConfigError("'" + path + "' is truncated");
        e = cplx{re, im};
    }
    return UnitaryMatrix(k, std::move(entries));
}

}  // namespace qrc
