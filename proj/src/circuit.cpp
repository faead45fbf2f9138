#include "qreservoir/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_set>

namespace qrc {

namespace {

bool same_matrix(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    return a.k_qubits() == b.k_qubits() && a.entries() == b.entries();
}

}  // namespace

bool structurally_equal(const Circuit& a, const Circuit& b) {
    if (a.n_qubits != b.n_qubits || a.n_clbits != b.n_clbits ||
        a.instructions.size() != b.instructions.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.instructions.size(); ++i) {
        const Instruction& x = a.instructions[i];
        const Instruction& y = b.instructions[i];
        if (x.kind != y.kind || x.qubits != y.qubits || x.clbits != y.clbits ||
            x.amplitudes != y.amplitudes || x.noise_p != y.noise_p || x.tag != y.tag ||
            x.label != y.label) {
            return false;
        }
        if (static_cast<bool>(x.matrix) != static_cast<bool>(y.matrix)) return false;
        if (x.matrix && !same_matrix(*x.matrix, *y.matrix)) return false;
    }
    return true;
}

std::vector<std::string> validate(const Circuit& circuit) {
    std::vector<std::string> violations;
    auto bad = [&](std::string msg) { violations.push_back(std::move(msg)); };

    if (circuit.n_qubits < 1 || circuit.n_qubits > kMaxQubits) {
        bad("circuit must have 1.." + std::to_string(kMaxQubits) + " qubits, has " +
            std::to_string(circuit.n_qubits));
        return violations;
    }
    std::vector<int> clbit_writers(static_cast<std::size_t>(std::max(circuit.n_clbits, 0)), -1);
    // A reservoir operator is typically one shared matrix appended per
    // timestep; check each distinct payload once.
    std::unordered_set<const UnitaryMatrix*> unitary_checked;

    for (std::size_t idx = 0; idx < circuit.instructions.size(); ++idx) {
        const Instruction& in = circuit.instructions[idx];
        const std::string where = "instruction " + std::to_string(idx);

        bool qubits_ok = true;
        for (int q : in.qubits) {
            if (q < 0 || q >= circuit.n_qubits) {
                bad(where + ": qubit index " + std::to_string(q) + " out of range");
                qubits_ok = false;
            }
        }
        for (std::size_t i = 0; i + 1 < in.qubits.size() && qubits_ok; ++i) {
            for (std::size_t j = i + 1; j < in.qubits.size(); ++j) {
                if (in.qubits[i] == in.qubits[j]) {
                    bad(where + ": duplicate qubit index " + std::to_string(in.qubits[i]));
                    qubits_ok = false;
                    break;
                }
            }
        }

        switch (in.kind) {
            case InstrKind::Unitary: {
                if (!in.matrix) {
                    bad(where + ": unitary instruction without a matrix");
                    break;
                }
                if (in.matrix->k_qubits() != static_cast<int>(in.qubits.size())) {
                    bad(where + ": matrix acts on " + std::to_string(in.matrix->k_qubits()) +
                        " qubits but " + std::to_string(in.qubits.size()) + " targets given");
                }
                if (unitary_checked.insert(in.matrix.get()).second) {
                    const double err = in.matrix->unitarity_error();
                    if (!(err <= kUnitaryTol)) {
                        bad(where + ": payload is not unitary (max |U†U - I| = " +
                            std::to_string(err) + ")");
                    }
                }
                if (!in.clbits.empty()) bad(where + ": unitary instruction carries clbits");
                break;
            }
            case InstrKind::Prepare: {
                const std::size_t need = std::size_t{1} << in.qubits.size();
                if (in.amplitudes.size() != need) {
                    bad(where + ": prepare payload has " + std::to_string(in.amplitudes.size()) +
                        " amplitudes, needs " + std::to_string(need));
                    break;
                }
                double n2 = 0.0;
                for (const cplx& a : in.amplitudes) n2 += std::norm(a);
                if (!(std::abs(std::sqrt(n2) - 1.0) <= kPrepareNormTol)) {
                    bad(where + ": prepare amplitudes are not normalized");
                }
                if (!in.clbits.empty()) bad(where + ": prepare instruction carries clbits");
                break;
            }
            case InstrKind::Measure: {
                if (in.qubits.empty()) bad(where + ": measure with no qubits");
                if (in.clbits.size() != in.qubits.size()) {
                    bad(where + ": measure writes " + std::to_string(in.clbits.size()) +
                        " clbits for " + std::to_string(in.qubits.size()) + " qubits");
                    break;
                }
                for (int c : in.clbits) {
                    if (c < 0 || c >= circuit.n_clbits) {
                        bad(where + ": clbit index " + std::to_string(c) + " out of range");
                    } else if (clbit_writers[c] >= 0) {
                        bad(where + ": clbit " + std::to_string(c) +
                            " already written by instruction " + std::to_string(clbit_writers[c]));
                    } else {
                        clbit_writers[c] = static_cast<int>(idx);
                    }
                }
                break;
            }
            case InstrKind::Noise: {
                if (in.qubits.size() != 1) bad(where + ": noise instruction needs one qubit");
                if (!(in.noise_p >= 0.0 && in.noise_p <= 1.0)) {
                    bad(where + ": noise probability out of [0, 1]");
                }
                if (!in.clbits.empty()) bad(where + ": noise instruction carries clbits");
                break;
            }
        }
    }
    return violations;
}

// ---------------------------------------------------------------------------
// CircuitBuilder

CircuitBuilder::CircuitBuilder(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("circuit must have 1.." + std::to_string(kMaxQubits) +
                            " qubits, got " + std::to_string(n_qubits));
    }
    circuit_.n_qubits = n_qubits;
}

void CircuitBuilder::check_qubit(int q) const {
    if (q < 0 || q >= n_qubits_) {
        throw IndexError("qubit index " + std::to_string(q) + " out of range for " +
                         std::to_string(n_qubits_) + " qubits");
    }
}

void CircuitBuilder::check_qubits(const std::vector<int>& qs) const {
    for (std::size_t i = 0; i < qs.size(); ++i) {
        check_qubit(qs[i]);
        for (std::size_t j = i + 1; j < qs.size(); ++j) {
            if (qs[i] == qs[j]) throw IndexError("duplicate qubit index " + std::to_string(qs[i]));
        }
    }
}

Instruction& CircuitBuilder::append(Instruction instr) {
    instr.tag = tag_;
    circuit_.instructions.push_back(std::move(instr));
    return circuit_.instructions.back();
}

CircuitBuilder& CircuitBuilder::add_unitary(const UnitaryMatrix& u, const std::vector<int>& targets,
                                            std::string label) {
    return add_unitary(std::make_shared<UnitaryMatrix>(u), targets, std::move(label));
}

CircuitBuilder& CircuitBuilder::add_unitary(std::shared_ptr<const UnitaryMatrix> u,
                                            const std::vector<int>& targets, std::string label) {
    if (!u) throw ValidationError("add_unitary: null matrix");
    check_qubits(targets);
    if (u->k_qubits() != static_cast<int>(targets.size())) {
        throw IndexError("matrix acts on " + std::to_string(u->k_qubits()) + " qubits but " +
                         std::to_string(targets.size()) + " targets given");
    }
    Instruction in;
    in.kind = InstrKind::Unitary;
    in.qubits = targets;
    in.matrix = std::move(u);
    in.label = std::move(label);
    append(std::move(in));
    return *this;
}

CircuitBuilder& CircuitBuilder::add_h(int q) { return add_unitary(gates::h(), {q}, "H"); }
CircuitBuilder& CircuitBuilder::add_x(int q) { return add_unitary(gates::x(), {q}, "X"); }
CircuitBuilder& CircuitBuilder::add_y(int q) { return add_unitary(gates::y(), {q}, "Y"); }
CircuitBuilder& CircuitBuilder::add_z(int q) { return add_unitary(gates::z(), {q}, "Z"); }
CircuitBuilder& CircuitBuilder::add_rx(int q, double t) { return add_unitary(gates::rx(t), {q}, "RX"); }
CircuitBuilder& CircuitBuilder::add_ry(int q, double t) { return add_unitary(gates::ry(t), {q}, "RY"); }
CircuitBuilder& CircuitBuilder::add_rz(int q, double t) { return add_unitary(gates::rz(t), {q}, "RZ"); }

CircuitBuilder& CircuitBuilder::add_cx(int control, int target) {
    return add_unitary(gates::cx(), {control, target}, "CX");
}

CircuitBuilder& CircuitBuilder::add_prepare(const std::vector<cplx>& amps,
                                            const std::vector<int>& targets) {
    check_qubits(targets);
    if (targets.empty()) throw IndexError("prepare over an empty qubit list");
    const std::size_t need = std::size_t{1} << targets.size();
    if (amps.size() != need) {
        throw ValidationError("prepare on " + std::to_string(targets.size()) + " qubits needs " +
                              std::to_string(need) + " amplitudes, got " +
                              std::to_string(amps.size()));
    }
    double n2 = 0.0;
    for (const cplx& a : amps) n2 += std::norm(a);
    if (!(std::abs(std::sqrt(n2) - 1.0) <= kPrepareNormTol)) {
        throw ValidationError("prepare amplitudes are not normalized: |amps| = " +
                              std::to_string(std::sqrt(n2)));
    }
    Instruction in;
    in.kind = InstrKind::Prepare;
    in.qubits = targets;
    in.amplitudes = amps;
    in.label = "P";
    append(std::move(in));
    return *this;
}

CircuitBuilder& CircuitBuilder::add_measure(const std::vector<int>& qubits,
                                            const std::vector<int>& clbits) {
    check_qubits(qubits);
    if (qubits.empty()) throw ValidationError("measure with no qubits is rejected");
    if (clbits.size() != qubits.size()) {
        throw ValidationError("measure needs one clbit per qubit (" +
                              std::to_string(qubits.size()) + " qubits, " +
                              std::to_string(clbits.size()) + " clbits)");
    }
    for (std::size_t i = 0; i < clbits.size(); ++i) {
        const int c = clbits[i];
        if (c < 0) throw IndexError("clbit index " + std::to_string(c) + " out of range");
        for (std::size_t j = i + 1; j < clbits.size(); ++j) {
            if (clbits[j] == c) throw ValidationError("duplicate clbit " + std::to_string(c));
        }
        if (c < static_cast<int>(clbit_written_.size()) && clbit_written_[c]) {
            throw ValidationError("clbit " + std::to_string(c) + " is already written once");
        }
    }
    for (int c : clbits) {
        if (c >= static_cast<int>(clbit_written_.size())) clbit_written_.resize(c + 1, false);
        clbit_written_[c] = true;
        n_clbits_ = std::max(n_clbits_, c + 1);
    }
    circuit_.n_clbits = n_clbits_;
    Instruction in;
    in.kind = InstrKind::Measure;
    in.qubits = qubits;
    in.clbits = clbits;
    in.label = "M";
    append(std::move(in));
    return *this;
}

CircuitBuilder& CircuitBuilder::measure_all() {
    std::vector<int> qs(n_qubits_);
    std::vector<int> cs(n_qubits_);
    for (int i = 0; i < n_qubits_; ++i) {
        qs[i] = i;
        cs[i] = n_clbits_ + i;
    }
    return add_measure(qs, cs);
}

CircuitBuilder& CircuitBuilder::add_depolarizing(int qubit, double p) {
    check_qubit(qubit);
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("depolarizing probability must be in [0, 1], got " +
                              std::to_string(p));
    }
    Instruction in;
    in.kind = InstrKind::Noise;
    in.qubits = {qubit};
    in.noise_p = p;
    in.label = "D";
    append(std::move(in));
    return *this;
}

std::vector<int> CircuitBuilder::qubits() const {
    std::vector<int> qs(n_qubits_);
    for (int i = 0; i < n_qubits_; ++i) qs[i] = i;
    return qs;
}

Circuit CircuitBuilder::build() && {
    circuit_.n_clbits = n_clbits_;
    return std::move(circuit_);
}

Circuit CircuitBuilder::build() const& {
    Circuit copy = circuit_;
    copy.n_clbits = n_clbits_;
    return copy;
}

// ---------------------------------------------------------------------------
// Trajectory executor

namespace {

struct ShotWorker {
    const Circuit* circuit;
    const ExecutionOptions* opts;
    std::vector<std::int64_t> counts;
    std::vector<std::uint8_t>* raw;

    void run(std::int64_t begin, std::int64_t end) {
        counts.assign(static_cast<std::size_t>(circuit->n_clbits), 0);
        StateVector state(circuit->n_qubits);
        std::vector<std::uint8_t> row(static_cast<std::size_t>(circuit->n_clbits), 0);
        std::vector<int> bits;
        for (std::int64_t shot = begin; shot < end; ++shot) {
            state.reset_to_zero();
            std::fill(row.begin(), row.end(), 0);
            RngStream rng(opts->seed, static_cast<std::uint64_t>(shot));
            for (const Instruction& in : circuit->instructions) {
                switch (in.kind) {
                    case InstrKind::Unitary:
                        state.apply_unitary(*in.matrix, in.qubits);
                        if (opts->depolarizing_p > 0.0) {
                            for (int q : in.qubits) {
                                state.apply_depolarizing(q, opts->depolarizing_p, rng);
                            }
                        }
                        break;
                    case InstrKind::Prepare:
                        state.prepare(in.qubits, in.amplitudes, rng);
                        break;
                    case InstrKind::Measure:
                        state.measure_into(in.qubits, rng, bits);
                        for (std::size_t j = 0; j < bits.size(); ++j) {
                            row[in.clbits[j]] = static_cast<std::uint8_t>(bits[j]);
                        }
                        break;
                    case InstrKind::Noise:
                        state.apply_depolarizing(in.qubits[0], in.noise_p, rng);
                        break;
                }
            }
            for (int c = 0; c < circuit->n_clbits; ++c) counts[c] += row[c];
            if (raw) {
                std::copy(row.begin(), row.end(),
                          raw->begin() + static_cast<std::size_t>(shot) * circuit->n_clbits);
            }
        }
    }
};

}  // namespace

ShotTable execute(const Circuit& circuit, const ExecutionOptions& opts) {
    const std::vector<std::string> violations = validate(circuit);
    if (!violations.empty()) {
        std::string msg = "execute refused an invalid circuit:";
        for (const std::string& v : violations) msg += "\n  - " + v;
        throw ValidationError(msg);
    }
    if (opts.shots < 1) {
        throw ValidationError("shots must be >= 1, got " + std::to_string(opts.shots));
    }
    if (!(opts.depolarizing_p >= 0.0 && opts.depolarizing_p <= 1.0)) {
        throw ValidationError("depolarizing probability must be in [0, 1]");
    }

    ShotTable table;
    table.shots = opts.shots;
    table.n_clbits = circuit.n_clbits;
    table.ones_count.assign(static_cast<std::size_t>(circuit.n_clbits), 0);
    if (opts.keep_raw) {
        table.raw.assign(static_cast<std::size_t>(opts.shots) * circuit.n_clbits, 0);
    }

    int workers = opts.threads;
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers < 1) workers = 1;
    }
    workers = static_cast<int>(std::min<std::int64_t>(workers, opts.shots));

    std::vector<ShotWorker> jobs(static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    const std::int64_t per = opts.shots / workers;
    const std::int64_t extra = opts.shots % workers;
    std::int64_t begin = 0;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t len = per + (w < extra ? 1 : 0);
        jobs[w].circuit = &circuit;
        jobs[w].opts = &opts;
        jobs[w].raw = opts.keep_raw ? &table.raw : nullptr;
        if (workers == 1) {
            jobs[w].run(begin, begin + len);
        } else {
            threads.emplace_back([&jobs, w, begin, len] { jobs[w].run(begin, begin + len); });
        }
        begin += len;
    }
    for (std::thread& t : threads) t.join();

    // Integer reduction in fixed worker order; any order gives the same sums.
    for (const ShotWorker& job : jobs) {
        for (int c = 0; c < circuit.n_clbits; ++c) table.ones_count[c] += job.counts[c];
    }
    return table;
}

std::string ShotTable::to_csv() const {
    if (!has_raw() && shots > 0 && n_clbits > 0) {
        throw Error("ShotTable::to_csv requires raw per-shot bits (keep_raw)");
    }
    std::string out = "shot";
    for (int c = 0; c < n_clbits; ++c) out += ",c" + std::to_string(c);
    out += '\n';
    for (std::int64_t s = 0; s < shots; ++s) {
        out += std::to_string(s);
        for (int c = 0; c < n_clbits; ++c) {
            out += ',';
            out += static_cast<char>('0' + raw_bit(s, c));
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text rendering

std::string render_text(const Circuit& circuit) {
    const std::vector<std::string> violations = validate(circuit);
    if (!violations.empty()) {
        throw ValidationError("render_text refused an invalid circuit: " + violations.front());
    }
    std::vector<std::string> rows(static_cast<std::size_t>(circuit.n_qubits));
    int prefix_width = 0;
    for (int q = 0; q < circuit.n_qubits; ++q) {
        rows[q] = "q" + std::to_string(q) + ": ";
        prefix_width = std::max(prefix_width, static_cast<int>(rows[q].size()));
    }
    for (auto& r : rows) r.append(static_cast<std::size_t>(prefix_width) - r.size(), ' ');
    for (auto& r : rows) r += '-';

    int prev_tag = -2;  // sentinel: no separator before the first column
    for (const Instruction& in : circuit.instructions) {
        if (prev_tag != -2 && in.tag != prev_tag) {
            for (auto& r : rows) r += ":-";
        }
        prev_tag = in.tag;

        std::vector<std::string> cells(rows.size());
        int lo = circuit.n_qubits, hi = -1;
        for (int q : in.qubits) {
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        for (std::size_t j = 0; j < in.qubits.size(); ++j) {
            const int q = in.qubits[j];
            switch (in.kind) {
                case InstrKind::Measure:
                    cells[q] = "M" + std::to_string(in.clbits[j]);
                    break;
                case InstrKind::Unitary:
                    if (in.label == "CX") {
                        cells[q] = (j == 0) ? "*" : "X";
                    } else {
                        cells[q] = in.label;
                    }
                    break;
                default:
                    cells[q] = in.label.empty() ? "?" : in.label;
                    break;
            }
        }
        for (int q = lo + 1; q < hi; ++q) {
            if (cells[q].empty()) cells[q] = "|";
        }
        std::size_t width = 1;
        for (const auto& c : cells) width = std::max(width, c.size());
        for (int q = 0; q < circuit.n_qubits; ++q) {
            std::string cell = cells[q];
            cell.append(width - cell.size(), '-');
            rows[q] += cell;
            rows[q] += '-';
        }
    }
    std::string out;
    for (const auto& r : rows) {
        out += r;
        out += '\n';
    }
    return out;
}

}  // namespace qrc
