#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qreservoir/state.hpp"

namespace qrc {

enum class InstrKind { Unitary, Prepare, Measure, Noise };

// One circuit instruction. The payload depends on kind: Unitary carries a
// matrix (shared, so a reservoir operator appended per timestep is stored
// once), Prepare carries target amplitudes, Noise carries a depolarizing
// probability. Measure is the only kind with classical bits.
struct Instruction {
    InstrKind kind = InstrKind::Unitary;
    std::vector<int> qubits;
    std::vector<int> clbits;
    std::shared_ptr<const UnitaryMatrix> matrix;
    std::vector<cplx> amplitudes;
    double noise_p = 0.0;
    std::string label;  // rendering label ("H", "CX", "U", "P", ...)
    int tag = -1;       // timestep label; -1 = outside any timestep block
};

struct Circuit {
    int n_qubits = 0;
    int n_clbits = 0;
    std::vector<Instruction> instructions;
};

// Structural equality (matrices compared by value).
bool structurally_equal(const Circuit& a, const Circuit& b);

// Returns human-readable violations; empty means the circuit is valid.
// Checks index ranges, per-instruction qubit distinctness, unitarity of
// payloads (1e-10), prepare normalization (1e-8), measure arity, the
// single-writer rule for classical bits, and noise probability ranges.
std::vector<std::string> validate(const Circuit& circuit);

// Fluent builder; the only surface reservoir hooks write to. Index and
// payload errors are raised eagerly at append time.
class CircuitBuilder {
public:
    explicit CircuitBuilder(int n_qubits);

    CircuitBuilder& add_unitary(const UnitaryMatrix& u, const std::vector<int>& targets,
                                std::string label = "U");
    CircuitBuilder& add_unitary(std::shared_ptr<const UnitaryMatrix> u,
                                const std::vector<int>& targets, std::string label = "U");
    CircuitBuilder& add_h(int qubit);
    CircuitBuilder& add_x(int qubit);
    CircuitBuilder& add_y(int qubit);
    CircuitBuilder& add_z(int qubit);
    CircuitBuilder& add_rx(int qubit, double theta);
    CircuitBuilder& add_ry(int qubit, double theta);
    CircuitBuilder& add_rz(int qubit, double theta);
    CircuitBuilder& add_cx(int control, int target);

    CircuitBuilder& add_prepare(const std::vector<cplx>& amps, const std::vector<int>& targets);

    // Explicit classical bits; each clbit may be written once per circuit.
    CircuitBuilder& add_measure(const std::vector<int>& qubits, const std::vector<int>& clbits);
    // Measures every qubit into freshly allocated clbits (qubit i -> base+i).
    CircuitBuilder& measure_all();

    CircuitBuilder& add_depolarizing(int qubit, double p);

    // Timestep label attached to subsequently appended instructions.
    void set_tag(int tag) { tag_ = tag; }
    void clear_tag() { tag_ = -1; }

    int n_qubits() const { return n_qubits_; }
    // Classical bits allocated so far.
    int n_clbits() const { return n_clbits_; }
    // Convenience list [0, n) mirroring the "all qubits" idiom.
    std::vector<int> qubits() const;

    Circuit build() &&;
    Circuit build() const&;
    const Circuit& peek() const { return circuit_; }

private:
    void check_qubit(int q) const;
    void check_qubits(const std::vector<int>& qs) const;
    Instruction& append(Instruction instr);

    int n_qubits_ = 0;
    int n_clbits_ = 0;
    std::vector<bool> clbit_written_;
    int tag_ = -1;
    Circuit circuit_;
};

// Classical outcomes aggregated over shots. Counts are integers, so shot
// order and thread layout cannot change the table; averages are the exact
// ratios count/shots.
struct ShotTable {
    std::int64_t shots = 0;
    int n_clbits = 0;
    std::vector<std::int64_t> ones_count;  // per clbit
    std::vector<std::uint8_t> raw;         // shots x n_clbits, row-major; kept on request

    double mean(int clbit) const {
        return static_cast<double>(ones_count[clbit]) / static_cast<double>(shots);
    }
    bool has_raw() const { return !raw.empty(); }
    int raw_bit(std::int64_t shot, int clbit) const {
        return raw[static_cast<std::size_t>(shot) * n_clbits + clbit];
    }
    // "shot,c0,c1,..." with one row per shot; requires raw retention.
    std::string to_csv() const;
};

struct ExecutionOptions {
    std::int64_t shots = 1;
    std::uint64_t seed = 0;
    // When > 0, a depolarizing event with this probability is applied to each
    // target qubit after every unitary instruction.
    double depolarizing_p = 0.0;
    // 0 = one worker per hardware thread. Results are identical at any count.
    int threads = 1;
    bool keep_raw = false;
};

// Runs `shots` independent trajectories from |0...0>, processing instructions
// in order (unitary, prepare, measure-with-collapse, stochastic noise), and
// aggregates integer counts per classical bit. Shot s draws from
// RngStream(seed, s). Refuses circuits that fail validation.
ShotTable execute(const Circuit& circuit, const ExecutionOptions& opts);

// Deterministic ASCII wire diagram: one row per qubit, one column per
// instruction, ':' columns between different timestep tags. Suitable for
// golden-file tests.
std::string render_text(const Circuit& circuit);

}  // namespace qrc
