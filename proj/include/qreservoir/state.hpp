#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qreservoir/errors.hpp"
#include "qreservoir/rng.hpp"

namespace qrc {

using cplx = std::complex<double>;

// Dense amplitudes are 2^n complex doubles; 24 qubits is the hard cap.
inline constexpr int kMaxQubits = 24;
// Haar sampling builds a dense 2^k x 2^k matrix and QR-factorizes it.
inline constexpr int kMaxHaarQubits = 10;

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kPrepareNormTol = 1e-8;

// Index convention, fixed repo-wide: qubit 0 is the least-significant bit of
// a basis-state index. Target lists follow the same rule: when a k-qubit
// matrix is applied to targets [q0, q1, ...], bit j of the gate-local index
// corresponds to qubit targets[j]. Measured bit lists and marginal outcome
// indices use the listed order the same way.

// Square complex matrix on k qubits. Unitarity (max elementwise deviation of
// U†U from I) is checked at construction to kUnitaryTol.
class UnitaryMatrix {
public:
    UnitaryMatrix(int k_qubits, std::vector<cplx> row_major_entries);

    int k_qubits() const { return k_qubits_; }
    int dim() const { return dim_; }

    const cplx& at(int row, int col) const { return entries_[static_cast<std::size_t>(row) * dim_ + col]; }
    const std::vector<cplx>& entries() const { return entries_; }

    // Max elementwise |U†U - I|; recomputable for validation passes.
    double unitarity_error() const;

    // Debug rendering for test goldens: one row per line, entries as
    // fixed 6-decimal "re+imi" pairs.
    std::string to_text() const;

private:
    int k_qubits_ = 0;
    int dim_ = 0;
    std::vector<cplx> entries_;
};

// Standard named gates, in the LSB-first convention above. For cx() the
// control is gate-local bit 0, i.e. add to targets [control, target].
namespace gates {
UnitaryMatrix h();
UnitaryMatrix x();
UnitaryMatrix y();
UnitaryMatrix z();
UnitaryMatrix rx(double theta);
UnitaryMatrix ry(double theta);
UnitaryMatrix rz(double theta);
UnitaryMatrix cx();
UnitaryMatrix identity(int k_qubits);
}  // namespace gates

// Unitary drawn uniformly from U(2^k): QR factorization of a complex
// Ginibre sample with the R-diagonal phase convention fixed (diagonal real
// positive), which makes the Q factor Haar-distributed. Reproducible per
// stream.
UnitaryMatrix haar_random_unitary(int k_qubits, RngStream& rng);

// The hidden state of one trajectory: 2^n complex amplitudes, unit norm.
// Operations mutate in place; copy the object to branch. Every operation
// either preserves the norm (unitaries, Paulis) or renormalizes exactly
// (measurement collapse, reset, prepare).
class StateVector {
public:
    explicit StateVector(int n_qubits);

    static StateVector zero(int n_qubits) { return StateVector(n_qubits); }

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx amp(std::size_t index) const { return amps_[index]; }
    double norm_sq() const;

    // Back to |0...0> without reallocating.
    void reset_to_zero();

    // Applies u on the listed target qubits (identity elsewhere).
    void apply_unitary(const UnitaryMatrix& u, const std::vector<int>& targets);

    // Born marginal over the listed qubits: 2^m outcome probabilities,
    // outcome bit j = qubits[j].
    std::vector<double> probabilities(const std::vector<int>& qubits) const;

    // Projective measurement with collapse. Outcomes are sampled only over
    // the support, so measuring twice returns identical bits. Returns one
    // bit per listed qubit.
    std::vector<int> measure(const std::vector<int>& qubits, RngStream& rng);

    // Measure the qubit and flip it back to |0> if the outcome was 1.
    // Stochastic per trajectory, matching per-shot hardware semantics.
    void reset(int qubit, RngStream& rng);

    // Reset each listed qubit, then map the subset's |0...0> onto
    // target_amps (a state-preparation unitary on the subset). target_amps
    // must be unit-norm within kPrepareNormTol and is renormalized exactly
    // before embedding.
    void prepare(const std::vector<int>& qubits, const std::vector<cplx>& target_amps,
                 RngStream& rng);

    // With probability p applies one of X, Y, Z uniformly at random
    // (stochastic unravelling of the depolarizing channel).
    void apply_depolarizing(int qubit, double p, RngStream& rng);

    // pauli is 'X', 'Y' or 'Z'.
    void apply_pauli(char pauli, int qubit);

    // Debug rendering for test goldens: one amplitude per line,
    // "index: re+imi" with fixed 6 decimals.
    std::string to_text() const;

    // --- allocation-free variants used by the trajectory executor ---

    int measure_single(int qubit, RngStream& rng);
    void measure_into(const std::vector<int>& qubits, RngStream& rng, std::vector<int>& bits_out);

private:
    void check_qubits(const std::vector<int>& qubits) const;

    int n_qubits_ = 0;
    std::vector<cplx> amps_;
};

}  // namespace qrc
