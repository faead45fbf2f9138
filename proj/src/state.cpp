#include "qreservoir/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace qrc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::string format_complex(cplx v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%+.6f%+.6fi", v.real(), v.imag());
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// UnitaryMatrix

UnitaryMatrix::UnitaryMatrix(int k_qubits, std::vector<cplx> row_major_entries)
    : k_qubits_(k_qubits) {
    if (k_qubits < 1 || k_qubits > kMaxQubits) {
        throw CapacityError("unitary matrix must act on 1.." + std::to_string(kMaxQubits) +
                            " qubits, got " + std::to_string(k_qubits));
    }
    dim_ = 1 << k_qubits;
    const std::size_t expected = static_cast<std::size_t>(dim_) * dim_;
    if (row_major_entries.size() != expected) {
        throw ValidationError("unitary matrix on " + std::to_string(k_qubits) + " qubits needs " +
                              std::to_string(expected) + " entries, got " +
                              std::to_string(row_major_entries.size()));
    }
    entries_ = std::move(row_major_entries);
    const double err = unitarity_error();
    if (!(err <= kUnitaryTol)) {
        throw ValidationError("matrix is not unitary: max |U†U - I| = " + std::to_string(err));
    }
}

double UnitaryMatrix::unitarity_error() const {
    double worst = 0.0;
    for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < dim_; ++c) {
            cplx acc{0.0, 0.0};
            for (int i = 0; i < dim_; ++i) {
                acc += std::conj(at(i, r)) * at(i, c);
            }
            if (r == c) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

std::string UnitaryMatrix::to_text() const {
    std::string out;
    for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < dim_; ++c) {
            if (c > 0) out += ' ';
            out += format_complex(at(r, c));
        }
        out += '\n';
    }
    return out;
}

namespace gates {

UnitaryMatrix h() {
    return UnitaryMatrix(1, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2});
}

UnitaryMatrix x() { return UnitaryMatrix(1, {0.0, 1.0, 1.0, 0.0}); }

UnitaryMatrix y() {
    return UnitaryMatrix(1, {cplx{0, 0}, cplx{0, -1}, cplx{0, 1}, cplx{0, 0}});
}

UnitaryMatrix z() { return UnitaryMatrix(1, {1.0, 0.0, 0.0, -1.0}); }

UnitaryMatrix rx(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return UnitaryMatrix(1, {cplx{c, 0}, cplx{0, -s}, cplx{0, -s}, cplx{c, 0}});
}

UnitaryMatrix ry(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return UnitaryMatrix(1, {cplx{c, 0}, cplx{-s, 0}, cplx{s, 0}, cplx{c, 0}});
}

UnitaryMatrix rz(double theta) {
    const cplx em = std::exp(cplx{0, -theta / 2});
    const cplx ep = std::exp(cplx{0, theta / 2});
    return UnitaryMatrix(1, {em, 0.0, 0.0, ep});
}

// Control is gate-local bit 0 (pass targets [control, target]).
UnitaryMatrix cx() {
    return UnitaryMatrix(2, {
        1, 0, 0, 0,
        0, 0, 0, 1,
        0, 0, 1, 0,
        0, 1, 0, 0,
    });
}

UnitaryMatrix identity(int k_qubits) {
    const int d = 1 << k_qubits;
    std::vector<cplx> e(static_cast<std::size_t>(d) * d, cplx{0, 0});
    for (int i = 0; i < d; ++i) e[static_cast<std::size_t>(i) * d + i] = 1.0;
    return UnitaryMatrix(k_qubits, std::move(e));
}

}  // namespace gates

UnitaryMatrix haar_random_unitary(int k_qubits, RngStream& rng) {
    if (k_qubits < 1 || k_qubits > kMaxHaarQubits) {
        throw CapacityError("haar_random_unitary supports 1.." + std::to_string(kMaxHaarQubits) +
                            " qubits, got " + std::to_string(k_qubits));
    }
    const int d = 1 << k_qubits;
    // Column-major Ginibre sample, then modified Gram-Schmidt with a second
    // orthogonalization pass. Keeping the R diagonal real positive fixes the
    // QR phase convention, which makes the Q factor Haar-distributed.
    std::vector<cplx> cols(static_cast<std::size_t>(d) * d);
    auto col = [&](int c) { return cols.data() + static_cast<std::size_t>(c) * d; };
    for (int c = 0; c < d; ++c) {
        for (int r = 0; r < d; ++r) {
            col(c)[r] = cplx{rng.gaussian(), rng.gaussian()} * kInvSqrt2;
        }
    }
    for (int c = 0; c < d; ++c) {
        cplx* vc = col(c);
        double nrm = 0.0;
        for (int attempt = 0;; ++attempt) {
            for (int pass = 0; pass < 2; ++pass) {
                for (int j = 0; j < c; ++j) {
                    const cplx* vj = col(j);
                    cplx proj{0, 0};
                    for (int r = 0; r < d; ++r) proj += std::conj(vj[r]) * vc[r];
                    for (int r = 0; r < d; ++r) vc[r] -= proj * vj[r];
                }
            }
            double n2 = 0.0;
            for (int r = 0; r < d; ++r) n2 += std::norm(vc[r]);
            nrm = std::sqrt(n2);
            if (nrm > 1e-150) break;
            if (attempt > 8) throw Error("haar_random_unitary: degenerate Ginibre column");
            for (int r = 0; r < d; ++r) vc[r] = cplx{rng.gaussian(), rng.gaussian()} * kInvSqrt2;
        }
        for (int r = 0; r < d; ++r) vc[r] /= nrm;
    }
    std::vector<cplx> row_major(static_cast<std::size_t>(d) * d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            row_major[static_cast<std::size_t>(r) * d + c] = col(c)[r];
        }
    }
    return UnitaryMatrix(k_qubits, std::move(row_major));
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("state vector supports 1.." + std::to_string(kMaxQubits) +
                            " qubits, got " + std::to_string(n_qubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, cplx{0, 0});
    amps_[0] = 1.0;
}

double StateVector::norm_sq() const {
    double acc = 0.0;
    for (const cplx& a : amps_) acc += std::norm(a);
    return acc;
}

void StateVector::reset_to_zero() {
    std::fill(amps_.begin(), amps_.end(), cplx{0, 0});
    amps_[0] = 1.0;
}

void StateVector::check_qubits(const std::vector<int>& qubits) const {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] < 0 || qubits[i] >= n_qubits_) {
            throw IndexError("qubit index " + std::to_string(qubits[i]) + " out of range for " +
                             std::to_string(n_qubits_) + " qubits");
        }
        for (std::size_t j = i + 1; j < qubits.size(); ++j) {
            if (qubits[i] == qubits[j]) {
                throw IndexError("duplicate qubit index " + std::to_string(qubits[i]));
            }
        }
    }
}

void StateVector::apply_unitary(const UnitaryMatrix& u, const std::vector<int>& targets) {
    const int k = u.k_qubits();
    if (static_cast<int>(targets.size()) != k) {
        throw IndexError("unitary on " + std::to_string(k) + " qubits applied to " +
                         std::to_string(targets.size()) + " targets");
    }
    check_qubits(targets);

    const std::size_t dim = amps_.size();
    const std::size_t dg = std::size_t{1} << k;

    std::size_t target_mask = 0;
    bool in_order = true;
    for (int j = 0; j < k; ++j) {
        target_mask |= std::size_t{1} << targets[j];
        in_order = in_order && targets[j] == j;
    }
    const auto spread = [&](std::size_t g) {
        if (in_order) return g;
        std::size_t off = 0;
        for (int j = 0; j < k; ++j) off |= ((g >> j) & 1u) << targets[j];
        return off;
    };

    // Single-support fast path: a basis-like state (exactly one nonzero
    // amplitude, the common case right after a full measurement collapse)
    // turns the matvec into a column scatter.
    std::size_t support = dim;
    for (std::size_t i = 0; i < dim; ++i) {
        if (amps_[i] != cplx{0, 0}) {
            if (support != dim) {
                support = dim;
                break;
            }
            support = i;
        }
    }
    if (support != dim) {
        const cplx base = amps_[support];
        std::size_t g0 = 0;
        for (int j = 0; j < k; ++j) g0 |= static_cast<std::size_t>((support >> targets[j]) & 1u) << j;
        const std::size_t outer = support & ~target_mask;
        amps_[support] = cplx{0, 0};
        const cplx* column = u.entries().data() + g0;  // stride dg walks the column
        for (std::size_t g = 0; g < dg; ++g) {
            amps_[outer | spread(g)] = column[g * dg] * base;
        }
        return;
    }

    std::size_t offset_stack[64];
    std::vector<std::size_t> offset_heap;
    std::size_t* offsets = offset_stack;
    if (dg > 64) {
        offset_heap.resize(dg);
        offsets = offset_heap.data();
    }
    for (std::size_t g = 0; g < dg; ++g) offsets[g] = spread(g);

    cplx in_stack[64], out_stack[64];
    std::vector<cplx> in_heap, out_heap;
    cplx* in = in_stack;
    cplx* out = out_stack;
    if (dg > 64) {
        in_heap.resize(dg);
        out_heap.resize(dg);
        in = in_heap.data();
        out = out_heap.data();
    }

    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & target_mask) != 0) continue;
        for (std::size_t g = 0; g < dg; ++g) in[g] = amps_[i | offsets[g]];
        for (std::size_t r = 0; r < dg; ++r) {
            cplx acc{0, 0};
            const cplx* urow = u.entries().data() + r * dg;
            for (std::size_t c = 0; c < dg; ++c) acc += urow[c] * in[c];
            out[r] = acc;
        }
        for (std::size_t g = 0; g < dg; ++g) amps_[i | offsets[g]] = out[g];
    }
}

std::vector<double> StateVector::probabilities(const std::vector<int>& qubits) const {
    check_qubits(qubits);
    const int m = static_cast<int>(qubits.size());
    if (m == 0) throw IndexError("probabilities over an empty qubit list");
    if (m > 22) throw CapacityError("marginal over more than 22 qubits");
    std::vector<double> out(std::size_t{1} << m, 0.0);
    const std::size_t dim = amps_.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const double p = std::norm(amps_[i]);
        if (p == 0.0) continue;
        std::size_t o = 0;
        for (int j = 0; j < m; ++j) o |= static_cast<std::size_t>((i >> qubits[j]) & 1u) << j;
        out[o] += p;
    }
    return out;
}

int StateVector::measure_single(int qubit, RngStream& rng) {
    if (qubit < 0 || qubit >= n_qubits_) {
        throw IndexError("qubit index " + std::to_string(qubit) + " out of range");
    }
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t dim = amps_.size();
    double p0 = 0.0, p1 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double p = std::norm(amps_[i]);
        if ((i & bit) != 0) {
            p1 += p;
        } else {
            p0 += p;
        }
    }
    int outcome;
    if (p1 == 0.0) {
        outcome = 0;
    } else if (p0 == 0.0) {
        outcome = 1;
    } else {
        outcome = rng.uniform() < p1 / (p0 + p1) ? 1 : 0;
    }
    const double kept = outcome == 1 ? p1 : p0;
    const double inv = 1.0 / std::sqrt(kept);
    const std::size_t want = outcome == 1 ? bit : 0;
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & bit) == want) {
            amps_[i] *= inv;
        } else {
            amps_[i] = cplx{0, 0};
        }
    }
    return outcome;
}

void StateVector::measure_into(const std::vector<int>& qubits, RngStream& rng,
                               std::vector<int>& bits_out) {
    check_qubits(qubits);
    if (qubits.empty()) throw IndexError("measurement over an empty qubit list");
    const std::size_t m = qubits.size();
    bits_out.resize(m);

    if (m > 16) {
        // Chain-rule sampling: per-qubit Born draw with collapse reproduces
        // the joint distribution without materializing a 2^m table.
        for (std::size_t j = 0; j < m; ++j) {
            bits_out[j] = measure_single(qubits[j], rng);
        }
        return;
    }

    const std::size_t dim = amps_.size();
    bool identity_order = m == static_cast<std::size_t>(n_qubits_);
    for (std::size_t j = 0; identity_order && j < m; ++j) {
        identity_order = qubits[j] == static_cast<int>(j);
    }

    double table_stack[65536 / sizeof(double)];
    std::size_t table_len = std::size_t{1} << m;
    std::vector<double> table_heap;
    double* table = table_stack;
    if (table_len > sizeof(table_stack) / sizeof(double)) {
        table_heap.assign(table_len, 0.0);
        table = table_heap.data();
    } else {
        std::fill(table, table + table_len, 0.0);
    }

    double total = 0.0;
    if (identity_order) {
        for (std::size_t i = 0; i < dim; ++i) {
            const double p = std::norm(amps_[i]);
            table[i] = p;
            total += p;
        }
    } else {
        for (std::size_t i = 0; i < dim; ++i) {
            const double p = std::norm(amps_[i]);
            if (p == 0.0) continue;
            std::size_t o = 0;
            for (std::size_t j = 0; j < m; ++j) o |= ((i >> qubits[j]) & 1u) << j;
            table[o] += p;
            total += p;
        }
    }
    if (total <= 0.0) throw Error("measurement on a zero-norm state");

    // Sample only over the support so repeated measurement is idempotent.
    const double r = rng.uniform() * total;
    std::size_t outcome = table_len;
    double cum = 0.0;
    std::size_t last_positive = table_len;
    for (std::size_t o = 0; o < table_len; ++o) {
        if (table[o] <= 0.0) continue;
        last_positive = o;
        cum += table[o];
        if (r < cum) {
            outcome = o;
            break;
        }
    }
    if (outcome == table_len) outcome = last_positive;

    const double inv = 1.0 / std::sqrt(table[outcome]);
    if (identity_order) {
        // Full-register measurement collapses onto one basis state.
        const cplx survivor = amps_[outcome] * inv;
        std::fill(amps_.begin(), amps_.end(), cplx{0, 0});
        amps_[outcome] = survivor;
    } else {
        std::size_t mask = 0, want = 0;
        for (std::size_t j = 0; j < m; ++j) {
            mask |= std::size_t{1} << qubits[j];
            want |= ((outcome >> j) & 1u) << qubits[j];
        }
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & mask) == want) {
                amps_[i] *= inv;
            } else {
                amps_[i] = cplx{0, 0};
            }
        }
    }
    for (std::size_t j = 0; j < m; ++j) bits_out[j] = static_cast<int>((outcome >> j) & 1u);
}

std::vector<int> StateVector::measure(const std::vector<int>& qubits, RngStream& rng) {
    std::vector<int> bits;
    measure_into(qubits, rng, bits);
    return bits;
}

void StateVector::reset(int qubit, RngStream& rng) {
    if (measure_single(qubit, rng) == 1) {
        apply_pauli('X', qubit);
    }
}

void StateVector::prepare(const std::vector<int>& qubits, const std::vector<cplx>& target_amps,
                          RngStream& rng) {
    check_qubits(qubits);
    const int k = static_cast<int>(qubits.size());
    if (k == 0) throw IndexError("prepare over an empty qubit list");
    const std::size_t dg = std::size_t{1} << k;
    if (target_amps.size() != dg) {
        throw ValidationError("prepare on " + std::to_string(k) + " qubits needs " +
                              std::to_string(dg) + " amplitudes, got " +
                              std::to_string(target_amps.size()));
    }
    double n2 = 0.0;
    for (const cplx& a : target_amps) n2 += std::norm(a);
    const double nrm = std::sqrt(n2);
    if (!(std::abs(nrm - 1.0) <= kPrepareNormTol)) {
        throw ValidationError("prepare amplitudes are not normalized: |amps| = " +
                              std::to_string(nrm));
    }
    for (int q : qubits) reset(q, rng);

    // Subset is now |0...0>, so the embedding is a per-block product scatter.
    const double inv = 1.0 / nrm;
    std::size_t target_mask = 0;
    for (int q : qubits) target_mask |= std::size_t{1} << q;
    const std::size_t dim = amps_.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & target_mask) != 0) continue;
        const cplx base = amps_[i];
        if (base == cplx{0, 0}) continue;
        for (std::size_t g = dg; g-- > 1;) {
            std::size_t off = 0;
            for (int j = 0; j < k; ++j) off |= ((g >> j) & 1u) << qubits[j];
            amps_[i | off] = base * (target_amps[g] * inv);
        }
        amps_[i] = base * (target_amps[0] * inv);
    }
}

void StateVector::apply_depolarizing(int qubit, double p, RngStream& rng) {
    if (qubit < 0 || qubit >= n_qubits_) {
        throw IndexError("qubit index " + std::to_string(qubit) + " out of range");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("depolarizing probability must be in [0, 1], got " +
                              std::to_string(p));
    }
    if (p == 0.0) return;
    if (rng.uniform() >= p) return;
    const int which = std::min(2, static_cast<int>(rng.uniform() * 3.0));
    apply_pauli("XYZ"[which], qubit);
}

void StateVector::apply_pauli(char pauli, int qubit) {
    if (qubit < 0 || qubit >= n_qubits_) {
        throw IndexError("qubit index " + std::to_string(qubit) + " out of range");
    }
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t dim = amps_.size();
    switch (pauli) {
        case 'X':
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & bit) == 0) std::swap(amps_[i], amps_[i | bit]);
            }
            break;
        case 'Y':
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & bit) == 0) {
                    const cplx lo = amps_[i];
                    const cplx hi = amps_[i | bit];
                    amps_[i] = cplx{0, -1} * hi;
                    amps_[i | bit] = cplx{0, 1} * lo;
                }
            }
            break;
        case 'Z':
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & bit) != 0) amps_[i] = -amps_[i];
            }
            break;
        default:
            throw ValidationError(std::string("unknown Pauli '") + pauli + "'");
    }
}

std::string StateVector::to_text() const {
    std::string out;
    char buf[96];
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu: %+.6f%+.6fi\n", i, amps_[i].real(), amps_[i].imag());
        out += buf;
    }
    return out;
}

}  // namespace qrc
