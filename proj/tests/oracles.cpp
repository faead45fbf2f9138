#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace qrc::testing {

std::vector<cplx> embed_unitary(const UnitaryMatrix& u, const std::vector<int>& targets,
                                int n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t dg = std::size_t{1} << targets.size();
    std::size_t mask = 0;
    for (int t : targets) mask |= std::size_t{1} << t;
    auto gather = [&](std::size_t index) {
        std::size_t g = 0;
        for (std::size_t j = 0; j < targets.size(); ++j) {
            g |= ((index >> targets[j]) & 1u) << j;
        }
        return g;
    };
    auto spread = [&](std::size_t g) {
        std::size_t off = 0;
        for (std::size_t j = 0; j < targets.size(); ++j) {
            off |= ((g >> j) & 1u) << targets[j];
        }
        return off;
    };
    std::vector<cplx> full(dim * dim, cplx{0, 0});
    for (std::size_t row = 0; row < dim; ++row) {
        const std::size_t rest = row & ~mask;
        const std::size_t g_row = gather(row);
        for (std::size_t g_col = 0; g_col < dg; ++g_col) {
            const std::size_t col = rest | spread(g_col);
            full[row * dim + col] = u.at(static_cast<int>(g_row), static_cast<int>(g_col));
        }
    }
    return full;
}

std::vector<cplx> apply_full_matrix(const std::vector<cplx>& matrix,
                                    const std::vector<cplx>& amps) {
    const std::size_t dim = amps.size();
    std::vector<cplx> out(dim, cplx{0, 0});
    for (std::size_t r = 0; r < dim; ++r) {
        cplx acc{0, 0};
        for (std::size_t c = 0; c < dim; ++c) acc += matrix[r * dim + c] * amps[c];
        out[r] = acc;
    }
    return out;
}

namespace {

void enumerate_branches(const Circuit& circuit, std::size_t instr_index, std::vector<cplx> amps,
                        double prob, std::size_t clbit_word, std::vector<double>& out) {
    for (std::size_t idx = instr_index; idx < circuit.instructions.size(); ++idx) {
        const Instruction& in = circuit.instructions[idx];
        if (in.kind == InstrKind::Unitary) {
            amps = apply_full_matrix(embed_unitary(*in.matrix, in.qubits, circuit.n_qubits), amps);
            continue;
        }
        if (in.kind != InstrKind::Measure) {
            throw std::runtime_error("branch oracle supports unitary and measure only");
        }
        // Branch over every joint outcome of this measure instruction.
        const std::size_t dg = std::size_t{1} << in.qubits.size();
        std::size_t mask = 0;
        for (std::size_t j = 0; j < in.qubits.size(); ++j) mask |= std::size_t{1} << in.qubits[j];
        for (std::size_t outcome = 0; outcome < dg; ++outcome) {
            std::size_t want = 0;
            for (std::size_t j = 0; j < in.qubits.size(); ++j) {
                want |= ((outcome >> j) & 1u) << in.qubits[j];
            }
            double p = 0.0;
            for (std::size_t i = 0; i < amps.size(); ++i) {
                if ((i & mask) == want) p += std::norm(amps[i]);
            }
            if (p <= 0.0) continue;
            std::vector<cplx> projected(amps.size(), cplx{0, 0});
            const double inv = 1.0 / std::sqrt(p);
            for (std::size_t i = 0; i < amps.size(); ++i) {
                if ((i & mask) == want) projected[i] = amps[i] * inv;
            }
            std::size_t word = clbit_word;
            for (std::size_t j = 0; j < in.clbits.size(); ++j) {
                const std::size_t bit = (outcome >> j) & 1u;
                word = (word & ~(std::size_t{1} << in.clbits[j])) | (bit << in.clbits[j]);
            }
            enumerate_branches(circuit, idx + 1, std::move(projected), prob * p, word, out);
        }
        return;  // all continuations handled recursively
    }
    out[clbit_word] += prob;
}

}  // namespace

std::vector<double> enumerate_clbit_distribution(const Circuit& circuit) {
    std::vector<double> out(std::size_t{1} << circuit.n_clbits, 0.0);
    std::vector<cplx> amps(std::size_t{1} << circuit.n_qubits, cplx{0, 0});
    amps[0] = 1.0;
    enumerate_branches(circuit, 0, std::move(amps), 1.0, 0, out);
    return out;
}

OracleModel solve_normal_equations(const Matrix& x, const Matrix& y, double lambda,
                                   bool fit_intercept) {
    const std::size_t n = x.rows, f = x.cols, d = y.cols;
    std::vector<double> x_mean(f, 0.0), y_mean(d, 0.0);
    if (fit_intercept) {
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < f; ++c) x_mean[c] += x.at(r, c) / n;
            for (std::size_t c = 0; c < d; ++c) y_mean[c] += y.at(r, c) / n;
        }
    }
    // A = Xc' Xc + lambda I, B = Xc' Yc
    std::vector<double> a(f * f, 0.0), b(f * d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < f; ++i) {
            const double xi = x.at(r, i) - x_mean[i];
            for (std::size_t j = 0; j < f; ++j) {
                a[i * f + j] += xi * (x.at(r, j) - x_mean[j]);
            }
            for (std::size_t j = 0; j < d; ++j) {
                b[i * d + j] += xi * (y.at(r, j) - y_mean[j]);
            }
        }
    }
    for (std::size_t i = 0; i < f; ++i) a[i * f + i] += lambda;

    // Gaussian elimination with partial pivoting on [A | B].
    std::vector<std::size_t> perm(f);
    for (std::size_t i = 0; i < f; ++i) perm[i] = i;
    for (std::size_t col = 0; col < f; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < f; ++r) {
            if (std::abs(a[r * f + col]) > std::abs(a[pivot * f + col])) pivot = r;
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < f; ++c) std::swap(a[col * f + c], a[pivot * f + c]);
            for (std::size_t c = 0; c < d; ++c) std::swap(b[col * d + c], b[pivot * d + c]);
        }
        const double diag = a[col * f + col];
        if (std::abs(diag) < 1e-300) throw std::runtime_error("oracle: singular normal equations");
        for (std::size_t r = col + 1; r < f; ++r) {
            const double factor = a[r * f + col] / diag;
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < f; ++c) a[r * f + c] -= factor * a[col * f + c];
            for (std::size_t c = 0; c < d; ++c) b[r * d + c] -= factor * b[col * d + c];
        }
    }
    OracleModel model;
    model.weights.assign(f * d, 0.0);
    for (std::size_t col = f; col-- > 0;) {
        for (std::size_t t = 0; t < d; ++t) {
            double acc = b[col * d + t];
            for (std::size_t c = col + 1; c < f; ++c) {
                acc -= a[col * f + c] * model.weights[c * d + t];
            }
            model.weights[col * d + t] = acc / a[col * f + col];
        }
    }
    model.intercept.assign(d, 0.0);
    if (fit_intercept) {
        for (std::size_t t = 0; t < d; ++t) {
            double acc = y_mean[t];
            for (std::size_t c = 0; c < f; ++c) acc -= x_mean[c] * model.weights[c * d + t];
            model.intercept[t] = acc;
        }
    }
    return model;
}

}  // namespace qrc::testing
