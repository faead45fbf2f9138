#include "qreservoir/codec.hpp"

#include <cmath>
#include <cstdio>

#include "qreservoir/series.hpp"

namespace qrc {

Alphabet::Alphabet(std::vector<std::string> syms, int k) : symbols(std::move(syms)), k_qubits(k) {
    if (k_qubits < 1 || k_qubits > kMaxQubits) {
        throw ValidationError("alphabet k_qubits must be in 1.." + std::to_string(kMaxQubits));
    }
    if (symbols.empty()) throw ValidationError("alphabet must not be empty");
    if (symbols.size() > (std::size_t{1} << k_qubits)) {
        throw ValidationError("alphabet with " + std::to_string(symbols.size()) +
                              " symbols does not fit in " + std::to_string(k_qubits) + " qubits");
    }
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        for (std::size_t j = i + 1; j < symbols.size(); ++j) {
            if (symbols[i] == symbols[j]) {
                throw ValidationError("duplicate alphabet symbol '" + symbols[i] + "'");
            }
        }
    }
}

Alphabet Alphabet::with_min_qubits(std::vector<std::string> syms) {
    int k = 1;
    while ((std::size_t{1} << k) < syms.size()) ++k;
    return Alphabet(std::move(syms), k);
}

int Alphabet::index_of(const std::string& symbol) const {
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (symbols[i] == symbol) return static_cast<int>(i);
    }
    return -1;
}

std::vector<cplx> encode_basis_index(int index, const Alphabet& alphabet) {
    if (index < 0 || index >= static_cast<int>(alphabet.size())) {
        throw DecodeError("symbol index " + std::to_string(index) + " outside alphabet of size " +
                          std::to_string(alphabet.size()));
    }
    std::vector<cplx> amps(std::size_t{1} << alphabet.k_qubits, cplx{0, 0});
    amps[static_cast<std::size_t>(index)] = 1.0;
    return amps;
}

std::vector<cplx> encode_basis(const std::string& symbol, const Alphabet& alphabet) {
    const int idx = alphabet.index_of(symbol);
    if (idx < 0) throw DecodeError("unknown symbol '" + symbol + "'");
    return encode_basis_index(idx, alphabet);
}

std::vector<cplx> encode_angle(double x) {
    if (!std::isfinite(x)) throw ValidationError("encode_angle: non-finite input");
    if (x < -1e-9 || x > 1.0 + 1e-9) {
        std::fprintf(stderr, "warning: encode_angle input %g clamped to [0, 1]\n", x);
    }
    const double clamped = x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
    const double angle = 1.57079632679489661923 * clamped;  // pi/2 * x
    return {cplx{std::cos(angle), 0.0}, cplx{std::sin(angle), 0.0}};
}

int decode_symbol_index(const std::vector<double>& prediction, const Alphabet& alphabet) {
    for (double v : prediction) {
        if (!std::isfinite(v)) throw DecodeError("prediction contains a non-finite value");
    }
    const std::size_t m = alphabet.size();
    if (prediction.size() == 1) {
        int best = 0;
        double best_dist = std::abs(prediction[0] - 0.0);
        for (std::size_t i = 1; i < m; ++i) {
            const double d = std::abs(prediction[0] - static_cast<double>(i));
            if (d < best_dist) {  // strict: ties stay at the lower index
                best_dist = d;
                best = static_cast<int>(i);
            }
        }
        return best;
    }
    if (prediction.size() == m) {
        int best = 0;
        for (std::size_t i = 1; i < m; ++i) {
            if (prediction[i] > prediction[best]) best = static_cast<int>(i);
        }
        return best;
    }
    throw DecodeError("prediction of width " + std::to_string(prediction.size()) +
                      " matches neither scalar nor one-hot layout for an alphabet of " +
                      std::to_string(m) + " symbols");
}

std::string decode_symbol(const std::vector<double>& prediction, const Alphabet& alphabet) {
    return alphabet.symbols[static_cast<std::size_t>(decode_symbol_index(prediction, alphabet))];
}

// ---------------------------------------------------------------------------
// TimeSeries

TimeSeries TimeSeries::symbolic(const std::vector<std::string>& symbols, Alphabet alphabet) {
    std::vector<int> idx;
    idx.reserve(symbols.size());
    for (const std::string& s : symbols) {
        const int i = alphabet.index_of(s);
        if (i < 0) throw DecodeError("series symbol '" + s + "' is not in the alphabet");
        idx.push_back(i);
    }
    return symbolic_indices(std::move(idx), std::move(alphabet));
}

TimeSeries TimeSeries::symbolic_indices(std::vector<int> indices, Alphabet alphabet) {
    for (int i : indices) {
        if (i < 0 || i >= static_cast<int>(alphabet.size())) {
            throw DecodeError("series index " + std::to_string(i) + " outside the alphabet");
        }
    }
    TimeSeries s;
    s.kind_ = SeriesKind::Symbolic;
    s.indices_ = std::move(indices);
    s.alphabet_ = std::move(alphabet);
    return s;
}

TimeSeries TimeSeries::real(std::vector<double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw ValidationError("real series contains a non-finite value");
    }
    TimeSeries s;
    s.kind_ = SeriesKind::Real;
    s.reals_ = std::move(values);
    return s;
}

SeriesValue TimeSeries::at(std::size_t t) const {
    SeriesValue v;
    v.kind = kind_;
    if (kind_ == SeriesKind::Real) {
        v.real = reals_.at(t);
    } else {
        v.index = indices_.at(t);
        v.symbol = alphabet_.symbols[static_cast<std::size_t>(v.index)];
        v.real = static_cast<double>(v.index);
    }
    return v;
}

void TimeSeries::push_back(const SeriesValue& v) {
    if (v.kind != kind_) throw ValidationError("series element kind mismatch");
    if (kind_ == SeriesKind::Real) {
        reals_.push_back(v.real);
    } else {
        if (v.index < 0 || v.index >= static_cast<int>(alphabet_.size())) {
            throw DecodeError("series index " + std::to_string(v.index) + " outside the alphabet");
        }
        indices_.push_back(v.index);
    }
}

TimeSeries TimeSeries::prefix(std::size_t count) const {
    TimeSeries s = *this;
    if (kind_ == SeriesKind::Real) {
        if (count < s.reals_.size()) s.reals_.resize(count);
    } else {
        if (count < s.indices_.size()) s.indices_.resize(count);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Targets and prediction decoding

int target_dim(const TimeSeries& series) {
    if (series.kind() == SeriesKind::Real) return 1;
    return series.alphabet().size() <= 2 ? 1 : static_cast<int>(series.alphabet().size());
}

Matrix make_targets(const TimeSeries& series, std::size_t from, std::size_t to) {
    if (from > to || to > series.size()) {
        throw ValidationError("make_targets: invalid range [" + std::to_string(from) + ", " +
                              std::to_string(to) + ") for series of length " +
                              std::to_string(series.size()));
    }
    const int dim = target_dim(series);
    Matrix m(to - from, static_cast<std::size_t>(dim));
    for (std::size_t t = from; t < to; ++t) {
        const std::size_t r = t - from;
        if (series.kind() == SeriesKind::Real) {
            m.at(r, 0) = series.reals()[t];
        } else if (dim == 1) {
            m.at(r, 0) = static_cast<double>(series.indices()[t]);
        } else {
            m.at(r, static_cast<std::size_t>(series.indices()[t])) = 1.0;
        }
    }
    return m;
}

SeriesValue decode_prediction(const std::vector<double>& row, const TimeSeries& series) {
    if (series.kind() == SeriesKind::Real) {
        if (row.size() != 1) {
            throw DecodeError("real series expects a single-column prediction, got width " +
                              std::to_string(row.size()));
        }
        if (!std::isfinite(row[0])) throw DecodeError("prediction is non-finite");
        return SeriesValue::of_real(row[0]);
    }
    const int idx = decode_symbol_index(row, series.alphabet());
    SeriesValue v;
    v.kind = SeriesKind::Symbolic;
    v.index = idx;
    v.symbol = series.alphabet().symbols[static_cast<std::size_t>(idx)];
    v.real = static_cast<double>(idx);
    return v;
}

}  // namespace qrc
