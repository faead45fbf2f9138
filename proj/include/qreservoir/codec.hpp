#pragma once

#include <string>
#include <vector>

#include "qreservoir/state.hpp"

namespace qrc {

// Finite ordered symbol set; the ordering fixes the basis-state mapping.
// |symbols| must fit in 2^k_qubits.
struct Alphabet {
    std::vector<std::string> symbols;
    int k_qubits = 1;

    Alphabet() = default;
    Alphabet(std::vector<std::string> syms, int k);

    // Smallest register holding the symbols (k = ceil(log2(|syms|)), min 1).
    static Alphabet with_min_qubits(std::vector<std::string> syms);
    static Alphabet binary() { return Alphabet({"0", "1"}, 1); }

    std::size_t size() const { return symbols.size(); }
    // -1 when the symbol is unknown.
    int index_of(const std::string& symbol) const;
};

// Basis-state encoding: unit vector of length 2^k with 1 at the symbol's
// index. Throws DecodeError for unknown symbols.
std::vector<cplx> encode_basis(const std::string& symbol, const Alphabet& alphabet);
std::vector<cplx> encode_basis_index(int index, const Alphabet& alphabet);

// Angle encoding for a real value in [0, 1]: [cos(pi x / 2), sin(pi x / 2)].
// Values outside [0, 1] by more than 1e-9 are clamped with a stderr warning.
std::vector<cplx> encode_angle(double x);

// Nearest-target decoding. A length-1 prediction is matched to the nearest
// symbol index by absolute distance; a length-|alphabet| prediction by
// argmax. Ties break toward the lower index.
int decode_symbol_index(const std::vector<double>& prediction, const Alphabet& alphabet);
std::string decode_symbol(const std::vector<double>& prediction, const Alphabet& alphabet);

}  // namespace qrc
