#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qreservoir/codec.hpp"
#include "qreservoir/matrix.hpp"

namespace qrc {

enum class SeriesKind { Symbolic, Real };

// One element of a time series, as handed to the `during` hook.
struct SeriesValue {
    SeriesKind kind = SeriesKind::Real;
    double real = 0.0;        // Real series: the value
    int index = -1;           // Symbolic series: alphabet index
    std::string symbol;       // Symbolic series: alphabet label

    static SeriesValue of_real(double v) { return {SeriesKind::Real, v, -1, {}}; }
};

// Homogeneous input sequence: either symbols from a finite alphabet or raw
// real numbers.
class TimeSeries {
public:
    TimeSeries() = default;

    static TimeSeries symbolic(const std::vector<std::string>& symbols, Alphabet alphabet);
    static TimeSeries symbolic_indices(std::vector<int> indices, Alphabet alphabet);
    static TimeSeries real(std::vector<double> values);

    SeriesKind kind() const { return kind_; }
    std::size_t size() const { return kind_ == SeriesKind::Real ? reals_.size() : indices_.size(); }
    bool empty() const { return size() == 0; }
    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<int>& indices() const { return indices_; }
    const std::vector<double>& reals() const { return reals_; }

    SeriesValue at(std::size_t t) const;
    void push_back(const SeriesValue& v);
    TimeSeries prefix(std::size_t count) const;

private:
    SeriesKind kind_ = SeriesKind::Real;
    std::vector<double> reals_;
    std::vector<int> indices_;
    Alphabet alphabet_;
};

// Supervised targets for readout training. Symbolic series with up to two
// symbols use the scalar symbol index (one column); larger alphabets use
// one-hot rows; real series use the raw value.
int target_dim(const TimeSeries& series);
// Rows are the targets for series elements [from, to).
Matrix make_targets(const TimeSeries& series, std::size_t from, std::size_t to);
// Maps one model output row back onto the series' value kind. Throws
// DecodeError for non-finite input or a row width that matches neither the
// scalar nor the one-hot layout.
SeriesValue decode_prediction(const std::vector<double>& row, const TimeSeries& series);

}  // namespace qrc
