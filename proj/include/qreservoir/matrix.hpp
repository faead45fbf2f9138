#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qrc {

// Dense row-major real matrix. Deliberately minimal: a shared container for
// feature tables and readout targets; the heavy lifting lives in fit_ridge.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major, rows*cols entries

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rws) {
        Matrix m;
        m.rows = rws.size();
        for (const auto& r : rws) {
            if (m.cols == 0) m.cols = r.size();
            m.data.insert(m.data.end(), r.begin(), r.end());
        }
        return m;
    }

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    // 1 x cols slice of row r.
    Matrix row(std::size_t r) const {
        Matrix out(1, cols);
        for (std::size_t c = 0; c < cols; ++c) out.data[c] = at(r, c);
        return out;
    }
};

}  // namespace qrc
