#include "lipreach/nnkit/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "lipreach/error.hpp"

namespace lipreach::nnkit {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols_) {
            throw ContractError("ragged matrix: row " + std::to_string(r) + " has " +
                                std::to_string(rows[r].size()) + " columns, expected " +
                                std::to_string(m.cols_));
        }
        std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + r * m.cols_);
    }
    return m;
}

void Matrix::accumulate(std::span<const double> x, std::span<double> out) const {
    for (std::size_t r = 0; r < rows_; ++r) {
        const double* w = data_.data() + r * cols_;
        double acc = out[r];
        for (std::size_t c = 0; c < cols_; ++c) acc += w[c] * x[c];
        out[r] = acc;
    }
}

std::vector<std::vector<double>> Matrix::to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r].assign(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
    }
    return out;
}

bool Matrix::all_finite() const { return nnkit::all_finite(data_); }

bool all_finite(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace lipreach::nnkit
