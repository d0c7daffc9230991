#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lipreach::nnkit {

/// Activations and weights are plain 64-bit vectors.
using Vector = std::vector<double>;

/// Dense row-major matrix. `rows` is the output width, `cols` the input width.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static Matrix identity(std::size_t n);
    /// Throws ContractError when the rows are ragged.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }

    /// out[r] += row(r) . x, accumulated left to right.
    void accumulate(std::span<const double> x, std::span<double> out) const;

    std::vector<std::vector<double>> to_rows() const;
    bool all_finite() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

bool all_finite(std::span<const double> values);

}  // namespace lipreach::nnkit
