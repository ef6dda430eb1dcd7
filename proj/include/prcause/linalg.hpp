#pragma once

#include "prcause/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace prcause {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rat& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rat> data_;
};

// Solves A X = B for square A by exact Gauss-Jordan elimination.
// Returns nothing when A is singular.
std::optional<Matrix> solve(Matrix a, Matrix b);

std::optional<std::vector<Rat>> solve(const Matrix& a, const std::vector<Rat>& b);

}  // namespace prcause
