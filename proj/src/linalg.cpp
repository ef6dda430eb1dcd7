#include "prcause/linalg.hpp"

#include "prcause/error.hpp"

#include <utility>

namespace prcause {

std::optional<Matrix> solve(Matrix a, Matrix b) {
    std::size_t n = a.rows();
    if (a.cols() != n || b.rows() != n) throw PreconditionError("solve: dimension mismatch");
    std::size_t k = b.cols();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a(pivot, col) == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            for (std::size_t j = 0; j < k; ++j) std::swap(b(pivot, j), b(col, j));
        }
        Rat inv = 1 / a(col, col);
        for (std::size_t j = col; j < n; ++j) a(col, j) *= inv;
        for (std::size_t j = 0; j < k; ++j) b(col, j) *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a(r, col) == 0) continue;
            Rat f = a(r, col);
            for (std::size_t j = col; j < n; ++j)
                if (a(col, j) != 0) a(r, j) -= f * a(col, j);
            for (std::size_t j = 0; j < k; ++j)
                if (b(col, j) != 0) b(r, j) -= f * b(col, j);
        }
    }
    return b;
}

std::optional<std::vector<Rat>> solve(const Matrix& a, const std::vector<Rat>& b) {
    Matrix rhs(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
    auto x = solve(a, std::move(rhs));
    if (!x) return std::nullopt;
    std::vector<Rat> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = (*x)(i, 0);
    return out;
}

}  // namespace prcause
