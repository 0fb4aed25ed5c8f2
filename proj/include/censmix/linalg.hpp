#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "censmix/errors.hpp"

namespace censmix {

// Dense LU with partial pivoting for small square systems. Row-major storage.
template <class Real>
class DenseLU {
public:
    DenseLU(int n, std::vector<Real> a) : n_(n), lu_(std::move(a)), perm_(static_cast<size_t>(n)) {
        using std::abs;
        std::iota(perm_.begin(), perm_.end(), 0);
        min_pivot_ = -1;
        sign_ = 1;
        for (int col = 0; col < n_; ++col) {
            int pivot_row = col;
            Real best = abs(at(col, col));
            for (int row = col + 1; row < n_; ++row) {
                Real v = abs(at(row, col));
                if (v > best) {
                    best = v;
                    pivot_row = row;
                }
            }
            if (pivot_row != col) {
                for (int c = 0; c < n_; ++c) std::swap(at(col, c), at(pivot_row, c));
                std::swap(perm_[static_cast<size_t>(col)], perm_[static_cast<size_t>(pivot_row)]);
                sign_ = -sign_;
            }
            if (min_pivot_ < 0 || best < min_pivot_) min_pivot_ = best;
            if (best == 0) continue;  // singular; solves will divide by zero
            const Real inv = Real(1) / at(col, col);
            for (int row = col + 1; row < n_; ++row) {
                const Real factor = at(row, col) * inv;
                at(row, col) = factor;
                for (int c = col + 1; c < n_; ++c) at(row, c) -= factor * at(col, c);
            }
        }
    }

    Real min_pivot() const { return min_pivot_; }

    std::vector<Real> solve(const std::vector<Real>& b) const {
        std::vector<Real> x(static_cast<size_t>(n_));
        for (int i = 0; i < n_; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(perm_[static_cast<size_t>(i)])];
        for (int i = 1; i < n_; ++i)
            for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= at(i, j) * x[static_cast<size_t>(j)];
        for (int i = n_ - 1; i >= 0; --i) {
            for (int j = i + 1; j < n_; ++j) x[static_cast<size_t>(i)] -= at(i, j) * x[static_cast<size_t>(j)];
            x[static_cast<size_t>(i)] /= at(i, i);
        }
        return x;
    }

    Real determinant() const {
        Real d = static_cast<Real>(sign_);
        for (int i = 0; i < n_; ++i) d *= at(i, i);
        return d;
    }

    std::vector<Real> inverse() const {
        std::vector<Real> inv(static_cast<size_t>(n_) * static_cast<size_t>(n_));
        std::vector<Real> e(static_cast<size_t>(n_), Real(0));
        for (int c = 0; c < n_; ++c) {
            e[static_cast<size_t>(c)] = 1;
            auto col = solve(e);
            e[static_cast<size_t>(c)] = 0;
            for (int r = 0; r < n_; ++r) inv[static_cast<size_t>(r) * static_cast<size_t>(n_) + static_cast<size_t>(c)] = col[static_cast<size_t>(r)];
        }
        return inv;
    }

private:
    Real& at(int r, int c) { return lu_[static_cast<size_t>(r) * static_cast<size_t>(n_) + static_cast<size_t>(c)]; }
    const Real& at(int r, int c) const { return lu_[static_cast<size_t>(r) * static_cast<size_t>(n_) + static_cast<size_t>(c)]; }

    int n_;
    std::vector<Real> lu_;
    std::vector<int> perm_;
    int sign_;
    Real min_pivot_;
};

template <class Real>
Real matrix_one_norm(int n, const std::vector<Real>& a) {
    using std::abs;
    Real best = 0;
    for (int c = 0; c < n; ++c) {
        Real col = 0;
        for (int r = 0; r < n; ++r) col += abs(a[static_cast<size_t>(r) * static_cast<size_t>(n) + static_cast<size_t>(c)]);
        if (col > best) best = col;
    }
    return best;
}

}  // namespace censmix
