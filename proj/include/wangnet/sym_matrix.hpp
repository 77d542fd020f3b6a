#pragma once
// Structured symmetric matrices and the determinant routes used on them.
//
// A structured matrix stores, for each unordered pair (i, j), an off-diagonal
// polynomial, and for each row an extra diagonal polynomial.  The realized
// numeric matrix is
//
//   A[i][j] = -offdiag(i, j)                       for i != j
//   A[i][i] =  diag_extra(i) + sum_j offdiag(i, j)
//
// With that sign convention the determinant expands with all coefficients +1,
// so it can be computed entirely inside the Wang algebra as the product of
// the row sums  diag_extra(i) + sum_j offdiag(i, j)  and then evaluated
// numerically, term by term, with no signs to track.

#include <cstdint>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wangnet/wang_algebra.hpp"

namespace wangnet {

class StructuredSymMatrix {
  public:
    explicit StructuredSymMatrix(std::size_t n) : n_(n), extra_(n) {}

    std::size_t size() const { return n_; }

    /// Accumulates a symbol into the off-diagonal pair (i, j), mod 2.
    void add_offdiag(std::size_t i, std::size_t j, Symbol s) {
        off_[key(i, j)] += WangPoly::term(s);
    }

    void add_diag_extra(std::size_t i, Symbol s) {
        check_row(i);
        extra_[i] += WangPoly::term(s);
    }

    void add_diag_extra(std::size_t i, const WangPoly& p) {
        check_row(i);
        extra_[i] += p;
    }

    const WangPoly& offdiag(std::size_t i, std::size_t j) const {
        static const WangPoly kZero;
        auto it = off_.find(key(i, j));
        return it == off_.end() ? kZero : it->second;
    }

    const WangPoly& diag_extra(std::size_t i) const {
        check_row(i);
        return extra_[i];
    }

    /// Linear form of row i: diag_extra(i) + sum over j != i of offdiag(i, j).
    WangPoly row_sum(std::size_t i) const {
        check_row(i);
        WangPoly sum = extra_[i];
        for (const auto& [k, p] : off_)
            if (k.first == i || k.second == i)
                sum += p;
        return sum;
    }

    /// Copy with one row (and the matching column) removed.  Matrix entries
    /// of the submatrix are unchanged, so the symbols a surviving row shared
    /// with the removed one migrate into its diagonal extra (the implied
    /// diagonal A[i][i] = extra + row off-diagonal sum must not shrink).
    StructuredSymMatrix without(std::size_t row) const {
        check_row(row);
        StructuredSymMatrix out(n_ - 1);
        auto shift = [row](std::size_t i) { return i < row ? i : i - 1; };
        for (std::size_t i = 0; i < n_; ++i)
            if (i != row)
                out.extra_[shift(i)] = extra_[i];
        for (const auto& [k, p] : off_) {
            if (k.first == row)
                out.extra_[shift(k.second)] += p;
            else if (k.second == row)
                out.extra_[shift(k.first)] += p;
            else
                out.off_[std::pair{shift(k.first), shift(k.second)}] = p;
        }
        return out;
    }

  private:
    std::pair<std::size_t, std::size_t> key(std::size_t i, std::size_t j) const {
        check_row(i);
        check_row(j);
        if (i == j)
            throw std::invalid_argument("off-diagonal entry requires i != j");
        return i < j ? std::pair{i, j} : std::pair{j, i};
    }

    void check_row(std::size_t i) const {
        if (i >= n_)
            throw std::out_of_range("matrix index " + std::to_string(i) +
                                    " out of range for size " + std::to_string(n_));
    }

    std::size_t n_;
    std::map<std::pair<std::size_t, std::size_t>, WangPoly> off_;
    std::vector<WangPoly> extra_;
};

struct WangDetStats {
    WangPoly det;
    // Number of monomial products formed by distributing the row sums before
    // any cancellation, i.e. the product of the rows' term counts.
    std::size_t raw_products = 1;
};

/// Determinant as the Wang product of the row sums, with the pre-cancellation
/// product count alongside.
inline WangDetStats wang_det_stats(const StructuredSymMatrix& m) {
    WangDetStats out;
    std::vector<WangPoly> rows;
    rows.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        rows.push_back(m.row_sum(i));
        out.raw_products *= rows.back().term_count();
    }
    out.det = wang_product(rows);
    return out;
}

inline WangPoly wang_det(const StructuredSymMatrix& m) {
    return wang_det_stats(m).det;
}

/// Dense numeric matrix over an arbitrary arithmetic type.
template <class T>
class NumericMatrix {
  public:
    explicit NumericMatrix(std::size_t n) : n_(n), data_(n * n, T{}) {}

    std::size_t size() const { return n_; }

    T& at(std::size_t i, std::size_t j) {
        check(i, j);
        return data_[i * n_ + j];
    }

    const T& at(std::size_t i, std::size_t j) const {
        check(i, j);
        return data_[i * n_ + j];
    }

  private:
    void check(std::size_t i, std::size_t j) const {
        if (i >= n_ || j >= n_)
            throw std::out_of_range("matrix index out of range");
    }

    std::size_t n_;
    std::vector<T> data_;
};

/// Determinant by signed permutation expansion.  Exact for integer types and
/// free of elimination round-off, but factorial in n: refuses n > 9.
template <class T>
T leibniz_det(const NumericMatrix<T>& a) {
    const std::size_t n = a.size();
    if (n > 9)
        throw std::invalid_argument("leibniz_det supports matrices up to 9x9");
    if (n == 0)
        return T{1};
    std::vector<bool> used(n, false);
    T total{};
    // Depth-first enumeration of permutations.  Assigning row `row` to column
    // `col` adds (row - #used columns below col) inversions, which drives the
    // sign of the term being built up.
    auto expand = [&](auto&& self, std::size_t row, T prod, int sign) -> void {
        if (row == n) {
            total += sign > 0 ? prod : -prod;
            return;
        }
        std::size_t preceding_used = 0;
        for (std::size_t col = 0; col < n; ++col) {
            if (used[col]) {
                ++preceding_used;
                continue;
            }
            T next = prod * a.at(row, col);
            if (next != T{}) {
                used[col] = true;
                self(self, row + 1, next,
                     (row - preceding_used) % 2 ? -sign : sign);
                used[col] = false;
            }
        }
    };
    expand(expand, 0, T{1}, +1);
    return total;
}

/// Exact integer determinant by fraction-free (Bareiss) elimination; every
/// division in the schedule is exact.  Used as the independent elimination
/// route against the permutation expansion, and for tree counts.
inline std::int64_t bareiss_det(NumericMatrix<std::int64_t> a) {
    const std::size_t n = a.size();
    if (n == 0)
        return 1;
    std::int64_t sign = 1;
    std::int64_t prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && a.at(swap_row, k) == 0)
                ++swap_row;
            if (swap_row == n)
                return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a.at(k, j), a.at(swap_row, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

/// Realizes the structured matrix numerically under `value_of(Symbol) -> T`,
/// following the sign convention documented at the top of this header.
template <class T, class ValueOf>
NumericMatrix<T> instantiate(const StructuredSymMatrix& m, ValueOf&& value_of) {
    const std::size_t n = m.size();
    NumericMatrix<T> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        T diag = m.diag_extra(i).template evaluate_with(value_of);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            T v = m.offdiag(i, j).template evaluate_with(value_of);
            a.at(i, j) = -v;
            diag += v;
        }
        a.at(i, i) = diag;
    }
    return a;
}

/// Determinant via the Wang route: expand symbolically, then substitute.
inline std::complex<double>
numeric_det_via_wang(const StructuredSymMatrix& m,
                     const std::map<Symbol, std::complex<double>>& assignment) {
    return wang_det(m).evaluate(assignment);
}

template <class ValueOf>
auto numeric_det_via_wang_with(const StructuredSymMatrix& m, ValueOf&& value_of) {
    return wang_det(m).evaluate_with(value_of);
}

}  // namespace wangnet
