#pragma once

#include "kinv/int_matrix.hpp"

#include <cassert>

namespace kinv {

// Smith normal form U*M*V = D with U, V unimodular and D diagonal,
// d_i >= 0, d_i | d_{i+1}, zeros trailing. U and V are not unique; only the
// three invariants above are contractual.
struct SnfResult {
    IntMatrix u;  // m x m
    IntMatrix d;  // m x n diagonal
    IntMatrix v;  // n x n
};

inline std::vector<Int> snf_diagonal(const SnfResult& r) {
    const std::size_t k = r.d.rows() < r.d.cols() ? r.d.rows() : r.d.cols();
    std::vector<Int> diag(k);
    for (std::size_t i = 0; i < k; ++i) diag[i] = r.d(i, i);
    return diag;
}

// Full contract check against the original matrix. Asserted on every
// smith_normal_form call in builds with assertions enabled, and exercised
// directly by the test suites.
inline bool snf_invariants_hold(const IntMatrix& input, const SnfResult& r) {
    using boost::multiprecision::abs;
    if (r.u * input * r.v != r.d) return false;
    if (abs(determinant(r.u)) != 1) return false;
    if (abs(determinant(r.v)) != 1) return false;
    auto diag = snf_diagonal(r);
    for (std::size_t i = 0; i < diag.size(); ++i) {
        if (diag[i] < 0) return false;
        if (i + 1 < diag.size()) {
            if (diag[i] == 0 && diag[i + 1] != 0) return false;
            if (diag[i] != 0 && diag[i + 1] % diag[i] != 0) return false;
        }
    }
    for (std::size_t i = 0; i < r.d.rows(); ++i)
        for (std::size_t j = 0; j < r.d.cols(); ++j)
            if (i != j && r.d(i, j) != 0) return false;
    return true;
}

namespace detail {

inline void row_sub(IntMatrix& m, std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) -= q * m(src, j);
}

inline void col_sub(IntMatrix& m, std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) -= q * m(i, src);
}

inline void row_swap(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

inline void col_swap(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// Diagonalization by repeated reduction around a minimal-absolute-value
// pivot. Choosing the smallest pivot each pass keeps intermediate entries
// from blowing up; correctness does not depend on the choice.
inline SnfResult smith_reduce(const IntMatrix& input) {
    using boost::multiprecision::abs;
    const std::size_t m = input.rows(), n = input.cols();
    SnfResult r{IntMatrix::identity(m), input, IntMatrix::identity(n)};
    IntMatrix& d = r.d;
    const std::size_t steps = m < n ? m : n;

    for (std::size_t t = 0; t < steps; ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing submatrix
            std::size_t pi = t, pj = t;
            bool found = false;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    if (d(i, j) == 0) continue;
                    if (!found || abs(d(i, j)) < abs(d(pi, pj))) {
                        pi = i;
                        pj = j;
                        found = true;
                    }
                }
            if (!found) return r;  // rest is zero; trailing diagonal stays 0
            row_swap(d, t, pi);
            row_swap(r.u, t, pi);
            col_swap(d, t, pj);
            col_swap(r.v, t, pj);

            bool dirty = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (d(i, t) == 0) continue;
                Int q = d(i, t) / d(t, t);
                row_sub(d, i, t, q);
                row_sub(r.u, i, t, q);
                if (d(i, t) != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (d(t, j) == 0) continue;
                Int q = d(t, j) / d(t, t);
                col_sub(d, j, t, q);
                col_sub(r.v, j, t, q);
                if (d(t, j) != 0) dirty = true;
            }
            if (dirty) continue;

            // pivot is lone; force it to divide the rest of the submatrix
            bool fixed = false;
            for (std::size_t i = t + 1; i < m && !fixed; ++i)
                for (std::size_t j = t + 1; j < n && !fixed; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        row_sub(d, t, i, Int(-1));
                        row_sub(r.u, t, i, Int(-1));
                        fixed = true;
                    }
            if (!fixed) break;
        }
        if (d(t, t) < 0) {
            for (std::size_t j = 0; j < n; ++j) d(t, j) = -d(t, j);
            for (std::size_t j = 0; j < m; ++j) r.u(t, j) = -r.u(t, j);
        }
    }
    return r;
}

}  // namespace detail

inline SnfResult smith_normal_form(const IntMatrix& input) {
    SnfResult r = detail::smith_reduce(input);
    assert(snf_invariants_hold(input, r));
    return r;
}

inline std::size_t matrix_rank(const IntMatrix& m) {
    auto diag = snf_diagonal(smith_normal_form(m));
    std::size_t rank = 0;
    for (const Int& d : diag)
        if (d != 0) ++rank;
    return rank;
}

// Rank of the integer solution lattice {v : M v = 0}.
inline std::size_t kernel_rank(const IntMatrix& m) { return m.cols() - matrix_rank(m); }

}  // namespace kinv
