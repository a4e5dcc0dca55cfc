#include "kinv/smith.hpp"
#include "kinv/abelian_group.hpp"
#include "support/generators.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <thread>

using namespace kinv;

namespace {

// Cofactor-expansion determinant, independent of the production Bareiss
// routine.
Int cofactor_det(const IntMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m(0, 0);
    Int det = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j) == 0) continue;
        IntMatrix sub(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0, cc = 0; c < n; ++c) {
                if (c == j) continue;
                sub(r - 1, cc++) = m(r, c);
            }
        Int term = m(0, j) * cofactor_det(sub);
        det += (j % 2 == 0) ? term : -term;
    }
    return det;
}

void minors_of(const IntMatrix& m, std::size_t k, std::vector<std::size_t>& rows,
               std::vector<std::size_t>& cols, std::size_t next_row, std::size_t next_col,
               Int& g) {
    if (rows.size() < k) {
        for (std::size_t r = next_row; r + (k - rows.size()) <= m.rows(); ++r) {
            rows.push_back(r);
            minors_of(m, k, rows, cols, r + 1, 0, g);
            rows.pop_back();
        }
        return;
    }
    if (cols.size() < k) {
        for (std::size_t c = next_col; c + (k - cols.size()) <= m.cols(); ++c) {
            cols.push_back(c);
            minors_of(m, k, rows, cols, next_row, c + 1, g);
            cols.pop_back();
        }
        return;
    }
    IntMatrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(rows[i], cols[j]);
    g = boost::multiprecision::gcd(g, cofactor_det(sub));
}

// gcd of all k x k minors
Int determinantal_divisor(const IntMatrix& m, std::size_t k) {
    Int g = 0;
    std::vector<std::size_t> rows, cols;
    minors_of(m, k, rows, cols, 0, 0, g);
    return boost::multiprecision::abs(g);
}

// The invariant factors are quotients of successive determinantal divisors.
// This is the oracle the SNF diagonal is frozen against.
std::vector<Int> diagonal_by_minors(const IntMatrix& m) {
    const std::size_t lim = std::min(m.rows(), m.cols());
    std::vector<Int> diag;
    Int prev = 1;
    for (std::size_t k = 1; k <= lim; ++k) {
        Int dk = determinantal_divisor(m, k);
        if (dk == 0) break;
        diag.push_back(dk / prev);
        prev = dk;
    }
    while (diag.size() < lim) diag.push_back(0);
    return diag;
}

}  // namespace

TEST_CASE("smith normal form on the worked examples") {
    SECTION("identity") {
        IntMatrix id = IntMatrix::identity(2);
        SnfResult r = smith_normal_form(id);
        REQUIRE(snf_invariants_hold(id, r));
        REQUIRE(r.d == id);
    }
    SECTION("2x2 with nontrivial chain") {
        IntMatrix m{{2, 4}, {6, 8}};
        SnfResult r = smith_normal_form(m);
        REQUIRE(snf_invariants_hold(m, r));
        REQUIRE(snf_diagonal(r) == std::vector<Int>{2, 4});
        REQUIRE(snf_diagonal(r) == diagonal_by_minors(m));
    }
    SECTION("I - E for size 3") {
        IntMatrix m{{0, -1, -1}, {-1, 0, -1}, {-1, -1, 0}};
        SnfResult r = smith_normal_form(m);
        REQUIRE(snf_invariants_hold(m, r));
        REQUIRE(snf_diagonal(r) == std::vector<Int>{1, 1, 2});
        REQUIRE(snf_diagonal(r) == diagonal_by_minors(m));
        REQUIRE(cofactor_det(m) == -2);
    }
    SECTION("empty shapes") {
        IntMatrix zero_cols(3, 0);
        SnfResult r = smith_normal_form(zero_cols);
        REQUIRE(snf_invariants_hold(zero_cols, r));
        IntMatrix zero_rows(0, 4);
        REQUIRE(snf_invariants_hold(zero_rows, smith_normal_form(zero_rows)));
        IntMatrix empty(0, 0);
        REQUIRE(snf_invariants_hold(empty, smith_normal_form(empty)));
    }
}

TEST_CASE("smith normal form invariants and minor oracle on random matrices") {
    std::mt19937_64 rng(20240817);
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    for (int trial = 0; trial < 150; ++trial) {
        IntMatrix m = testgen::random_matrix(rng, dim(rng), dim(rng), -9, 9);
        SnfResult r = smith_normal_form(m);
        CAPTURE(trial);
        REQUIRE(snf_invariants_hold(m, r));
        REQUIRE(snf_diagonal(r) == diagonal_by_minors(m));
    }
}

TEST_CASE("cokernel canonical forms") {
    SECTION("no relations") {
        REQUIRE(cokernel(IntMatrix(2, 2)) == FgAbelianGroup::free_of_rank(2));
        REQUIRE(cokernel(IntMatrix(3, 0)) == FgAbelianGroup::free_of_rank(3));
        REQUIRE(cokernel(IntMatrix(0, 0)) == FgAbelianGroup::trivial());
    }
    SECTION("worked cokernels") {
        IntMatrix m{{0, -1, -1}, {-1, 0, -1}, {-1, -1, 0}};
        REQUIRE(cokernel(m) == FgAbelianGroup::cyclic(2));
        IntMatrix r1{{0, -1}, {0, 1}};
        REQUIRE(cokernel(r1) == FgAbelianGroup::free_of_rank(1));
    }
}

TEST_CASE("kernel rank") {
    REQUIRE(kernel_rank(IntMatrix::identity(3)) == 0);
    REQUIRE(kernel_rank(IntMatrix(2, 3)) == 3);
    IntMatrix m{{0, -1}, {-1, 0}};
    REQUIRE(kernel_rank(m) == 0);
}

TEST_CASE("concurrent use of shared immutable inputs") {
    std::mt19937_64 rng(13579);
    const IntMatrix shared = testgen::random_matrix(rng, 6, 6, -9, 9);
    const SnfResult expected = smith_normal_form(shared);
    std::vector<std::thread> workers;
    std::array<bool, 8> same{};
    for (std::size_t i = 0; i < same.size(); ++i)
        workers.emplace_back([&, i] {
            SnfResult r = smith_normal_form(shared);
            same[i] = snf_invariants_hold(shared, r) && r.d == expected.d;
        });
    for (auto& w : workers) w.join();
    for (bool ok : same) REQUIRE(ok);
}

TEST_CASE("cokernel is invariant under unimodular multiplication") {
    std::mt19937_64 rng(77001);
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    for (int trial = 0; trial < 60; ++trial) {
        IntMatrix m = testgen::random_matrix(rng, dim(rng), dim(rng), -7, 7);
        IntMatrix left = testgen::random_unimodular(rng, m.rows());
        IntMatrix right = testgen::random_unimodular(rng, m.cols());
        CAPTURE(trial);
        REQUIRE(cokernel(left * m * right) == cokernel(m));
        // transpose symmetry needs a square shape: the torsion always
        // matches, but the free rank is rows - rank
        std::size_t n = dim(rng);
        IntMatrix sq = testgen::random_matrix(rng, n, n, -7, 7);
        REQUIRE(cokernel(sq.transpose()) == cokernel(sq));
    }
}
