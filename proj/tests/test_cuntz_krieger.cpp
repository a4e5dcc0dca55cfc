#include "kinv/cuntz_krieger.hpp"
#include "support/generators.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace kinv;

namespace {

IntMatrix all_ones(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = 1;
    return m;
}

KTriple cuntz_data(unsigned n) {
    FgAbelianGroup k0 = FgAbelianGroup::cyclic(n - 1);
    std::vector<Int> unit(k0.coordinate_count(), Int(1));
    return KTriple(std::move(k0), std::move(unit), FgAbelianGroup::trivial());
}

}  // namespace

TEST_CASE("defining-matrix validation") {
    SECTION("all-ones matrices are valid") {
        for (std::size_t n = 2; n <= 6; ++n) REQUIRE(ck::validate(all_ones(n)).size() == n);
    }
    SECTION("permutation matrices are rejected before reducibility") {
        try {
            ck::validate(IntMatrix::identity(2));
            FAIL("expected a validation error");
        } catch (const ck::ValidationError& e) {
            REQUIRE(e.kind() == ck::ValidationError::Kind::Permutation);
        }
        REQUIRE_THROWS_AS(ck::validate(IntMatrix{{1}}), ck::ValidationError);
    }
    SECTION("reducible matrix with a witness") {
        try {
            ck::validate(IntMatrix{{1, 1}, {0, 1}});
            FAIL("expected a validation error");
        } catch (const ck::ValidationError& e) {
            REQUIRE(e.kind() == ck::ValidationError::Kind::Reducible);
            REQUIRE(e.row() == 2);
            REQUIRE(e.col() == 1);
        }
        // a single vertex without its loop has no length-one path to itself
        try {
            ck::validate(IntMatrix{{0}});
            FAIL("expected a validation error");
        } catch (const ck::ValidationError& e) {
            REQUIRE(e.kind() == ck::ValidationError::Kind::Reducible);
        }
    }
    SECTION("shape and entry errors") {
        try {
            ck::validate(IntMatrix(2, 3));
            FAIL("expected a validation error");
        } catch (const ck::ValidationError& e) {
            REQUIRE(e.kind() == ck::ValidationError::Kind::NotSquare);
        }
        try {
            ck::validate(IntMatrix{{1, 2}, {1, 1}});
            FAIL("expected a validation error");
        } catch (const ck::ValidationError& e) {
            REQUIRE(e.kind() == ck::ValidationError::Kind::BadEntry);
            REQUIRE(e.row() == 1);
            REQUIRE(e.col() == 2);
        }
    }
}

TEST_CASE("companion matrix") {
    SECTION("all-ones collapses to the first-row matrix") {
        for (std::size_t n = 2; n <= 5; ++n) {
            IntMatrix h = ck::a_hat(ck::validate(all_ones(n)));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) REQUIRE(h(i, j) == (i == 0 ? 1 : 0));
        }
    }
    SECTION("entrywise formula") {
        IntMatrix h = ck::a_hat(ck::validate(IntMatrix{{1, 1}, {1, 0}}));
        REQUIRE(h == IntMatrix{{1, 1}, {0, -1}});
    }
    SECTION("all-ones first column") {
        std::mt19937_64 rng(4242);
        for (int trial = 0; trial < 30; ++trial) {
            ck::CKMatrix a = testgen::random_ck_matrix(rng, 5);
            IntMatrix forced = a.entries();
            for (std::size_t i = 0; i < a.size(); ++i) forced(i, 0) = 1;
            ck::CKMatrix b = ck::validate(forced);  // still irreducible: column one is full
            IntMatrix h = ck::a_hat(b);
            for (std::size_t i = 0; i < b.size(); ++i)
                for (std::size_t j = 0; j < b.size(); ++j)
                    REQUIRE(h(i, j) == forced(i, j) + (i == 0 ? 1 : 0) - 1);
        }
    }
}

TEST_CASE("K-data of defining matrices") {
    SECTION("all-ones realizes the Cuntz algebra data") {
        for (unsigned n = 2; n <= 8; ++n) {
            KTriple t = ck::k_triple(ck::validate(all_ones(n)));
            REQUIRE(iso_triple(t, cuntz_data(n)));
            REQUIRE(t.k0 == FgAbelianGroup::cyclic(n - 1));
            REQUIRE(t.k1 == FgAbelianGroup::trivial());
        }
    }
    SECTION("a matrix with trivial K-theory") {
        KTriple t = ck::k_triple(ck::validate(IntMatrix{{1, 1}, {1, 0}}));
        REQUIRE(t.k0 == FgAbelianGroup::trivial());
        REQUIRE(t.k1 == FgAbelianGroup::trivial());
    }
}

TEST_CASE("extension groups through the matrix route") {
    auto e2 = ck::validate(all_ones(2));
    auto e3 = ck::validate(all_ones(3));
    SECTION("weak") {
        REQUIRE(ck::ext_weak1_matrix(e2) == FgAbelianGroup::trivial());
        REQUIRE(ck::ext_weak1_matrix(e3) == FgAbelianGroup::cyclic(2));
        for (unsigned n = 2; n <= 8; ++n)
            REQUIRE(ck::ext_weak1_matrix(ck::validate(all_ones(n))) ==
                    FgAbelianGroup::cyclic(n - 1));
    }
    SECTION("strong") {
        for (unsigned n = 2; n <= 8; ++n)
            REQUIRE(ck::ext_strong1_matrix(ck::validate(all_ones(n))) ==
                    FgAbelianGroup::free_of_rank(1));
        REQUIRE(ck::ext_strong1_matrix(ck::validate(IntMatrix{{1, 1}, {1, 0}})) ==
                FgAbelianGroup::free_of_rank(1));
    }
    SECTION("total") {
        REQUIRE(ck::total_ext1_matrix(e2) == FgAbelianGroup::free_of_rank(1));
        REQUIRE(ck::total_ext1_matrix(e3) == FgAbelianGroup{1, {2}});
    }
}

TEST_CASE("matrix and formula routes agree on a random corpus") {
    std::mt19937_64 rng(99173);
    for (int trial = 0; trial < 200; ++trial) {
        ck::CKMatrix a = testgen::random_ck_matrix(rng, 6);
        KTriple t = ck::k_triple(a);
        CAPTURE(trial);

        // defining matrices always land at chi = 0 with free K_1
        REQUIRE(chi(t) == 0);
        REQUIRE(t.k1.invariant_factors.empty());

        ExtData e = ext_data(t);
        REQUIRE(ck::ext_weak1_matrix(a) == e.ext_w1);
        REQUIRE(ck::ext_weak1_matrix(a) == t.k0.torsion().plus_free(t.k1.free_rank));
        REQUIRE(ck::ext_strong1_matrix(a) == e.ext_s1);
        REQUIRE(ck::total_ext1_matrix(a) ==
                direct_sum(ck::ext_strong1_matrix(a), ck::ext_weak1_matrix(a)));
        REQUIRE(e.ext_w0.invariant_factors.empty());
        // the strong/weak pair always lies in the admissible matrix range
        REQUIRE(ck_ext_range_check(e.ext_s1, e.ext_w1));
    }
}

TEST_CASE("single-cokernel isomorphism decision") {
    auto e2 = ck::validate(all_ones(2));
    auto e3 = ck::validate(all_ones(3));
    REQUIRE(ck::iso_ck(e2, e2));
    REQUIRE_FALSE(ck::iso_ck(e2, e3));

    std::mt19937_64 rng(55211);
    std::vector<ck::CKMatrix> corpus;
    for (int i = 0; i < 14; ++i) corpus.push_back(testgen::random_ck_matrix(rng, 5));
    SECTION("agreement with the triple decider") {
        for (std::size_t i = 0; i < corpus.size(); ++i)
            for (std::size_t j = i; j < corpus.size(); ++j) {
                CAPTURE(i, j);
                REQUIRE(ck::iso_ck(corpus[i], corpus[j]) ==
                        iso_triple(ck::k_triple(corpus[i]), ck::k_triple(corpus[j])));
            }
    }
    SECTION("invariance under vertex relabeling") {
        for (const auto& a : corpus) {
            IntMatrix p = testgen::random_permutation_matrix(rng, a.size());
            IntMatrix conj = p * a.entries() * p.transpose();
            REQUIRE(ck::iso_ck(a, ck::validate(conj)));
        }
    }
}
