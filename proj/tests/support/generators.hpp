// Seeded random generators shared by the property suites.
#pragma once

#include "kinv/cuntz_krieger.hpp"
#include "kinv/ktriple.hpp"

#include <numeric>
#include <random>

namespace kinv {
namespace testgen {

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                               int lo, int hi) {
    std::uniform_int_distribution<int> entry(lo, hi);
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = entry(rng);
    return m;
}

// Product of elementary row operations applied to the identity; the
// determinant stays +-1 throughout.
inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int ops = 12) {
    IntMatrix u = IntMatrix::identity(n);
    if (n < 1) return u;
    std::uniform_int_distribution<std::size_t> row(0, n - 1);
    std::uniform_int_distribution<int> kind(0, 2), shear(-3, 3);
    for (int k = 0; k < ops; ++k) {
        std::size_t i = row(rng), j = row(rng);
        switch (kind(rng)) {
        case 0:
            if (i != j)
                for (std::size_t c = 0; c < n; ++c) std::swap(u(i, c), u(j, c));
            break;
        case 1:
            for (std::size_t c = 0; c < n; ++c) u(i, c) = -u(i, c);
            break;
        default:
            if (i != j) {
                Int f = shear(rng);
                for (std::size_t c = 0; c < n; ++c) u(i, c) += f * u(j, c);
            }
        }
    }
    return u;
}

inline FgAbelianGroup random_group(std::mt19937_64& rng,
                                   const std::vector<FgAbelianGroup>& torsion_pool,
                                   std::size_t max_rank) {
    std::uniform_int_distribution<std::size_t> rank(0, max_rank);
    std::uniform_int_distribution<std::size_t> pick(0, torsion_pool.size() - 1);
    return torsion_pool[pick(rng)].plus_free(rank(rng));
}

inline std::vector<Int> random_element(std::mt19937_64& rng, const FgAbelianGroup& g, int box) {
    std::uniform_int_distribution<int> free_coord(-box, box);
    std::vector<Int> coords(g.coordinate_count());
    for (std::size_t i = 0; i < g.free_rank; ++i) coords[i] = free_coord(rng);
    for (std::size_t j = 0; j < g.torsion_count(); ++j) {
        std::uniform_int_distribution<long long> res(
            0, g.invariant_factors[j].convert_to<long long>() - 1);
        coords[g.free_rank + j] = res(rng);
    }
    return coords;
}

inline KTriple random_triple(std::mt19937_64& rng,
                             const std::vector<FgAbelianGroup>& torsion_pool,
                             std::size_t max_rank, int box) {
    FgAbelianGroup k0 = random_group(rng, torsion_pool, max_rank);
    std::vector<Int> unit = random_element(rng, k0, box);
    FgAbelianGroup k1 = random_group(rng, torsion_pool, max_rank);
    return KTriple(std::move(k0), std::move(unit), std::move(k1));
}

// Rejection sampling over {0,1} matrices until one passes validation.
inline ck::CKMatrix random_ck_matrix(std::mt19937_64& rng, std::size_t max_n) {
    std::uniform_int_distribution<std::size_t> size(1, max_n);
    std::bernoulli_distribution edge(0.55);
    for (;;) {
        std::size_t n = size(rng);
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = edge(rng) ? 1 : 0;
        try {
            return ck::validate(m);
        } catch (const ck::ValidationError&) {
        }
    }
}

inline IntMatrix random_permutation_matrix(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    IntMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) p(i, perm[i]) = 1;
    return p;
}

}  // namespace testgen
}  // namespace kinv
