#pragma once

#include "kinv/abelian_group.hpp"

#include <algorithm>
#include <map>

namespace kinv {

// Multiset of prime-power exponents of the p-primary part of a group,
// stored as exponent -> multiplicity.
struct ExponentMultiset {
    Int prime;
    std::map<unsigned, unsigned> exponents;

    bool operator==(const ExponentMultiset&) const = default;

    static ExponentMultiset empty(const Int& p) { return {p, {}}; }

    bool is_empty() const { return exponents.empty(); }

    std::size_t size() const {
        std::size_t n = 0;
        for (auto& [e, m] : exponents) n += m;
        return n;
    }

    // exponents with multiplicity, largest first
    std::vector<unsigned> descending() const {
        std::vector<unsigned> out;
        out.reserve(size());
        for (auto it = exponents.rbegin(); it != exponents.rend(); ++it)
            out.insert(out.end(), it->second, it->first);
        return out;
    }
};

struct PrimaryDecomposition {
    std::size_t free_rank = 0;
    std::map<Int, ExponentMultiset> parts;  // only primes with nonzero part

    bool operator==(const PrimaryDecomposition&) const = default;
};

inline std::map<Int, unsigned> factor_integer(Int n) {
    if (n < 1) throw std::invalid_argument("factor_integer: argument must be positive");
    std::map<Int, unsigned> f;
    for (Int p = 2; p * p <= n; p == 2 ? ++p : p += 2)
        while (n % p == 0) {
            ++f[p];
            n /= p;
        }
    if (n > 1) ++f[n];
    return f;
}

inline PrimaryDecomposition primary_decomposition(const FgAbelianGroup& g) {
    PrimaryDecomposition pd;
    pd.free_rank = g.free_rank;
    for (const Int& d : g.invariant_factors)
        for (auto& [p, e] : factor_integer(d)) {
            auto it = pd.parts.find(p);
            if (it == pd.parts.end()) it = pd.parts.emplace(p, ExponentMultiset::empty(p)).first;
            ++it->second.exponents[e];
        }
    return pd;
}

// Inverse of primary_decomposition: the j-th largest invariant factor takes
// the j-th largest exponent of every prime.
inline FgAbelianGroup group_from_primary(const PrimaryDecomposition& pd) {
    using boost::multiprecision::pow;
    std::size_t chain = 0;
    std::map<Int, std::vector<unsigned>> desc;
    for (auto& [p, part] : pd.parts) {
        auto v = part.descending();
        if (v.empty()) continue;
        chain = std::max(chain, v.size());
        desc.emplace(p, std::move(v));
    }
    std::vector<Int> factors(chain, Int(1));
    for (auto& [p, v] : desc)
        for (std::size_t j = 0; j < v.size(); ++j) factors[j] *= pow(p, v[j]);
    std::reverse(factors.begin(), factors.end());
    return {pd.free_rank, std::move(factors)};
}

// The maximal common sub-multiset: keeping min(a, b) copies of each exponent
// is the unique choice for which the two leftovers share no exponent.
inline ExponentMultiset multiset_intersection(const ExponentMultiset& a,
                                              const ExponentMultiset& b) {
    if (a.prime != b.prime)
        throw std::invalid_argument("multiset_intersection: primes differ");
    ExponentMultiset r = ExponentMultiset::empty(a.prime);
    for (auto& [e, m] : a.exponents) {
        auto it = b.exponents.find(e);
        if (it == b.exponents.end()) continue;
        r.exponents[e] = std::min(m, it->second);
    }
    return r;
}

inline ExponentMultiset multiset_difference(const ExponentMultiset& a,
                                            const ExponentMultiset& b) {
    if (a.prime != b.prime)
        throw std::invalid_argument("multiset_difference: primes differ");
    ExponentMultiset r = ExponentMultiset::empty(a.prime);
    for (auto& [e, m] : a.exponents) {
        auto it = b.exponents.find(e);
        unsigned keep = (it == b.exponents.end()) ? m : (m > it->second ? m - it->second : 0);
        if (keep) r.exponents[e] = keep;
    }
    return r;
}

inline ExponentMultiset multiset_disjoint_union(const ExponentMultiset& a,
                                                const ExponentMultiset& b) {
    if (a.prime != b.prime)
        throw std::invalid_argument("multiset_disjoint_union: primes differ");
    ExponentMultiset r = a;
    for (auto& [e, m] : b.exponents) r.exponents[e] += m;
    return r;
}

// Condition on a pair of p-parts: equal, or the leftovers after removing the
// common part interleave strictly as b_1 > a_1 > b_2 > a_2 > ... where the
// a_i come from the first argument and the b_i from the second.
inline bool satisfies_double_star(const ExponentMultiset& gp, const ExponentMultiset& hp) {
    if (gp.prime != hp.prime)
        throw std::invalid_argument("satisfies_double_star: primes differ");
    if (gp.exponents == hp.exponents) return true;
    ExponentMultiset common = multiset_intersection(gp, hp);
    std::vector<unsigned> a = multiset_difference(gp, common).descending();
    std::vector<unsigned> b = multiset_difference(hp, common).descending();
    if (b.size() != a.size() && b.size() != a.size() + 1) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(b[i] > a[i])) return false;
        if (i + 1 < b.size() && !(a[i] > b[i + 1])) return false;
    }
    return true;
}

// Exponents occurring an odd number of times, largest first.
inline std::vector<unsigned> odd_multiplicity_set(const ExponentMultiset& d) {
    std::vector<unsigned> out;
    for (auto it = d.exponents.rbegin(); it != d.exponents.rend(); ++it)
        if (it->second % 2 == 1) out.push_back(it->first);
    return out;
}

// Necessary conditions for Q to be the quotient of G by a single element of
// torsion type w: the rank drops by w, and every pair of p-parts interleaves
// the right way around. Necessity only; exists_quotient_element is the
// ground truth for realizability.
inline bool validate_quotient_shape(const FgAbelianGroup& g, const FgAbelianGroup& q, int w) {
    if (w != 0 && w != 1) throw std::invalid_argument("validate_quotient_shape: w must be 0 or 1");
    if (g.free_rank < static_cast<std::size_t>(w)) return false;
    if (q.free_rank != g.free_rank - static_cast<std::size_t>(w)) return false;
    PrimaryDecomposition gd = primary_decomposition(g);
    PrimaryDecomposition qd = primary_decomposition(q);
    std::vector<Int> primes;
    for (auto& [p, part] : gd.parts) primes.push_back(p);
    for (auto& [p, part] : qd.parts)
        if (!gd.parts.count(p)) primes.push_back(p);
    for (const Int& p : primes) {
        auto git = gd.parts.find(p);
        auto qit = qd.parts.find(p);
        const ExponentMultiset gp = git == gd.parts.end() ? ExponentMultiset::empty(p) : git->second;
        const ExponentMultiset qp = qit == qd.parts.end() ? ExponentMultiset::empty(p) : qit->second;
        bool ok = (w == 0) ? satisfies_double_star(qp, gp) : satisfies_double_star(gp, qp);
        if (!ok) return false;
    }
    return true;
}

// Thrown when a group is not of the form G + (G/Zg).
struct NotRecoverableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Recovers (G, G/Zg) from their direct sum D.
//   Step 1: rank(G) from rank(D), with w = rank(D) mod 2.
//   Step 2: per prime, the odd-multiplicity exponents b_1 > a_1 > b_2 > ...
//   Step 3: w = 1 hands the b_i to the quotient, w = 0 hands them to G.
//   Step 4: the rest splits evenly; half is shared by both parts.
inline std::pair<FgAbelianGroup, FgAbelianGroup> recover_pair(const FgAbelianGroup& d) {
    const std::size_t rank_d = d.free_rank;
    const int w = static_cast<int>(rank_d % 2);
    const std::size_t rank_g = (rank_d + static_cast<std::size_t>(w)) / 2;

    PrimaryDecomposition dd = primary_decomposition(d);
    PrimaryDecomposition gd{rank_g, {}}, qd{rank_d - rank_g, {}};
    for (auto& [p, part] : dd.parts) {
        std::vector<unsigned> odd = odd_multiplicity_set(part);
        ExponentMultiset bs = ExponentMultiset::empty(p), as = ExponentMultiset::empty(p);
        for (std::size_t i = 0; i < odd.size(); ++i) ++((i % 2 == 0) ? bs : as).exponents[odd[i]];

        ExponentMultiset shared = ExponentMultiset::empty(p);
        for (auto& [e, mult] : part.exponents) {
            unsigned rest = mult - (mult % 2 == 1 ? 1 : 0);
            if (rest % 2 != 0)
                throw NotRecoverableError("leftover exponents do not split into two equal halves");
            if (rest) shared.exponents[e] = rest / 2;
        }
        ExponentMultiset gp = multiset_disjoint_union(shared, w == 1 ? as : bs);
        ExponentMultiset qp = multiset_disjoint_union(shared, w == 1 ? bs : as);
        if (!gp.is_empty()) gd.parts.emplace(p, std::move(gp));
        if (!qp.is_empty()) qd.parts.emplace(p, std::move(qp));
    }
    FgAbelianGroup g = group_from_primary(gd);
    FgAbelianGroup q = group_from_primary(qd);
    if (!validate_quotient_shape(g, q, w))
        throw NotRecoverableError("reassembled pair is not a valid (group, quotient) shape");
    assert(direct_sum(g, q) == d);
    return {g, q};
}

// Visits torsion elements of g (free coordinates zero) until the visitor
// returns true. Returns whether a visit stopped the scan.
template <typename F>
bool for_each_torsion_element(const FgAbelianGroup& g, F&& visit) {
    std::vector<Int> coords(g.coordinate_count(), Int(0));
    const std::size_t k = g.torsion_count();
    for (;;) {
        if (visit(static_cast<const std::vector<Int>&>(coords))) return true;
        std::size_t j = 0;
        for (; j < k; ++j) {
            Int& c = coords[g.free_rank + j];
            if (++c < g.invariant_factors[j]) break;
            c = 0;
        }
        if (j == k) return false;
    }
}

inline std::vector<Int> divisors_of(const Int& n) {
    std::vector<Int> divs{1};
    for (auto& [p, e] : factor_integer(n)) {
        const std::size_t base = divs.size();
        Int power = 1;
        for (unsigned i = 1; i <= e; ++i) {
            power *= p;
            for (std::size_t d = 0; d < base; ++d) divs.push_back(divs[d] * power);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

// Visits one torsion element per diagonal-unit orbit: a unit u_j acting on
// the j-th cyclic summand carries any coordinate to its gcd with the order,
// so tuples of divisors (the order itself standing for zero) reach every
// orbit. Quotients by orbit-equivalent elements are isomorphic, which makes
// this scan sufficient wherever only the quotient matters.
template <typename F>
bool for_each_torsion_element_up_to_units(const FgAbelianGroup& g, F&& visit) {
    const std::size_t k = g.torsion_count();
    std::vector<std::vector<Int>> divisor_lists(k);
    for (std::size_t j = 0; j < k; ++j)
        divisor_lists[j] = divisors_of(g.invariant_factors[j]);
    std::vector<std::size_t> pick(k, 0);
    std::vector<Int> coords(g.coordinate_count(), Int(0));
    for (;;) {
        for (std::size_t j = 0; j < k; ++j)
            coords[g.free_rank + j] =
                divisor_lists[j][pick[j]] % g.invariant_factors[j];  // d -> 0
        if (visit(static_cast<const std::vector<Int>&>(coords))) return true;
        std::size_t j = 0;
        for (; j < k; ++j) {
            if (++pick[j] < divisor_lists[j].size()) break;
            pick[j] = 0;
        }
        if (j == k) return false;
    }
}

// Searches for g in G with G/Zg isomorphic to Q; returns canonical
// coordinates of one witness. Up to automorphisms of G every element is
// m*e_1 + t with m >= 0 the content of the free part and t a torsion tuple
// of divisors (diagonal units fix m*e_1 and reduce each torsion coordinate
// to its gcd with the order). A witness with m >= 1 quotients the free
// summand onto torsion of order m * |Tor(G)|, so at most one free content
// can work; this refines the a priori bound m <= |Tor(Q)|.
inline std::optional<std::vector<Int>> exists_quotient_element(const FgAbelianGroup& g,
                                                               const FgAbelianGroup& q) {
    std::optional<std::vector<Int>> found;
    auto search = [&](const Int& m) {
        for_each_torsion_element_up_to_units(g, [&](const std::vector<Int>& t) {
            std::vector<Int> cand = t;
            if (g.free_rank > 0) cand[0] = m;
            if (quotient_canonical(g, cand) == q) {
                found = std::move(cand);
                return true;
            }
            return false;
        });
    };
    if (q.free_rank == g.free_rank) {
        search(0);
    } else if (q.free_rank + 1 == g.free_rank) {
        Int tq = q.torsion_order(), tg = g.torsion_order();
        if (tq % tg == 0) search(tq / tg);
    }
    return found;
}

}  // namespace kinv
