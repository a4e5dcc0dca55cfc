#pragma once

#include "kinv/smith.hpp"

#include <optional>
#include <sstream>
#include <string>

namespace kinv {

// Canonical form of a finitely generated abelian group:
//   Z^free_rank  +  Z/d_1 + ... + Z/d_k,   2 <= d_1 | d_2 | ... | d_k.
// Two groups are isomorphic exactly when their canonical forms are equal.
struct FgAbelianGroup {
    std::size_t free_rank = 0;
    std::vector<Int> invariant_factors;  // ascending divisibility chain, each >= 2

    bool operator==(const FgAbelianGroup&) const = default;

    static FgAbelianGroup trivial() { return {}; }
    static FgAbelianGroup free_of_rank(std::size_t r) { return {r, {}}; }
    static FgAbelianGroup cyclic(const Int& d) {
        if (d < 1) throw std::invalid_argument("cyclic: order must be positive");
        if (d == 1) return {};
        return {0, {d}};
    }

    bool is_trivial() const { return free_rank == 0 && invariant_factors.empty(); }
    std::size_t rank() const { return free_rank; }
    std::size_t torsion_count() const { return invariant_factors.size(); }
    std::size_t coordinate_count() const { return free_rank + invariant_factors.size(); }

    FgAbelianGroup torsion() const { return {0, invariant_factors}; }

    Int torsion_order() const {
        Int o = 1;
        for (const Int& d : invariant_factors) o *= d;
        return o;
    }

    FgAbelianGroup plus_free(std::size_t extra) const {
        return {free_rank + extra, invariant_factors};
    }

    std::string to_string() const {
        if (is_trivial()) return "0";
        std::ostringstream os;
        bool first = true;
        if (free_rank == 1) {
            os << "Z";
            first = false;
        } else if (free_rank > 1) {
            os << "Z^" << free_rank;
            first = false;
        }
        for (const Int& d : invariant_factors) {
            if (!first) os << " + ";
            os << "Z/" << d;
            first = false;
        }
        return os.str();
    }
};

// A group given by generators and a column-span of relations:
// Z^generators / relations * Z^(relation count).
struct GroupPresentation {
    std::size_t generators = 0;
    IntMatrix relations;  // generators x (number of relations)

    GroupPresentation() = default;
    GroupPresentation(std::size_t gens, IntMatrix rels)
        : generators(gens), relations(std::move(rels)) {
        if (relations.rows() != generators)
            throw std::invalid_argument("GroupPresentation: relation rows != generators");
    }
};

// A pair (G, g): group presentation plus a distinguished element written in
// the presentation's generator coordinates.
struct PointedGroup {
    GroupPresentation presentation;
    std::vector<Int> element;

    PointedGroup() = default;
    PointedGroup(GroupPresentation pres, std::vector<Int> elt)
        : presentation(std::move(pres)), element(std::move(elt)) {
        if (element.size() != presentation.generators)
            throw std::invalid_argument("PointedGroup: element length != generator count");
    }
};

// Canonicalization result. Keeps the SNF row transform so that elements of
// the presented group can be re-expressed in canonical coordinates
// (free coordinates first, then one residue per invariant factor).
struct CanonicalizedGroup {
    FgAbelianGroup group;
    IntMatrix row_transform;    // U of the SNF of the relation matrix
    std::vector<Int> diagonal;  // SNF diagonal
    std::size_t snf_rank = 0;   // number of nonzero diagonal entries

    std::vector<Int> to_canonical(const std::vector<Int>& coords) const {
        std::vector<Int> y = row_transform.apply(coords);
        std::vector<Int> out;
        out.reserve(group.coordinate_count());
        for (std::size_t i = snf_rank; i < y.size(); ++i) out.push_back(y[i]);
        for (std::size_t i = 0; i < snf_rank; ++i) {
            const Int& d = diagonal[i];
            if (d == 1) continue;
            Int c = y[i] % d;
            if (c < 0) c += d;
            out.push_back(c);
        }
        return out;
    }
};

inline CanonicalizedGroup canonicalize(const GroupPresentation& p) {
    SnfResult snf = smith_normal_form(p.relations);
    CanonicalizedGroup c;
    c.row_transform = std::move(snf.u);
    c.diagonal = snf_diagonal(snf);
    for (const Int& d : c.diagonal)
        if (d != 0) ++c.snf_rank;
    c.group.free_rank = p.generators - c.snf_rank;
    for (std::size_t i = 0; i < c.snf_rank; ++i)
        if (c.diagonal[i] > 1) c.group.invariant_factors.push_back(c.diagonal[i]);
    return c;
}

// Canonical form of Z^rows / (column span of m).
inline FgAbelianGroup cokernel(const IntMatrix& m) {
    return canonicalize(GroupPresentation(m.rows(), m)).group;
}

// The canonical presentation of a canonical form: one generator per free
// summand and per invariant factor, one relation d_j * e_(free_rank+j).
inline GroupPresentation canonical_presentation(const FgAbelianGroup& g) {
    const std::size_t n = g.coordinate_count();
    IntMatrix rel(n, g.torsion_count());
    for (std::size_t j = 0; j < g.torsion_count(); ++j)
        rel(g.free_rank + j, j) = g.invariant_factors[j];
    return GroupPresentation(n, std::move(rel));
}

// Reduces raw canonical coordinates: torsion residues into [0, d).
inline std::vector<Int> normalize_coordinates(const FgAbelianGroup& g, std::vector<Int> coords) {
    if (coords.size() != g.coordinate_count())
        throw std::invalid_argument("coordinate vector length does not match group");
    for (std::size_t j = 0; j < g.torsion_count(); ++j) {
        Int& c = coords[g.free_rank + j];
        const Int& d = g.invariant_factors[j];
        c %= d;
        if (c < 0) c += d;
    }
    return coords;
}

// ---- operations on canonical data -----------------------------------------

inline FgAbelianGroup quotient_canonical(const FgAbelianGroup& g, const std::vector<Int>& coords) {
    if (coords.size() != g.coordinate_count())
        throw std::invalid_argument("quotient: coordinate length does not match group");
    GroupPresentation pres = canonical_presentation(g);
    return cokernel(pres.relations.with_column(coords));
}

// Least k > 0 with k*g = 0; nullopt when g has infinite order.
inline std::optional<Int> element_order_canonical(const FgAbelianGroup& g,
                                                  const std::vector<Int>& coords) {
    using boost::multiprecision::gcd;
    using boost::multiprecision::lcm;
    if (coords.size() != g.coordinate_count())
        throw std::invalid_argument("element_order: coordinate length does not match group");
    for (std::size_t i = 0; i < g.free_rank; ++i)
        if (coords[i] != 0) return std::nullopt;
    Int order = 1;
    for (std::size_t j = 0; j < g.torsion_count(); ++j) {
        const Int& d = g.invariant_factors[j];
        Int c = coords[g.free_rank + j] % d;
        if (c < 0) c += d;
        if (c != 0) order = lcm(order, d / gcd(d, c));
    }
    return order;
}

// 0 when g is torsion, 1 otherwise. Equals rank(G) - rank(G/Zg).
inline int w_invariant_canonical(const FgAbelianGroup& g, const std::vector<Int>& coords) {
    int w = element_order_canonical(g, coords) ? 0 : 1;
    assert(static_cast<int>(g.free_rank) -
               static_cast<int>(quotient_canonical(g, coords).free_rank) ==
           w);
    return w;
}

// Pointed isomorphism test: (G1,g1) and (G2,g2) admit an isomorphism
// carrying g1 to g2 exactly when the groups match and the quotients by the
// distinguished elements match. The search for an explicit map is never
// needed; it exists only as a test oracle.
inline bool pointed_isomorphic_canonical(const FgAbelianGroup& g1, const std::vector<Int>& u1,
                                         const FgAbelianGroup& g2, const std::vector<Int>& u2) {
    return g1 == g2 && quotient_canonical(g1, u1) == quotient_canonical(g2, u2);
}

// ---- operations on presentations (the public calculus) --------------------

inline bool is_isomorphic(const FgAbelianGroup& a, const FgAbelianGroup& b) { return a == b; }

inline FgAbelianGroup direct_sum(const FgAbelianGroup& a, const FgAbelianGroup& b) {
    // renormalize the invariant factors through the block relation matrix
    GroupPresentation pa = canonical_presentation(a);
    GroupPresentation pb = canonical_presentation(b);
    return cokernel(block_diagonal(pa.relations, pb.relations));
}

inline std::pair<FgAbelianGroup, std::vector<Int>> canonical_pointed(const PointedGroup& pg) {
    CanonicalizedGroup c = canonicalize(pg.presentation);
    return {c.group, c.to_canonical(pg.element)};
}

inline FgAbelianGroup quotient_by_element(const PointedGroup& pg) {
    return cokernel(pg.presentation.relations.with_column(pg.element));
}

inline std::optional<Int> element_order(const PointedGroup& pg) {
    auto [g, u] = canonical_pointed(pg);
    return element_order_canonical(g, u);
}

inline int w_invariant(const PointedGroup& pg) {
    auto [g, u] = canonical_pointed(pg);
    return w_invariant_canonical(g, u);
}

inline bool pointed_isomorphic(const PointedGroup& a, const PointedGroup& b) {
    auto [ga, ua] = canonical_pointed(a);
    auto [gb, ub] = canonical_pointed(b);
    return pointed_isomorphic_canonical(ga, ua, gb, ub);
}

}  // namespace kinv
