#pragma once

#include "kinv/ktriple.hpp"

#include <sstream>

namespace kinv {
namespace ck {

class ValidationError : public std::runtime_error {
public:
    enum class Kind { NotSquare, BadEntry, Reducible, Permutation };

    ValidationError(Kind kind, std::string msg, std::size_t i = 0, std::size_t j = 0)
        : std::runtime_error(std::move(msg)), kind_(kind), i_(i), j_(j) {}

    Kind kind() const { return kind_; }
    std::size_t row() const { return i_; }  // 1-based
    std::size_t col() const { return j_; }  // 1-based

private:
    Kind kind_;
    std::size_t i_, j_;
};

// A validated defining matrix of a simple Cuntz-Krieger algebra: square,
// entries in {0,1}, irreducible, not a permutation matrix. Construct only
// through validate().
class CKMatrix {
public:
    std::size_t size() const { return entries_.rows(); }
    const IntMatrix& entries() const { return entries_; }

    friend CKMatrix validate(const IntMatrix& raw);

private:
    explicit CKMatrix(IntMatrix entries) : entries_(std::move(entries)) {}
    IntMatrix entries_;
};

inline CKMatrix validate(const IntMatrix& raw) {
    using Kind = ValidationError::Kind;
    if (!raw.is_square()) {
        std::ostringstream os;
        os << "matrix is " << raw.rows() << "x" << raw.cols() << ", expected square";
        throw ValidationError(Kind::NotSquare, os.str());
    }
    const std::size_t n = raw.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (raw(i, j) != 0 && raw(i, j) != 1) {
                std::ostringstream os;
                os << "entry (" << i + 1 << "," << j + 1 << ") is " << raw(i, j)
                   << ", expected 0 or 1";
                throw ValidationError(Kind::BadEntry, os.str(), i + 1, j + 1);
            }

    bool permutation = true;
    for (std::size_t i = 0; i < n && permutation; ++i) {
        std::size_t row_sum = 0, col_sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (raw(i, j) == 1) ++row_sum;
            if (raw(j, i) == 1) ++col_sum;
        }
        if (row_sum != 1 || col_sum != 1) permutation = false;
    }
    if (permutation)
        throw ValidationError(Kind::Permutation, "matrix is a permutation matrix");

    // irreducibility: every ordered vertex pair joined by a path of length
    // at least one (so a lone vertex needs its self-loop)
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) reach[i][j] = raw(i, j) == 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (reach[k][j]) reach[i][j] = true;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!reach[i][j]) {
                std::ostringstream os;
                os << "matrix is reducible: vertex " << i + 1 << " cannot reach vertex "
                   << j + 1;
                throw ValidationError(Kind::Reducible, os.str(), i + 1, j + 1);
            }

    return CKMatrix(raw);
}

// The companion matrix A + R_1 - A*R_1 where R_1 has an all-ones first row
// and zeros elsewhere. Entrywise this is A(i,j) + [i=1] - A(i,1), which can
// leave {0,1} when A(1,1) = 0; downstream code treats it as a general
// integer matrix.
inline IntMatrix a_hat(const CKMatrix& a) {
    const std::size_t n = a.size();
    IntMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h(i, j) = a.entries()(i, j) + (i == 0 ? 1 : 0) - a.entries()(i, 0);
    return h;
}

inline IntMatrix identity_minus(const IntMatrix& m) {
    return IntMatrix::identity(m.rows()) - m;
}

// K_0 = coker(I - A^t) pointed by the class of the all-ones vector, the
// standard presentation of the K-theory of these algebras; K_1 is free of
// the kernel rank of the same matrix.
inline KTriple k_triple(const CKMatrix& a) {
    const std::size_t n = a.size();
    IntMatrix rel = identity_minus(a.entries().transpose());
    PointedGroup pg(GroupPresentation(n, rel), std::vector<Int>(n, Int(1)));
    FgAbelianGroup k1 = FgAbelianGroup::free_of_rank(kernel_rank(rel));
    return KTriple::from_presentation(pg, std::move(k1));
}

// Bowen-Franks style cokernels. The weak group uses I - A exactly; the
// transpose discrepancy against the K_0 presentation is invisible to
// canonical forms.
inline FgAbelianGroup ext_weak1_matrix(const CKMatrix& a) {
    return cokernel(identity_minus(a.entries()));
}

inline FgAbelianGroup ext_strong1_matrix(const CKMatrix& a) {
    return cokernel(identity_minus(a_hat(a)));
}

inline FgAbelianGroup total_ext1_matrix(const CKMatrix& a) {
    return cokernel(identity_minus(block_diagonal(a_hat(a), a.entries())));
}

// Complete isomorphism decision from the single block cokernel.
inline bool iso_ck(const CKMatrix& a, const CKMatrix& b) {
    return is_isomorphic(total_ext1_matrix(a), total_ext1_matrix(b));
}

}  // namespace ck
}  // namespace kinv
