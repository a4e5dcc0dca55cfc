#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kinv {

// All integer arithmetic in this library is exact. Entries never overflow
// because they are arbitrary-precision.
using Int = boost::multiprecision::cpp_int;

// Dense integer matrix, row-major. Empty shapes (0 rows or 0 columns) are
// legal values, not errors.
class IntMatrix {
public:
    IntMatrix() = default;

    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        entries_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw std::invalid_argument("IntMatrix: ragged initializer");
            entries_.insert(entries_.end(), r.begin(), r.end());
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    bool operator==(const IntMatrix& o) const = default;

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols_ != o.rows_)
            throw std::invalid_argument("IntMatrix: dimension mismatch in product");
        IntMatrix p(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
            }
        return p;
    }

    IntMatrix operator-(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("IntMatrix: dimension mismatch in difference");
        IntMatrix d = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i) d.entries_[i] -= o.entries_[i];
        return d;
    }

    // Column vector of the matrix applied to v.
    std::vector<Int> apply(const std::vector<Int>& v) const {
        if (v.size() != cols_)
            throw std::invalid_argument("IntMatrix: dimension mismatch in apply");
        std::vector<Int> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    // [*this | extra] as one extra column.
    IntMatrix with_column(const std::vector<Int>& col) const {
        if (col.size() != rows_)
            throw std::invalid_argument("IntMatrix: column length mismatch");
        IntMatrix m(rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
            m(i, cols_) = col[i];
        }
        return m;
    }

    friend IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b) {
        IntMatrix m(a.rows_ + b.rows_, a.cols_ + b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) m(a.rows_ + i, a.cols_ + j) = b(i, j);
        return m;
    }

    friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? "\n" : "") << "[";
            for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
            os << "]";
        }
        return os;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> entries_;
};

// Exact determinant by fraction-free (Bareiss) elimination. The determinant
// of the empty 0x0 matrix is 1.
inline Int determinant(IntMatrix a) {
    if (!a.is_square()) throw std::invalid_argument("determinant: matrix not square");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a(piv, k) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(piv, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = a(k, k) * a(i, j) - a(i, k) * a(k, j);
                a(i, j) = num / prev;  // divides exactly
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

}  // namespace kinv
