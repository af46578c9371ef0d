#pragma once

// Smith normal form over the integers.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace periodlab {

using BigInt = boost::multiprecision::cpp_int;

/// Dense row-major integer matrix.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_zero() const;
    std::string to_string() const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BigInt> data_;
};

struct SNFResult {
    /// min(rows, cols) nonnegative entries, each dividing the next.
    std::vector<BigInt> diagonal;
    std::size_t rank = 0;
    /// U · M · V = S, with U, V unimodular; the inverses are kept exactly.
    IntMatrix U, V, U_inv, V_inv;
};

/// Row/column reduction with pivots of minimal absolute value; exact.
SNFResult smith_normal_form(const IntMatrix& M);

/// Exact determinant of a square matrix (fraction-free elimination).
BigInt determinant(const IntMatrix& M);

}  // namespace periodlab
