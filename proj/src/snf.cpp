#include "periodlab/snf.hpp"

#include "periodlab/error.hpp"

#include <utility>

namespace periodlab {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1;
    return I;
}

bool IntMatrix::is_zero() const {
    for (const auto& x : data_)
        if (x != 0) return false;
    return true;
}

std::string IntMatrix::to_string() const {
    std::string s = "[";
    for (std::size_t r = 0; r < rows_; ++r) {
        s += r ? "; " : "";
        for (std::size_t c = 0; c < cols_; ++c) s += (c ? " " : "") + (*this)(r, c).str();
    }
    return s + "]";
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw InputError("matrix product: shape mismatch");
    IntMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

namespace {

// Elementary operations applied to the working matrix and mirrored on the
// transforms, so that U M V = S and U U_inv = V V_inv = I throughout.
struct Reducer {
    IntMatrix S, U, V, Ui, Vi;

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < S.cols(); ++c) std::swap(S(i, c), S(j, c));
        for (std::size_t c = 0; c < U.cols(); ++c) std::swap(U(i, c), U(j, c));
        for (std::size_t r = 0; r < Ui.rows(); ++r) std::swap(Ui(r, i), Ui(r, j));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < S.rows(); ++r) std::swap(S(r, i), S(r, j));
        for (std::size_t r = 0; r < V.rows(); ++r) std::swap(V(r, i), V(r, j));
        for (std::size_t c = 0; c < Vi.cols(); ++c) std::swap(Vi(i, c), Vi(j, c));
    }
    // row i += q row j
    void add_row(std::size_t i, std::size_t j, const BigInt& q) {
        if (q == 0) return;
        for (std::size_t c = 0; c < S.cols(); ++c) S(i, c) += q * S(j, c);
        for (std::size_t c = 0; c < U.cols(); ++c) U(i, c) += q * U(j, c);
        for (std::size_t r = 0; r < Ui.rows(); ++r) Ui(r, j) -= q * Ui(r, i);
    }
    // col i += q col j
    void add_col(std::size_t i, std::size_t j, const BigInt& q) {
        if (q == 0) return;
        for (std::size_t r = 0; r < S.rows(); ++r) S(r, i) += q * S(r, j);
        for (std::size_t r = 0; r < V.rows(); ++r) V(r, i) += q * V(r, j);
        for (std::size_t c = 0; c < Vi.cols(); ++c) Vi(j, c) -= q * Vi(i, c);
    }
    void negate_row(std::size_t i) {
        for (std::size_t c = 0; c < S.cols(); ++c) S(i, c) = -S(i, c);
        for (std::size_t c = 0; c < U.cols(); ++c) U(i, c) = -U(i, c);
        for (std::size_t r = 0; r < Ui.rows(); ++r) Ui(r, i) = -Ui(r, i);
    }
};

BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

}  // namespace

SNFResult smith_normal_form(const IntMatrix& M) {
    const std::size_t m = M.rows(), n = M.cols();
    Reducer R{M, IntMatrix::identity(m), IntMatrix::identity(n), IntMatrix::identity(m), IntMatrix::identity(n)};
    IntMatrix& S = R.S;
    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
        for (;;) {
            // pivot: smallest nonzero |entry| in the trailing block
            std::size_t pr = m, pc = n;
            BigInt best;
            for (std::size_t r = t; r < m; ++r)
                for (std::size_t c = t; c < n; ++c)
                    if (S(r, c) != 0 && (pr == m || abs_big(S(r, c)) < best)) {
                        best = abs_big(S(r, c));
                        pr = r;
                        pc = c;
                    }
            if (pr == m) goto done;
            R.swap_rows(t, pr);
            R.swap_cols(t, pc);
            bool clean = true;
            for (std::size_t r = t + 1; r < m; ++r) {
                if (S(r, t) == 0) continue;
                BigInt q = S(r, t) / S(t, t);
                R.add_row(r, t, -q);
                if (S(r, t) != 0) clean = false;
            }
            for (std::size_t c = t + 1; c < n; ++c) {
                if (S(t, c) == 0) continue;
                BigInt q = S(t, c) / S(t, t);
                R.add_col(c, t, -q);
                if (S(t, c) != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility: fold a row with an offending entry into the pivot row
            bool divides = true;
            for (std::size_t r = t + 1; r < m && divides; ++r)
                for (std::size_t c = t + 1; c < n; ++c)
                    if (S(r, c) % S(t, t) != 0) {
                        R.add_row(t, r, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (S(t, t) < 0) R.negate_row(t);
    }
done:
    SNFResult res;
    for (std::size_t i = 0; i < std::min(m, n); ++i) {
        res.diagonal.push_back(S(i, i));
        if (S(i, i) != 0) ++res.rank;
    }
    res.U = std::move(R.U);
    res.V = std::move(R.V);
    res.U_inv = std::move(R.Ui);
    res.V_inv = std::move(R.Vi);
    return res;
}

BigInt determinant(const IntMatrix& M) {
    if (M.rows() != M.cols()) throw InputError("determinant: matrix is not square");
    const std::size_t n = M.rows();
    if (n == 0) return 1;
    // Bareiss
    IntMatrix A = M;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (A(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && A(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t c = 0; c < n; ++c) std::swap(A(k, c), A(p, c));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) A(i, j) = (A(i, j) * A(k, k) - A(i, k) * A(k, j)) / prev;
        prev = A(k, k);
    }
    return sign * A(n - 1, n - 1);
}

}  // namespace periodlab
