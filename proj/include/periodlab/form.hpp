#pragma once

// Differential forms on R^N with expression coefficients in x_1..x_N
// (written a1..aN, or t when N = 1).

#include "periodlab/expr.hpp"
#include "periodlab/simplex.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace periodlab {

/// Strictly increasing 1-based coordinate indices.
using MultiIndex = std::vector<int>;

class Form {
public:
    Form(int degree, int ambient);

    /// The 0-form f.
    static Form function(int ambient, Expr f);
    /// coeff dx_{i_1} ∧ ... ∧ dx_{i_p}; indices need not be sorted.
    static Form monomial(int ambient, std::vector<int> indices, Expr coeff = constant(1));

    int degree() const { return degree_; }
    int ambient() const { return ambient_; }
    const std::map<MultiIndex, Expr>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Adds coeff dx_indices, reordering with the permutation sign; repeated
    /// indices contribute nothing.
    void add_term(std::vector<int> indices, const Expr& coeff);

    Form operator-() const;
    friend Form operator+(Form a, const Form& b);
    friend Form operator-(const Form& a, const Form& b) { return a + (-b); }
    friend Form operator*(const Expr& f, const Form& w);
    friend bool operator==(const Form& a, const Form& b);

    /// Coefficients brought to canonical form; zero terms dropped.
    Form canonicalized() const;

    std::string to_string() const;

private:
    int degree_;
    int ambient_;
    std::map<MultiIndex, Expr> terms_;
};

/// dω = Σ_I Σ_j (∂h_I/∂x_j) dx_j ∧ dx_I, coefficients canonicalized.
Form exterior_derivative(const Form& w);

enum class Closedness { Symbolic, Numeric, NotClosed };
std::string closedness_name(Closedness c);

/// Symbolic check first (dω merges to zero); otherwise dω is evaluated at
/// 100 random points of [lo, hi]^N where it is defined.
Closedness check_closed(const Form& w, std::uint64_t seed = 1, double lo = -2, double hi = 2);

/// Compiled coefficients for repeated evaluation.
class CompiledForm {
public:
    CompiledForm() = default;
    explicit CompiledForm(const Form& w);

    int degree() const { return degree_; }
    int ambient() const { return ambient_; }
    const Form& source() const { return source_; }

    struct Term {
        MultiIndex index;
        CompiledExpr coeff;
    };
    const std::vector<Term>& terms() const { return terms_; }

private:
    Form source_{0, 0};
    int degree_ = 0;
    int ambient_ = 0;
    std::vector<Term> terms_;
};

/// Determinant of the rows `rows` (1-based) of the column-major n x p matrix J.
double minor_det(std::span<const double> J, int n, std::span<const int> rows, int p);
double det(std::span<const double> M, int p);

/// Coefficient of σ*(ω) against da_1 ∧ ... ∧ da_d at the interior point b.
double pullback_density(const SingularSimplex& sigma, const Form& w, std::span<const double> b);
double pullback_density(const SingularSimplex& sigma, const CompiledForm& w, std::span<const double> b);

/// Pullback density from a precomputed image point and Jacobian.
double pullback_density(const CompiledForm& w, std::span<const double> image, std::span<const double> J, int d);

/// The pieces of the decomposition τ*(η) = A + B for τ(t, b) = f(t) σ(b) and
/// η = h dx_1 ∧ ... ∧ dx_d.
///
/// Forms on [0,1] × Δ_d are given in the basis e_0..e_d, where e_k is the
/// wedge of dy_0..dy_d with dy_k omitted and y = (t, b_1, ..., b_d). A only
/// has an e_0 component; B only has components k >= 1.
class DecompAB {
public:
    DecompAB(SingularSimplex sigma, Expr f, Form eta);

    int dim() const { return sigma_.dim(); }
    /// C = h Σ_i (−1)^{i−1} x_i dx_1 ∧ .. (omit i) .. ∧ dx_d.
    const Form& C() const { return C_; }

    std::vector<double> A(double t, std::span<const double> b) const;
    std::vector<double> B(double t, std::span<const double> b) const;
    /// τ*(η) computed directly from the Jacobian of τ.
    std::vector<double> direct(double t, std::span<const double> b) const;

private:
    struct Frame {
        std::vector<double> image;  // τ(t, b)
        std::vector<double> s;      // σ(b)
        std::vector<double> J;      // Dσ(b)
        double f, df, h;
    };
    Frame frame(double t, std::span<const double> b) const;

    SingularSimplex sigma_;
    Prism prism_;
    Form eta_;
    CompiledExpr h_;
    Form C_;
};

/// Restriction of a d-form on [0,1] × Δ_d (basis as in DecompAB) to the
/// d-dimensional affine piece with column-major (d+1) x d linear part L.
double restrict_form(std::span<const double> components, std::span<const double> L, int d);

}  // namespace periodlab
