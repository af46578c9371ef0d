#pragma once

// Extending a triangulation across a second piece by the interpolation map
// through the overlap, and the left-to-right cover driver.

#include "periodlab/triangulation.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace periodlab {

/// Numerical inverse of a simplex evaluator on its closed domain.
/// Affine evaluators are inverted by a least-squares solve; anything else
/// by damped Gauss–Newton from barycentric seeds. Results are cached.
class SimplexInverse {
public:
    explicit SimplexInverse(SingularSimplex beta, double tol = 1e-12);
    ~SimplexInverse();

    /// Barycentric coordinates (d+1 values, vertex 0 first) of a preimage of
    /// y in the closed simplex, or nothing if y is not in the image.
    std::optional<std::vector<double>> invert(std::span<const double> y) const;
    const SingularSimplex& simplex() const { return beta_; }
    double tolerance() const { return tol_; }

private:
    struct Cache;
    SingularSimplex beta_;
    double tol_;
    std::unique_ptr<Cache> cache_;
};

/// The interpolation map on the closed simplex (v_0..v_m, w_0..w_s):
///   Σ a_i e_i ↦ h1|σ( Σ_{i≤m} a_i e_{v_i} + a · g(w-part / a) ),  a = Σ_{j=0}^{s} a_{m+1+j},
/// g = (h1|β)^{-1} ∘ h2|τ with β the B-face of σ; at a = 0 it is h1|σ of the v-part.
/// `v_pos[i]`, `b_pos[k]` are the positions of v_i and b_k among σ's vertices.
SingularSimplex glued_simplex(const SingularSimplex& h1_sigma, std::vector<int> v_pos, std::vector<int> b_pos,
                              const SingularSimplex& h2_tau, std::shared_ptr<const SimplexInverse> g_inverse);

struct GlueInput {
    Triangulation t1;  ///< X_1, with mark `b_mark` for B = X_1 ∩ X_2
    Triangulation t2;  ///< the affine piece X_2, subdividing T_1 on B
    std::string b_mark = "B";
    /// K_2 vertex in B ↦ the K_1 simplex of B whose closed image contains it.
    /// Computed by inverting h_1 when absent.
    std::map<int, Simplex> identification;
};

struct GlueOptions {
    double inverse_tol = 1e-12;
    bool validate = true;
    double face_tol = 1e-10;
    int jobs = 1;
};

struct GlueResult {
    Triangulation triangulation;
    /// New vertex ↦ (1 or 2, vertex of K_1 or K_2).
    std::map<int, std::pair<int, int>> vertex_origin;
    std::map<int, Simplex> identification;
    bool subdivided_t1 = false;
    bool subdivided_t2 = false;
    TriangulationCheck check;
};

GlueResult glue(const GlueInput& input, const GlueOptions& opts = {});

struct CoverPiece {
    std::string chart;
    /// Marks named "X<j>" (1-based piece number) carry the part of this
    /// piece lying in piece j.
    Triangulation triangulation;
};

struct CoverResult {
    Triangulation triangulation;
    std::vector<TriangulationCheck> steps;
};

/// Folds glue over the pieces left to right; B at step k is the union of
/// the "X<k>" marks accumulated so far and the "X<j>", j < k, marks of piece k.
CoverResult cover_and_triangulate(const std::vector<CoverPiece>& pieces, const GlueOptions& opts = {});

}  // namespace periodlab
