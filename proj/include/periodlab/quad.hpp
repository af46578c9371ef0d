#pragma once

// Adaptive integration of pullback densities over the open standard simplex.

#include "periodlab/chain.hpp"
#include "periodlab/form.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace periodlab {

/// Change of variables applied before integrating. `Graded` pulls the
/// integrand back along the barycentric map λ_i ↦ λ_i^m / Σ_j λ_j^m, whose
/// Jacobian vanishes to order m − 1 on every face; this turns integrable
/// algebraic boundary singularities into bounded integrands.
enum class Grading { Auto, Off, Graded };

struct QuadOptions {
    double tol = 0;      ///< relative; <= 0 picks 1e-8 (smooth) or 1e-6 (singular)
    double abs_tol = 0;  ///< absolute floor; <= 0 picks 1e-12 (smooth) or 1e-9 (singular)
    int max_depth = 40;  ///< halving levels per cell (bisections / d)
    std::size_t max_cells = 100000;
    Grading grading = Grading::Auto;
    int jobs = 1;
};

struct QuadResult {
    double value = 0;
    double error_estimate = 0;
    double abs_integral_estimate = 0;
    bool converged = false;
    std::size_t subdivisions = 0;
    int depth_reached = 0;
    double tolerance = 0;  ///< the absolute tolerance the estimate was held to
};

using Integrand = std::function<double(std::span<const double>)>;

/// Adaptive integral of g over Δ_d. `singular` selects the default
/// tolerances and, with Grading::Auto, the graded change of variables.
QuadResult integrate_function(int d, const Integrand& g, const QuadOptions& opts, bool singular);

/// ∫_{Δ_d} σ*(ω).
QuadResult integrate_simplex(const SingularSimplex& sigma, const Form& w, const QuadOptions& opts = {});

/// Σ coeff · ∫σ*(ω); errors add up with |coeff| weights.
QuadResult integrate_chain(const Chain& c, const Form& w, const QuadOptions& opts = {});

/// The prism (t, b) ↦ f(t) σ(b) over [0,1] × Δ_d, oriented so that q is
/// orientation preserving (with f = 1 − t this equals the cone integral).
/// Computed on the staircase decomposition of the prism.
QuadResult integrate_prism(const SingularSimplex& sigma, const Expr& f, const Form& w, const QuadOptions& opts = {});

/// Sign of det Dq for q: [0,1] × Δ_d → Δ_{d+1} relative to the (t, b) order.
int prism_q_orientation(int d);

enum class Verdict { Yes, No, Inconclusive };
std::string verdict_name(Verdict v);

struct IndexVolume {
    MultiIndex index;
    QuadResult result;
    Verdict verdict = Verdict::Inconclusive;
    /// Integrals of |σ*(dx_I)| over the shells between homothetic copies of
    /// Δ_d shrunk by 2^-k and 2^-(k+1) toward the barycenter (only filled
    /// when the main integration did not converge).
    std::vector<double> shells;
};

struct VolumeReport {
    std::vector<IndexVolume> entries;
    Verdict verdict = Verdict::Inconclusive;
};

/// Integrates |σ*(dx_I)| for every standard d-form. When an integral does
/// not converge, the shell diagnostic decides: shell integrals that fail to
/// shrink (ratio >= 0.9 over 5 consecutive levels) give "no", otherwise the
/// index is "inconclusive". This is a diagnostic, not a decision procedure.
VolumeReport finite_volume_check(const SingularSimplex& sigma, const QuadOptions& opts = {});

}  // namespace periodlab
