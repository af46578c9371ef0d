#pragma once

// Numerical Stokes checks: ∫σ*(dω) against ∫_{∂Δ_d} σ*(ω).

#include "periodlab/chain.hpp"
#include "periodlab/form.hpp"
#include "periodlab/quad.hpp"
#include "periodlab/triangulation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace periodlab {

enum class Outcome { Pass, Fail, Inconclusive };
std::string outcome_name(Outcome o);

struct StokesOptions {
    QuadOptions quad;
    double abs_tol = 1e-6;
    double rel_tol = 1e-6;
    /// Interior faces of a triangulation must cancel to this level.
    double cancel_tol = 1e-9;
};

struct FaceIntegral {
    int index = 0;  ///< face opposite vertex `index`
    int sign = 1;   ///< (−1)^index
    QuadResult result;
};

struct StokesReport {
    QuadResult lhs;
    std::vector<FaceIntegral> faces;
    double rhs = 0;
    double residual = 0;
    double tolerance = 0;
    bool converged = false;
    Outcome verdict = Outcome::Inconclusive;
};

/// Pass iff |lhs − rhs| ≤ max(abs_tol, rel_tol (|lhs| + |rhs|)) and every
/// integral converged; a converged mismatch is Fail, otherwise Inconclusive.
StokesReport stokes_residual(const SingularSimplex& sigma, const Form& w, const StokesOptions& opts = {});

struct ChainStokesReport {
    std::vector<std::int64_t> coefficients;
    std::vector<StokesReport> terms;
    double lhs = 0;
    double rhs = 0;
    double residual = 0;      ///< |Σ k lhs − Σ k rhs|
    double residual_sum = 0;  ///< Σ |k| residual_k
    double tolerance = 0;
    bool converged = true;
    Outcome verdict = Outcome::Pass;
};

ChainStokesReport check_chain(const Chain& c, const Form& w, const StokesOptions& opts = {});

struct FacePairing {
    Simplex face;
    std::vector<Simplex> owners;
    std::vector<double> contributions;  ///< signed, one per owner
    double mismatch = 0;                ///< |Σ contributions| for interior faces
};

struct TriangulatedStokesReport {
    double lhs = 0;  ///< Σ_τ ε_τ ∫ τ*(dω)
    double rhs = 0;  ///< Σ_τ ε_τ ∫_{∂Δ} τ*(ω), all faces
    std::vector<FacePairing> interior;
    double max_cancellation = 0;
    /// Uncancelled faces with their signs; its integral is boundary_integral.
    std::vector<std::pair<Simplex, int>> boundary_faces;
    Chain boundary;
    double boundary_integral = 0;
    std::vector<Simplex> non_manifold;
    double residual = 0;  ///< |lhs − boundary_integral|
    double tolerance = 0;
    bool converged = true;
    Outcome verdict = Outcome::Inconclusive;
};

/// Stokes over the oriented top simplices of T with interior-face
/// cancellation; faces are paired combinatorially. A face shared by three or
/// more top simplices is listed in `non_manifold` and fails the check.
TriangulatedStokesReport triangulated_stokes(const Triangulation& T, const Form& w, const StokesOptions& opts = {});

}  // namespace periodlab
