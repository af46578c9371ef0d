#include "periodlab/stokes.hpp"

#include "periodlab/error.hpp"
#include "periodlab/parallel.hpp"

#include <cmath>
#include <map>

namespace periodlab {

std::string outcome_name(Outcome o) {
    switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

double threshold(const StokesOptions& o, double lhs, double rhs) {
    return std::max(o.abs_tol, o.rel_tol * (std::abs(lhs) + std::abs(rhs)));
}

Outcome decide(bool converged, double residual, double tol) {
    if (!converged) return Outcome::Inconclusive;
    return residual <= tol ? Outcome::Pass : Outcome::Fail;
}

}  // namespace

StokesReport stokes_residual(const SingularSimplex& sigma, const Form& w, const StokesOptions& opts) {
    const int d = sigma.dim();
    if (d < 1) throw InputError("stokes: simplex must have dimension at least 1");
    if (w.degree() != d - 1)
        throw InputError("stokes: form of degree " + std::to_string(w.degree()) + " on a " + std::to_string(d) + "-simplex");
    const Form dw = exterior_derivative(w);
    StokesReport rep;
    rep.faces.resize(d + 1);
    QuadOptions q = opts.quad;
    const int jobs = q.jobs;
    q.jobs = 1;
    parallel_for(static_cast<std::size_t>(d + 2), jobs, [&](std::size_t task) {
        if (task == 0) {
            rep.lhs = integrate_simplex(sigma, dw, q);
            return;
        }
        const int i = static_cast<int>(task) - 1;
        FaceIntegral& f = rep.faces[i];
        f.index = i;
        f.sign = i % 2 ? -1 : 1;
        f.result = integrate_simplex(face(sigma, i), w, q);
    });
    double rhs = 0;
    rep.converged = rep.lhs.converged;
    for (const auto& f : rep.faces) {
        rhs += f.sign * f.result.value;
        rep.converged = rep.converged && f.result.converged;
    }
    rep.rhs = rhs;
    rep.residual = std::abs(rep.lhs.value - rhs);
    rep.tolerance = threshold(opts, rep.lhs.value, rhs);
    rep.verdict = decide(rep.converged, rep.residual, rep.tolerance);
    return rep;
}

ChainStokesReport check_chain(const Chain& c, const Form& w, const StokesOptions& opts) {
    ChainStokesReport rep;
    auto terms = c.terms();
    rep.terms.resize(terms.size());
    StokesOptions inner = opts;
    inner.quad.jobs = 1;
    parallel_for(terms.size(), opts.quad.jobs,
                 [&](std::size_t i) { rep.terms[i] = stokes_residual(terms[i].simplex, w, inner); });
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double k = static_cast<double>(terms[i].coeff);
        rep.coefficients.push_back(terms[i].coeff);
        rep.lhs += k * rep.terms[i].lhs.value;
        rep.rhs += k * rep.terms[i].rhs;
        rep.residual_sum += std::abs(k) * rep.terms[i].residual;
        rep.converged = rep.converged && rep.terms[i].converged;
    }
    rep.residual = std::abs(rep.lhs - rep.rhs);
    rep.tolerance = threshold(opts, rep.lhs, rep.rhs);
    rep.verdict = decide(rep.converged, rep.residual, rep.tolerance);
    // a failing term fails the chain even if the sums happen to agree
    for (const auto& t : rep.terms)
        if (t.verdict == Outcome::Fail) rep.verdict = Outcome::Fail;
    return rep;
}

TriangulatedStokesReport triangulated_stokes(const Triangulation& T, const Form& w, const StokesOptions& opts) {
    const auto& K = T.complex();
    const int d = K.dimension();
    if (d < 1) throw InputError("triangulated stokes: complex must have dimension at least 1");
    if (w.degree() != d - 1) throw InputError("triangulated stokes: form degree must be dim - 1");
    std::vector<Simplex> tops;
    for (const auto& f : K.facets()) {
        if (static_cast<int>(f.size()) != d + 1)
            throw InputError("triangulated stokes: complex is not pure (lower-dimensional facet present)");
        if (!T.has_evaluator(f)) throw InputError("triangulated stokes: a top simplex has no evaluator");
        tops.push_back(f);
    }
    const Form dw = exterior_derivative(w);
    QuadOptions q = opts.quad;
    q.jobs = 1;
    const std::size_t per = static_cast<std::size_t>(d + 2);
    std::vector<QuadResult> results(tops.size() * per);
    parallel_for(results.size(), opts.quad.jobs, [&](std::size_t task) {
        const auto& ev = T.evaluators().at(tops[task / per]);
        const std::size_t k = task % per;
        results[task] = k == 0 ? integrate_simplex(ev, dw, q) : integrate_simplex(face(ev, static_cast<int>(k) - 1), w, q);
    });

    TriangulatedStokesReport rep;
    std::map<Simplex, FacePairing> faces;
    for (std::size_t t = 0; t < tops.size(); ++t) {
        const int eps = T.orientation(tops[t]);
        const QuadResult& l = results[t * per];
        rep.lhs += eps * l.value;
        rep.converged = rep.converged && l.converged;
        for (int i = 0; i <= d; ++i) {
            const QuadResult& r = results[t * per + 1 + i];
            const double c = eps * (i % 2 ? -1 : 1) * r.value;
            rep.rhs += c;
            rep.converged = rep.converged && r.converged;
            Simplex f = drop_vertex(tops[t], i);
            auto& fp = faces[f];
            fp.face = f;
            fp.owners.push_back(tops[t]);
            fp.contributions.push_back(c);
        }
    }
    rep.boundary = Chain(d - 1);
    for (auto& [f, fp] : faces) {
        if (fp.owners.size() >= 3) {
            rep.non_manifold.push_back(f);
            continue;
        }
        if (fp.owners.size() == 2) {
            fp.mismatch = std::abs(fp.contributions[0] + fp.contributions[1]);
            rep.max_cancellation = std::max(rep.max_cancellation, fp.mismatch);
            rep.interior.push_back(fp);
            continue;
        }
        const Simplex& owner = fp.owners[0];
        int i = 0;
        while (i < static_cast<int>(f.size()) && owner[i] == f[i]) ++i;
        const int sign = T.orientation(owner) * (i % 2 ? -1 : 1);
        rep.boundary_faces.emplace_back(f, sign);
        rep.boundary.add(face(T.evaluators().at(owner), i), sign);
        rep.boundary_integral += fp.contributions[0];
    }
    rep.residual = std::abs(rep.lhs - rep.boundary_integral);
    rep.tolerance = threshold(opts, rep.lhs, rep.boundary_integral);
    rep.verdict = decide(rep.converged, rep.residual, rep.tolerance);
    if (rep.verdict != Outcome::Inconclusive && (!rep.non_manifold.empty() || rep.max_cancellation > opts.cancel_tol))
        rep.verdict = Outcome::Fail;
    return rep;
}

}  // namespace periodlab
