#include "periodlab/periods.hpp"

#include "periodlab/error.hpp"
#include "periodlab/parallel.hpp"

#include <cmath>

namespace periodlab {

CycleCheck check_cycle(const Chain& c, double tol) {
    CycleCheck res;
    if (c.degree() == 0) {
        res.closed = res.exact = true;
        res.detail = "0-chains are cycles";
        return res;
    }
    Chain b = boundary(c);
    if (b.empty()) {
        res.closed = res.exact = true;
        res.detail = "boundary cancels exactly";
        return res;
    }
    res.closed = chains_geometrically_equal(b, Chain(c.degree() - 1), tol);
    res.detail = res.closed ? "boundary cancels pointwise" : "boundary has " + std::to_string(b.size()) + " uncancelled terms";
    return res;
}

namespace {

void require_inputs(const std::vector<GeometricCycle>& cycles, const std::vector<NamedForm>& forms) {
    for (const auto& f : forms) {
        if (check_closed(f.form) == Closedness::NotClosed) throw InputError("form '" + f.name + "' is not closed");
    }
    for (const auto& c : cycles) {
        auto chk = check_cycle(c.chain);
        if (!chk.closed) throw InputError("chain '" + c.name + "' is not a cycle: " + chk.detail);
        for (const auto& f : forms) {
            if (!c.chain.empty() && f.form.degree() != c.chain.degree())
                throw InputError("form '" + f.name + "' has degree " + std::to_string(f.form.degree()) + " but cycle '" +
                                 c.name + "' has degree " + std::to_string(c.chain.degree()));
        }
    }
}

}  // namespace

PeriodMatrix period_matrix(const std::vector<GeometricCycle>& cycles, const std::vector<NamedForm>& forms,
                           const QuadOptions& opts) {
    require_inputs(cycles, forms);
    PeriodMatrix m;
    for (const auto& c : cycles) m.cycles.push_back(c.name);
    for (const auto& f : forms) m.forms.push_back(f.name);
    m.entries.assign(cycles.size(), std::vector<QuadResult>(forms.size()));
    const std::size_t nf = forms.size();
    QuadOptions inner = opts;
    inner.jobs = 1;
    parallel_for(cycles.size() * nf, opts.jobs, [&](std::size_t k) {
        const auto& c = cycles[k / nf];
        const auto& f = forms[k % nf];
        QuadResult& r = m.entries[k / nf][k % nf];
        if (c.chain.empty()) {
            r.converged = true;
            return;
        }
        r = integrate_chain(c.chain, f.form, inner);
    });
    for (const auto& row : m.entries)
        for (const auto& e : row) m.converged = m.converged && e.converged;
    return m;
}

RepresentativeComparison compare_representatives(const GeometricCycle& c1, const GeometricCycle& c2,
                                                 const std::vector<NamedForm>& forms, double tol,
                                                 const QuadOptions& opts) {
    RepresentativeComparison out;
    out.tolerance = tol;
    PeriodMatrix m = period_matrix({c1, c2}, forms, opts);
    for (std::size_t j = 0; j < forms.size(); ++j) {
        RepresentativeComparison::Entry e;
        e.form = forms[j].name;
        e.first = m.entries[0][j].value;
        e.second = m.entries[1][j].value;
        e.difference = std::abs(e.first - e.second);
        e.converged = m.entries[0][j].converged && m.entries[1][j].converged;
        e.ok = e.converged && e.difference <= tol;
        out.ok = out.ok && e.ok;
        out.entries.push_back(std::move(e));
    }
    return out;
}

}  // namespace periodlab
