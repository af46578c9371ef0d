// Acceptance run: one PASS/FAIL line per criterion.
// usage: acceptance <periodlab executable> <data directory>

#include "generators.hpp"

#include "periodlab/glue.hpp"
#include "periodlab/homology.hpp"
#include "periodlab/periods.hpp"
#include "periodlab/stokes.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace periodlab;

namespace {

SingularSimplex exprs(int d, std::initializer_list<const char*> comps) {
    std::vector<Expr> e;
    for (const char* c : comps) e.push_back(parse(c, d));
    return SingularSimplex::from_exprs(d, e);
}

Form form(int degree, int n, std::initializer_list<std::pair<MultiIndex, const char*>> terms) {
    Form w(degree, n);
    for (const auto& [idx, c] : terms) w.add_term(idx, parse(c, n));
    return w;
}

std::string fix(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

struct Line {
    bool ok = true;
    std::string detail;
    void need(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
        }
    }
    void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

// 1. σ̄ = ĥσ∘q and i∘q = id
Line cone_prism() {
    Line L;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double cone_err = 0, inv_err = 0;
    int samples = 0;
    for (int d = 1; d <= 3; ++d) {
        for (int trial = 0; trial < 4; ++trial) {
            SingularSimplex s = testing::random_smooth_simplex(rng, d, 3);
            SingularSimplex h = cone(s);
            Prism bar(s, parse("1 - t", 1));
            for (int k = 0; k < 834; ++k, ++samples) {
                const double t = U(rng);
                auto b = testing::simplex_point(rng, d);
                auto a = prism_q(t, b);
                std::vector<double> tb{t};
                tb.insert(tb.end(), b.begin(), b.end());
                std::vector<double> y1(3), y2(3);
                h.eval(a, y1);
                bar.eval(tb, y2);
                for (int r = 0; r < 3; ++r) cone_err = std::max(cone_err, std::abs(y1[r] - y2[r]));
                auto back = prism_inverse(a);
                for (int r = 0; r <= d; ++r) inv_err = std::max(inv_err, std::abs(back[r] - tb[r]));
            }
        }
    }
    L.need(samples >= 10000, "sample count");
    L.need(cone_err <= 1e-12, "cone vs prism");
    L.need(inv_err <= 1e-12, "inverse of q");
    L.note(std::to_string(samples) + " points, d=1..3, max |ĥσ∘q − σ̄| " + sci(cone_err) + ", max |i∘q − id| " + sci(inv_err) +
           " (tol 1e-12)");
    return L;
}

// 2. finite volume
Line finite_volume() {
    Line L;
    auto r = integrate_simplex(exprs(1, {"a1", "sqrt(a1)"}), form(1, 2, {{{2}, "1"}}));
    L.need(r.converged && std::abs(r.value - 1) <= 1e-6, "∫dy over (t, √t)");
    L.note("∫dy over (t,√t) = " + fix(r.value) + " ± " + sci(r.error_estimate));

    std::vector<SingularSimplex> corpus = {
        exprs(1, {"a1", "sqrt(a1)"}),
        exprs(1, {"cos(pi*a1)", "sin(pi*a1)"}),
        exprs(1, {"a1^2", "a1^3"}),
        exprs(1, {"a1^(1/3)", "a1"}),
        exprs(1, {"exp(a1)", "a1^2 - a1", "atan(a1)"}),
        exprs(2, {"a1^2", "a2"}),
        exprs(2, {"sqrt(a1)", "a2"}),
        exprs(2, {"a1 + a2^2", "a1*a2 - a2"}),
        exprs(2, {"cos(a1) + a2", "sin(a1 + a2)"}),
        exprs(2, {"sqrt(a1 + a2)", "a2", "a1^2"}),
    };
    int finite = 0, stable = 0;
    for (const auto& s : corpus) {
        if (finite_volume_check(s).verdict != Verdict::Yes) continue;
        ++finite;
        if (finite_volume_check(cone(s)).verdict == Verdict::Yes) ++stable;
    }
    L.need(finite == static_cast<int>(corpus.size()), "corpus has finite volume");
    L.need(stable == finite, "cones keep finite volume");
    L.note("cone stability " + std::to_string(stable) + "/" + std::to_string(finite));

    auto w = finite_volume_check(exprs(1, {"a1", "a1*sin(1/a1)"}));
    const bool flagged = !w.entries[1].result.converged && w.entries[1].verdict == Verdict::No;
    L.need(flagged, "t·sin(1/t) flagged");
    L.note(std::string("t·sin(1/t): ") + (w.entries[1].result.converged ? "converged" : "non-convergent") + ", verdict " +
           verdict_name(w.entries[1].verdict));
    return L;
}

// 3. A + B = τ*(η) and the face restrictions
Line decomposition() {
    Line L;
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const char* profiles[] = {"1 - t", "(1 - t)^2", "1 + t/2 + sin(t)"};
    const char* weights[] = {"1", "1 + x1*x2", "cos(x1) + x2^2"};
    double sum_err = 0, face_err = 0;
    int points = 0;
    for (int d = 1; d <= 2; ++d) {
        for (int trial = 0; trial < 3; ++trial) {
            SingularSimplex s = testing::random_smooth_simplex(rng, d, 2);
            MultiIndex first;
            for (int i = 1; i <= d; ++i) first.push_back(i);
            DecompAB ab(s, parse(profiles[trial], 1), Form::monomial(2, first, parse(weights[trial], 2)));
            for (int k = 0; k < 100; ++k, ++points) {
                const double t = 1e-3 + (1 - 2e-3) * U(rng);
                auto b = testing::simplex_point(rng, d);
                auto A = ab.A(t, b), B = ab.B(t, b), D = ab.direct(t, b);
                double scale = 0;
                for (double v : D) scale = std::max(scale, std::abs(v));
                for (int c = 0; c <= d; ++c) sum_err = std::max(sum_err, std::abs(A[c] + B[c] - D[c]) / std::max(scale, 1e-300));
            }
            std::vector<double> Lt(static_cast<std::size_t>(d + 1) * d, 0.0);
            for (int c = 0; c < d; ++c) Lt[static_cast<std::size_t>(c) * (d + 1) + c + 1] = 1.0;
            for (double t : {0.0, 1.0}) {
                for (int k = 0; k < 20; ++k) {
                    auto b = testing::simplex_point(rng, d);
                    face_err = std::max(face_err, std::abs(restrict_form(ab.B(t, b), Lt, d)));
                    face_err = std::max(face_err, std::abs(restrict_form(ab.A(t, b), Lt, d) - restrict_form(ab.direct(t, b), Lt, d)));
                }
            }
            for (int i = 0; i <= d; ++i) {
                AffineMap phi = face_map(d, i);
                std::vector<double> Lf(static_cast<std::size_t>(d + 1) * d, 0.0);
                Lf[0] = 1.0;
                for (int c = 0; c < d - 1; ++c)
                    for (int r = 0; r < d; ++r)
                        Lf[static_cast<std::size_t>(c + 1) * (d + 1) + r + 1] = phi.linear()[static_cast<std::size_t>(c) * d + r];
                for (int k = 0; k < 20; ++k) {
                    const double t = U(rng);
                    auto c = testing::simplex_point(rng, d - 1);
                    std::vector<double> b(d);
                    phi.apply(c, b);
                    face_err = std::max(face_err, std::abs(restrict_form(ab.A(t, b), Lf, d)));
                    face_err = std::max(face_err, std::abs(restrict_form(ab.B(t, b), Lf, d) - restrict_form(ab.direct(t, b), Lf, d)));
                }
            }
        }
    }
    L.need(sum_err <= 1e-10, "A + B = τ*(η)");
    L.need(face_err <= 1e-10, "face restrictions");
    L.note(std::to_string(points) + " points, max relative |A+B−τ*η| " + sci(sum_err) + ", face restrictions " + sci(face_err) +
           " (tol 1e-10)");
    return L;
}

// 4. Stokes
Line stokes() {
    Line L;
    std::vector<std::pair<SingularSimplex, Form>> corpus = {
        {exprs(1, {"a1", "sqrt(a1)"}), form(0, 2, {{{}, "x1*x2"}})},
        {exprs(1, {"a1^2 - a1", "3*a1^3"}), form(0, 2, {{{}, "sin(x1) + x2^2"}})},
        {exprs(1, {"cos(pi*a1)", "sin(pi*a1)"}), form(0, 2, {{{}, "exp(x1)*x2"}})},
        {exprs(2, {"a1^2", "a2"}), form(1, 2, {{{2}, "x1"}})},
        {exprs(2, {"a1 + a2^2", "a1*a2 - a2", "a1^3"}), form(1, 3, {{{1}, "x2*x3"}, {{3}, "x1^2"}})},
        {exprs(2, {"cos(a1) + a2", "sin(a1 + a2)"}), form(1, 2, {{{1}, "x1*x2"}, {{2}, "cos(x1)"}})},
        {exprs(2, {"sqrt(a1)", "a2"}), form(1, 2, {{{2}, "x1"}})},
        {exprs(2, {"sqrt(a1 + a2)", "a2^(3/2)", "a1"}), form(1, 3, {{{1}, "x3"}, {{2}, "x1*x2"}})},
    };
    double worst = 0, worst_cone = 0;
    int passing = 0, cones = 0;
    for (const auto& [s, w] : corpus) {
        auto r = stokes_residual(s, w);
        worst = std::max(worst, r.residual);
        if (r.verdict != Outcome::Pass) continue;
        ++passing;
        // a form one degree up on the cone: add dx_j to each term
        Form eta(w.degree() + 1, w.ambient());
        for (const auto& [index, coeff] : w.terms()) {
            MultiIndex longer = index;
            int extra = 1;
            while (std::find(longer.begin(), longer.end(), extra) != longer.end()) ++extra;
            longer.push_back(extra);
            eta.add_term(longer, coeff);
        }
        auto rc = stokes_residual(cone(s), eta);
        worst_cone = std::max(worst_cone, rc.residual);
        if (rc.verdict == Outcome::Pass) ++cones;
    }
    L.need(passing == static_cast<int>(corpus.size()) && worst <= 1e-6, "corpus residuals");
    L.need(cones == passing && worst_cone <= 1e-6, "cone residuals");
    L.note(std::to_string(passing) + "/" + std::to_string(corpus.size()) + " simplices, max residual " + sci(worst) + "; " +
           std::to_string(cones) + " cones, max residual " + sci(worst_cone) + " (tol 1e-6)");

    auto K = SimplicialComplex::from_simplices({{0, 1, 2}, {0, 2, 3}});
    RationalPoint p0{0, 0}, p1{1, 0}, p2{1, 1}, p3{0, 1};
    auto T = affine_triangulation(K, {{0, p0}, {1, p1}, {2, p2}, {3, p3}});
    auto sq = triangulated_stokes(T, form(1, 2, {{{2}, "x1"}}));
    L.need(sq.max_cancellation <= 1e-9, "diagonal cancellation");
    L.need(std::abs(sq.lhs - 1) <= 1e-8 && std::abs(sq.boundary_integral - 1) <= 1e-8, "square area");
    L.note("square: area " + fix(sq.lhs) + ", boundary " + fix(sq.boundary_integral) + ", diagonal cancellation " +
           sci(sq.max_cancellation));
    return L;
}

// 5. homology
Line homology_line() {
    Line L;
    auto betti = [](std::initializer_list<std::vector<int>> facets) {
        std::vector<Simplex> f(facets.begin(), facets.end());
        return homology(SimplicialComplex::from_simplices(f));
    };
    auto tri = betti({{0, 1}, {1, 2}, {0, 2}});
    auto sph = betti({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    std::vector<Simplex> t7;
    for (int i = 0; i < 7; ++i) {
        Simplex a{i, (i + 1) % 7, (i + 3) % 7}, b{i, (i + 2) % 7, (i + 3) % 7};
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        t7.push_back(a);
        t7.push_back(b);
    }
    auto torus = homology(SimplicialComplex::from_simplices(t7));
    auto rp2 = betti({{1, 2, 3}, {1, 2, 4}, {1, 3, 5}, {1, 4, 6}, {1, 5, 6}, {2, 3, 6}, {2, 4, 5}, {2, 5, 6}, {3, 4, 5}, {3, 4, 6}});
    using V = std::vector<std::size_t>;
    L.need(tri.betti() == V{1, 1}, "hollow triangle");
    L.need(sph.betti() == V{1, 0, 1}, "∂Δ3");
    L.need(torus.betti() == V{1, 2, 1}, "torus");
    L.need(rp2.betti() == V{1, 0, 0}, "RP2 Betti");
    L.need(rp2.groups[1].torsion == std::vector<BigInt>{2} && rp2.groups[0].torsion.empty() && rp2.groups[2].torsion.empty(),
           "RP2 torsion");
    L.note("triangle (1,1), ∂Δ3 (1,0,1), torus (1,2,1), RP2 (1,0,0) with H1 torsion Z/" +
           (rp2.groups[1].torsion.empty() ? std::string("?") : rp2.groups[1].torsion[0].str()));
    return L;
}

// 6. periods
Line periods() {
    Line L;
    Form dtheta = form(1, 2, {{{1}, "-x2/(x1^2 + x2^2)"}, {{2}, "x1/(x1^2 + x2^2)"}});
    Chain circle(1), circle_sqrt(1);
    circle.add(exprs(1, {"cos(pi*a1)", "sin(pi*a1)"}), 1);
    circle.add(exprs(1, {"cos(pi*(1 + a1))", "sin(pi*(1 + a1))"}), 1);
    circle_sqrt.add(exprs(1, {"1 - 2*a1", "sqrt(1 - (1 - 2*a1)^2)"}), 1);
    circle_sqrt.add(exprs(1, {"-1 + 2*a1", "-sqrt(1 - (-1 + 2*a1)^2)"}), 1);
    auto P = period_matrix({{"circle", circle, ""}}, {{"dtheta", dtheta}});
    const double c = P.entries[0][0].value;
    L.need(std::abs(c - 2 * std::numbers::pi) <= 1e-6, "circle period");

    Form d1 = form(1, 4, {{{1}, "-x2/(x1^2 + x2^2)"}, {{2}, "x1/(x1^2 + x2^2)"}});
    Form d2 = form(1, 4, {{{3}, "-x4/(x3^2 + x4^2)"}, {{4}, "x3/(x3^2 + x4^2)"}});
    auto a = Chain::of(exprs(1, {"cos(2*pi*a1)", "sin(2*pi*a1)", "1", "0"}));
    auto b = Chain::of(exprs(1, {"1", "0", "cos(2*pi*a1)", "sin(2*pi*a1)"}));
    auto T = period_matrix({{"a", a, ""}, {"b", b, ""}}, {{"d1", d1}, {"d2", d2}});
    double diag = std::max(std::abs(T.entries[0][0].value - 2 * std::numbers::pi), std::abs(T.entries[1][1].value - 2 * std::numbers::pi));
    double off = std::max(std::abs(T.entries[0][1].value), std::abs(T.entries[1][0].value));
    L.need(diag <= 1e-6 && off <= 1e-6, "flat torus");

    std::vector<NamedForm> exact = {{"d(xy)", form(1, 2, {{{1}, "x2"}, {{2}, "x1"}})},
                                    {"d(x^2 y + sin x)", form(1, 2, {{{1}, "2*x1*x2 + cos(x1)"}, {{2}, "x1^2"}})}};
    auto E = period_matrix({{"circle", circle, ""}, {"circle_sqrt", circle_sqrt, ""}}, exact);
    double ex = 0;
    for (const auto& row : E.entries)
        for (const auto& q : row) ex = std::max(ex, std::abs(q.value));
    auto T4 = period_matrix({{"a", a, ""}, {"b", b, ""}}, {{"d(x1 x3)", form(1, 4, {{{1}, "x3"}, {{3}, "x1"}})}});
    for (const auto& row : T4.entries) ex = std::max(ex, std::abs(row[0].value));
    L.need(ex <= 1e-6, "exact forms");

    auto cmp = compare_representatives({"circle", circle, ""}, {"circle_sqrt", circle_sqrt, ""}, {{"dtheta", dtheta}}, 2e-6);
    const double rep = cmp.entries[0].difference;
    L.need(cmp.ok && std::abs(rep) <= 2e-6, "representatives");

    auto S = period_matrix({{"sd", barycentric_subdivide(circle), ""}, {"sd_sqrt", barycentric_subdivide(circle_sqrt), ""}},
                           {{"dtheta", dtheta}});
    double sub = std::max(std::abs(S.entries[0][0].value - c), std::abs(S.entries[1][0].value - c));
    L.need(sub <= 2e-6, "subdivision");
    L.note("circle " + fix(c) + "; torus diag err " + sci(diag) + ", off-diag " + sci(off) + "; exact forms " + sci(ex) +
           "; trig vs √ " + sci(std::abs(rep)) + "; subdivision " + sci(sub));
    return L;
}

Triangulation arc(const char* x, const char* y) {
    Triangulation T(SimplicialComplex::from_simplices({{0, 1}}), 2);
    T.set_evaluator({0, 1}, exprs(1, {x, y}));
    return T;
}

// 7. gluing
Line gluing() {
    Line L;
    using V = std::vector<std::size_t>;
    auto upper = arc("cos(pi*a1)", "sin(pi*a1)");
    auto lower = arc("cos(pi*(1 + a1))", "sin(pi*(1 + a1))");
    upper.set_mark("B", {{0}, {1}});
    lower.set_mark("B", {{0}, {1}});
    auto two = glue({upper, lower, "B", {}});
    L.need(two.check.ok && two.check.max_face_gap <= 1e-10, "two-arc validity");
    L.need(homology(two.triangulation.complex()).betti() == V{1, 1}, "two-arc homology");

    auto piece = [](const char* chart, const char* x, const char* y, const char* first, const char* last) {
        CoverPiece p{chart, arc(x, y)};
        p.triangulation.set_mark(first, {{0}});
        p.triangulation.set_mark(last, {{1}});
        return p;
    };
    auto three = cover_and_triangulate({
        piece("A", "cos(2*pi*a1/3)", "sin(2*pi*a1/3)", "X3", "X2"),
        piece("B", "cos(2*pi*(1 + a1)/3)", "sin(2*pi*(1 + a1)/3)", "X1", "X3"),
        piece("C", "cos(2*pi*(2 + a1)/3)", "sin(2*pi*(2 + a1)/3)", "X2", "X1"),
    });
    auto final_check = validate(three.triangulation);
    bool steps_ok = true;
    double gap = final_check.max_face_gap;
    for (const auto& s : three.steps) {
        steps_ok = steps_ok && s.ok;
        gap = std::max(gap, s.max_face_gap);
    }
    L.need(steps_ok && final_check.ok && gap <= 1e-10, "three-arc validity");
    L.need(homology(three.triangulation.complex()).betti() == V{1, 1}, "three-arc homology");

    // B = ∅: disjoint union, nothing subdivided
    RationalPoint o{0, 0}, e{1, 0}, u{0, 1}, ue{1, 1};
    auto s1 = affine_triangulation(SimplicialComplex::from_simplices({{0, 1}}), {{0, o}, {1, e}});
    auto s2 = affine_triangulation(SimplicialComplex::from_simplices({{0, 1}}), {{0, u}, {1, ue}});
    auto disjoint = glue({s1, s2, "B", {}});
    bool same_maps = disjoint.triangulation.evaluators().size() == 2;
    for (const auto& [f, s] : disjoint.triangulation.evaluators()) {
        const auto& [side, v] = disjoint.vertex_origin.at(f[0]);
        const Triangulation& src = side == 1 ? s1 : s2;
        same_maps = same_maps && s.key() == src.evaluator({0, 1}).key();
    }
    L.need(!disjoint.subdivided_t1 && !disjoint.subdivided_t2 && same_maps &&
               homology(disjoint.triangulation.complex()).betti() == V{2, 0},
           "B = ∅");

    // X1 = X2: the output is T2
    auto K = SimplicialComplex::from_simplices({{0, 1}, {1, 2}});
    RationalPoint m{1, 1}, r{2, 0};
    auto t2 = affine_triangulation(K, {{0, o}, {1, m}, {2, r}});
    t2.set_mark("B", {{0, 1}, {1, 2}});
    auto same = glue({t2, t2, "B", {}});
    bool equal = same.triangulation.complex().count(0) == 3 && same.triangulation.complex().count(1) == 2;
    for (const auto& [f, s] : same.triangulation.evaluators()) {
        Simplex orig;
        for (int v : f) {
            equal = equal && same.vertex_origin.at(v).first == 2;
            orig.push_back(same.vertex_origin.at(v).second);
        }
        equal = equal && s.key() == t2.evaluator(orig).key();
    }
    L.need(equal, "X1 = X2");
    L.note("two arcs: gap " + sci(two.check.max_face_gap) + ", Betti (1,1); three arcs: gap " + sci(gap) +
           ", Betti (1,1); B = ∅ and X1 = X2 exact");
    return L;
}

std::string capture(const std::string& cmd, int& status) {
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    status = pclose(p);
    return out;
}

// 8. determinism of the CLI
Line determinism(const std::string& exe, const std::string& data) {
    Line L;
    const std::vector<std::string> commands = {
        "check-volume " + data + "/volume.json --simplex sqrt_curve",
        "check-volume " + data + "/volume.json --simplex wiggle",
        "check-stokes --tol 1e-6 " + data + "/circle.json --chain gamma --form omega",
        "check-stokes " + data + "/circle.json --chain disk --form xdy",
        "check-stokes " + data + "/square.json --triangulation square --form xdy",
        "cone " + data + "/circle.json --chain gamma",
        "subdivide " + data + "/circle.json --chain gamma",
        "homology " + data + "/torus.json --complex T7",
        "homology " + data + "/torus.json --complex RP2",
        "periods " + data + "/circle.json --cycles gamma,gamma_sqrt --forms dtheta,exact",
        "periods " + data + "/torus.json --cycles alpha,beta --forms dtheta1,dtheta2 --output csv",
        "glue " + data + "/arc_upper.json " + data + "/arc_lower.json",
    };
    int identical = 0;
    for (const auto& c : commands) {
        for (const char* jobs : {"1", "4"}) {
            const std::string cmd = "'" + exe + "' " + c + " --deterministic --jobs " + jobs + " 2>&1";
            int s1 = 0, s2 = 0;
            const std::string a = capture(cmd, s1), b = capture(cmd, s2);
            const bool same = !a.empty() && a == b && s1 == s2;
            L.need(same, c + " (jobs " + jobs + ")");
            identical += same;
        }
    }
    L.note(std::to_string(identical) + "/" + std::to_string(2 * commands.size()) + " command runs byte-identical");
    return L;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <periodlab executable> <data directory>\n";
        return 2;
    }
    const std::string exe = argv[1], data = argv[2];
    struct Criterion {
        const char* name;
        std::function<Line()> run;
    };
    std::vector<Criterion> criteria = {
        {"cone/prism identities", cone_prism},
        {"finite volume", finite_volume},
        {"A + B decomposition", decomposition},
        {"Stokes", stokes},
        {"homology", homology_line},
        {"period pairing", periods},
        {"gluing", gluing},
        {"determinism", [&] { return determinism(exe, data); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Line L;
        try {
            L = criteria[i].run();
        } catch (const std::exception& e) {
            L.ok = false;
            L.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !L.ok;
        std::printf("%s %zu %s: %s [%.1fs]\n", L.ok ? "PASS" : "FAIL", i + 1, criteria[i].name, L.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
