#include "doctest.h"
#include "generators.hpp"

#include "periodlab/cubature.hpp"
#include "periodlab/error.hpp"
#include "periodlab/quad.hpp"

#include <cmath>
#include <numbers>

using namespace periodlab;

namespace {

SingularSimplex exprs(int d, std::initializer_list<const char*> comps) {
    std::vector<Expr> e;
    for (const char* c : comps) e.push_back(parse(c, d));
    return SingularSimplex::from_exprs(d, e);
}

Form top_form(int n, const char* coeff = "1") {
    Form w(n, n);
    MultiIndex idx;
    for (int i = 1; i <= n; ++i) idx.push_back(i);
    w.add_term(idx, parse(coeff, n));
    return w;
}

Form dx(int n, int i, const char* coeff = "1") {
    Form w(1, n);
    w.add_term({i}, parse(coeff, n));
    return w;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("conical product rule is exact on monomials up to degree 2n-1") {
    for (int d = 1; d <= 3; ++d) {
        const auto& r = conical_product_rule(d, 4);
        double wsum = 0;
        for (double w : r.weights) {
            CHECK(w > 0);
            wsum += w;
        }
        CHECK(wsum == doctest::Approx(1 / factorial(d)).epsilon(1e-14));
        for (double x : r.nodes) CHECK((x > 0 && x < 1));
    }
    // ∫_{Δ_2} x^a y^b = a! b! / (a + b + 2)!
    const auto& r = conical_product_rule(2, 4);
    for (int a = 0; a <= 7; ++a) {
        for (int b = 0; a + b <= 7; ++b) {
            double s = 0;
            for (std::size_t q = 0; q < r.size(); ++q)
                s += r.weights[q] * std::pow(r.nodes[2 * q], a) * std::pow(r.nodes[2 * q + 1], b);
            CHECK(s == doctest::Approx(factorial(a) * factorial(b) / factorial(a + b + 2)).epsilon(1e-13));
        }
    }
}

TEST_CASE("simplex volumes") {
    for (int d = 1; d <= 4; ++d) {
        auto r = integrate_simplex(SingularSimplex::identity(d), top_form(d));
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(1 / factorial(d)).epsilon(1e-12));
    }
}

TEST_CASE("square-root edge: integral of dy over (t, sqrt t)") {
    auto s = exprs(1, {"a1", "sqrt(a1)"});
    CHECK(s.boundary_singular());
    QuadOptions o;
    o.tol = 1e-10;
    auto r = integrate_simplex(s, dx(2, 2), o);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 1.0) <= 1e-8);
}

TEST_CASE("squared coordinate: dx^dy over (a^2, b)") {
    auto s = exprs(2, {"a1^2", "a2"});
    auto r = integrate_simplex(s, top_form(2));
    CHECK(r.converged);
    CHECK(std::abs(r.value - 1.0 / 3) <= 1e-8);
}

TEST_CASE("domain errors and degree checks") {
    auto s = exprs(1, {"a1", "log(a1 - 1/2)"});
    CHECK_THROWS_AS(integrate_simplex(s, dx(2, 2)), DomainError);
    CHECK_THROWS_AS(integrate_simplex(SingularSimplex::identity(2), dx(2, 1)), InputError);
}

TEST_CASE("point simplex integrates by evaluation") {
    Form f(0, 2);
    f.add_term({}, parse("a1 + 3*a2", 2));
    auto r = integrate_simplex(SingularSimplex::point({Rational(1), Rational(2)}), f);
    CHECK(r.value == doctest::Approx(7));
}

TEST_CASE("finite volume verdicts") {
    SUBCASE("polynomial map") {
        auto rep = finite_volume_check(exprs(2, {"a1^2 + a2", "a1*a2", "a2^3 - a1"}));
        CHECK(rep.verdict == Verdict::Yes);
        CHECK(rep.entries.size() == 3);
    }
    SUBCASE("square root") {
        auto rep = finite_volume_check(exprs(1, {"a1", "sqrt(a1)"}));
        CHECK(rep.verdict == Verdict::Yes);
        REQUIRE(rep.entries.size() == 2);
        CHECK(std::abs(rep.entries[0].result.value - 1) <= 1e-6);
        CHECK(std::abs(rep.entries[1].result.value - 1) <= 1e-6);
    }
    SUBCASE("t sin(1/t) has infinite length") {
        auto rep = finite_volume_check(exprs(1, {"a1", "a1*sin(1/a1)"}));
        REQUIRE(rep.entries.size() == 2);
        CHECK(rep.entries[0].verdict == Verdict::Yes);
        CHECK(rep.entries[1].verdict == Verdict::No);
        CHECK(rep.verdict == Verdict::No);
    }
}

TEST_CASE("prism integrals") {
    Expr f = parse("1 - a1", 1);
    SUBCASE("constant map sweeps a segment") {
        auto s = exprs(1, {"1", "0"});
        auto r = integrate_prism(s, f, top_form(2));
        CHECK(std::abs(r.value) <= 1e-12);
    }
    SUBCASE("half disk") {
        auto s = exprs(1, {"cos(pi*a1)", "sin(pi*a1)"});
        auto r = integrate_prism(s, f, top_form(2));
        CHECK(r.converged);
        CHECK(std::abs(std::abs(r.value) - std::numbers::pi / 2) <= 1e-6);
        auto c = integrate_simplex(cone(s), top_form(2));
        CHECK(std::abs(r.value - c.value) <= 1e-9);
    }
    SUBCASE("agrees with the cone on random polynomial maps") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 6; ++trial) {
            const int d = 1 + trial % 2;
            auto s = testing::random_smooth_simplex(rng, d, 3);
            Form w(d + 1, 3);
            if (d == 1) {
                w.add_term({1, 2}, testing::random_poly(rng, 3));
                w.add_term({2, 3}, testing::random_poly(rng, 3));
            } else {
                w.add_term({1, 2, 3}, testing::random_poly(rng, 3));
            }
            auto p = integrate_prism(s, f, w);
            auto c = integrate_simplex(cone(s), w);
            CHECK(std::abs(p.value - c.value) <= p.error_estimate + c.error_estimate + 1e-8 * (1 + std::abs(c.value)));
        }
    }
}

TEST_CASE("linearity") {
    std::mt19937_64 rng(3);
    testing::ExprGen gen(5, 2);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = testing::random_smooth_simplex(rng, 2, 2);
        Form w1(2, 2), w2(2, 2);
        w1.add_term({1, 2}, gen.gen(2));
        w2.add_term({1, 2}, gen.gen(2));
        QuadResult a, b, ab;
        try {
            a = integrate_simplex(s, w1);
            b = integrate_simplex(s, w2);
            ab = integrate_simplex(s, w1 + w2);
        } catch (const DomainError&) {
            continue;
        }
        double tol = a.error_estimate + b.error_estimate + ab.error_estimate + a.tolerance + b.tolerance + ab.tolerance;
        CHECK(std::abs(ab.value - a.value - b.value) <= tol);
    }
}

TEST_CASE("subdivision invariance") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 6; ++trial) {
        const int d = 1 + trial % 2;
        auto s = testing::random_smooth_simplex(rng, d, d);
        Form w = top_form(d, d == 1 ? "1 + a1^2" : "a1 - a2 + 1");
        auto whole = integrate_simplex(s, w);
        auto parts = integrate_chain(barycentric_subdivide(s), w);
        CHECK(std::abs(whole.value - parts.value) <= 10 * (whole.tolerance + parts.tolerance));
    }
    auto s = exprs(1, {"a1", "sqrt(a1)"});
    auto whole = integrate_simplex(s, dx(2, 2));
    auto parts = integrate_chain(barycentric_subdivide(s), dx(2, 2));
    CHECK(std::abs(whole.value - parts.value) <= 10 * (whole.tolerance + parts.tolerance));
}

TEST_CASE("cone stability of finite volume") {
    std::vector<SingularSimplex> corpus = {
        exprs(1, {"a1", "sqrt(a1)"}),
        exprs(1, {"cos(pi*a1)", "sin(pi*a1)"}),
        exprs(1, {"a1^2", "a1^3"}),
        exprs(2, {"a1^2", "a2"}),
    };
    for (const auto& s : corpus) {
        if (finite_volume_check(s).verdict != Verdict::Yes) continue;
        CHECK(finite_volume_check(cone(s)).verdict == Verdict::Yes);
    }
}

TEST_CASE("reparametrization invariance") {
    // Orientation preserving self maps of Δ_1 and Δ_2.
    auto s1 = exprs(1, {"a1", "sqrt(a1)"});
    for (const char* rho : {"a1^2", "(3*a1 - a1^3)/2", "sin(pi*a1/2)"}) {
        std::vector<Expr> comps;
        Expr r = parse(rho, 1);
        comps.push_back(r);
        comps.push_back(sqrt(r));
        auto sr = SingularSimplex::from_exprs(1, comps);
        auto a = integrate_simplex(s1, dx(2, 2, "a1 + 1"));
        auto b = integrate_simplex(sr, dx(2, 2, "a1 + 1"));
        CHECK(std::abs(a.value - b.value) <= a.tolerance + b.tolerance + a.error_estimate + b.error_estimate);
    }
    auto s2 = exprs(2, {"a1 + a2^2", "a2 + a1*a2"});
    // (a, b) ↦ (a + a b, b - a b) fixes the vertices of Δ_2 and preserves orientation
    auto sr = exprs(2, {"(a1 + a1*a2) + (a2 - a1*a2)^2", "(a2 - a1*a2) + (a1 + a1*a2)*(a2 - a1*a2)"});
    Form w = top_form(2, "1 + a1*a2");
    auto a = integrate_simplex(s2, w);
    auto b = integrate_simplex(sr, w);
    CHECK(std::abs(a.value - b.value) <= a.tolerance + b.tolerance + a.error_estimate + b.error_estimate);
}

TEST_CASE("parallel chains give identical results") {
    auto s = exprs(2, {"a1^2", "a2"});
    Chain c = barycentric_subdivide(s);
    QuadOptions o1, o4;
    o4.jobs = 4;
    auto a = integrate_chain(c, top_form(2), o1);
    auto b = integrate_chain(c, top_form(2), o4);
    CHECK(a.value == b.value);
    CHECK(a.error_estimate == b.error_estimate);
}
