#include "doctest.h"
#include "generators.hpp"

#include "periodlab/chain.hpp"
#include "periodlab/error.hpp"

#include <cmath>
#include <numbers>

using namespace periodlab;

namespace {

RationalPoint rp(std::initializer_list<Rational> xs) { return RationalPoint(xs); }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<double> fd_jacobian(const SingularSimplex& s, std::vector<double> x, double h = 1e-6) {
    const int n = s.ambient();
    std::vector<double> J(static_cast<std::size_t>(n) * s.dim());
    for (int c = 0; c < s.dim(); ++c) {
        auto xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        auto vp = s(xp), vm = s(xm);
        for (int r = 0; r < n; ++r) J[static_cast<std::size_t>(c) * n + r] = (vp[r] - vm[r]) / (2 * h);
    }
    return J;
}

SingularSimplex upper_arc() { return SingularSimplex::from_exprs(1, {parse("cos(pi*t)", 1), parse("sin(pi*t)", 1)}); }
SingularSimplex lower_arc() {
    return SingularSimplex::from_exprs(1, {parse("cos(pi + pi*t)", 1), parse("sin(pi + pi*t)", 1)});
}

}  // namespace

TEST_CASE("face_map: vertex conventions") {
    std::vector<double> none;
    CHECK(face_map(1, 0).apply_exact({}) == rp({1}));
    CHECK(face_map(1, 1).apply_exact({}) == rp({0}));
    AffineMap f = face_map(2, 0);
    CHECK(f.apply_exact(rp({Rational(3, 10)})) == rp({Rational(7, 10), Rational(3, 10)}));
    CHECK(face_map(2, 1).apply_exact(rp({Rational(1, 4)})) == rp({0, Rational(1, 4)}));
    CHECK(face_map(2, 2).apply_exact(rp({Rational(1, 4)})) == rp({Rational(1, 4), 0}));
    CHECK_THROWS_AS(face_map(2, 3), InputError);
    CHECK_THROWS_AS(face_map(0, 0), InputError);
}

TEST_CASE("boundary: sign convention and merging") {
    RationalPoint P = rp({1, 2}), Q = rp({3, Rational(-1, 2)});
    SingularSimplex seg = SingularSimplex::affine({P, Q});
    Chain expected = Chain::of(SingularSimplex::point(Q)) - Chain::of(SingularSimplex::point(P));
    CHECK(boundary(seg) == expected);

    SingularSimplex tri = SingularSimplex::from_exprs(2, {parse("a1^2 + a2", 2), parse("sin(a1*a2)", 2)});
    CHECK(boundary(boundary(tri)).empty());
    CHECK_THROWS_AS(boundary(SingularSimplex::point(P)), InputError);
}

TEST_CASE("boundary: semicircle arcs form a cycle") {
    Chain gamma = Chain::of(upper_arc()) + Chain::of(lower_arc());
    Chain db = boundary(gamma);
    CHECK(db.size() == 4);
    CHECK(chains_geometrically_equal(db, Chain(0)));
    // A single arc is not a cycle.
    CHECK(!chains_geometrically_equal(boundary(upper_arc()), Chain(0)));
}

TEST_CASE("property: boundary of boundary vanishes exactly") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        int d = 2 + static_cast<int>(rng() % 3);
        Chain c(d);
        for (int k = 0; k < 3; ++k) {
            SingularSimplex s = testing::random_smooth_simplex(rng, d, 2);
            if (rng() % 2) s = cone(testing::random_smooth_simplex(rng, d - 1, 2));
            if (rng() % 3 == 0) s = barycentric_subdivide(s).terms().front().simplex;
            c.add(s, static_cast<std::int64_t>(rng() % 5) - 2);
        }
        if (c.empty()) continue;
        CHECK(boundary(boundary(c)).empty());
    }
}

TEST_CASE("cone: small cases") {
    SingularSimplex p = SingularSimplex::point(rp({2, -1}));
    SingularSimplex seg = cone(p);
    CHECK(seg.dim() == 1);
    std::vector<double> x{0.25};
    CHECK(seg(x) == std::vector<double>{0.5, -0.25});

    SingularSimplex id1 = SingularSimplex::from_exprs(1, {parse("a1", 1)});
    SingularSimplex c = cone(id1);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        auto a = testing::simplex_point(rng, 2);
        CHECK(std::abs(c(a)[0] - a[1]) <= 1e-15);
    }
    // Vertex 0 goes to the origin, the opposite face is σ.
    std::vector<double> origin{0.0, 0.0};
    CHECK(c(origin)[0] == 0.0);
    CHECK(geometrically_equal(face(c, 0), id1));
}

TEST_CASE("cone: homotopy identity on chains") {
    std::mt19937_64 rng(41);
    // d = 0: ∂ĥσ = σ − [origin].
    SingularSimplex p = SingularSimplex::point(rp({Rational(1, 3), 5}));
    Chain lhs0 = boundary(cone(p));
    Chain rhs0 = Chain::of(p) - Chain::of(SingularSimplex::point(rp({0, 0})));
    CHECK(chains_geometrically_equal(lhs0, rhs0));
    for (int d = 1; d <= 3; ++d) {
        for (int trial = 0; trial < 5; ++trial) {
            SingularSimplex s = testing::random_smooth_simplex(rng, d, 3);
            Chain lhs = boundary(cone(s));
            Chain rhs = Chain::of(s) - cone(boundary(s));
            CHECK(chains_geometrically_equal(lhs, rhs));
            // The identity fails with the opposite sign.
            CHECK(!chains_geometrically_equal(lhs, Chain::of(s) + cone(boundary(s))));
        }
    }
}

TEST_CASE("cone: continuity at the cone vertex") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        int d = 1 + trial % 3;
        SingularSimplex s = testing::random_smooth_simplex(rng, d, 2);
        double bound = 0;
        for (const auto& g : comparison_grid(d))
            for (double v : s(g)) bound = std::max(bound, std::abs(v));
        SingularSimplex c = cone(s);
        for (int k = 1; k <= 40; ++k) {
            auto a = testing::simplex_point(rng, d + 1);
            double scale = std::ldexp(1.0, -k);
            double A = 0;
            for (double& v : a) A += (v *= scale);
            auto val = c(a);
            // The max over the grid underestimates max|σ|; allow a margin.
            for (double v : val) CHECK(std::abs(v) <= A * (4 * bound + 10));
        }
    }
}

TEST_CASE("prism: q and its inverse") {
    std::vector<double> b1{0.3};
    auto a = prism_q(0.0, b1);
    CHECK(std::abs(a[0] - 0.7) <= 1e-15);
    CHECK(a[1] == 0.3);
    std::vector<double> b2{0.2, 0.1};
    auto top = prism_q(1.0, b2);
    CHECK(top == std::vector<double>{0.0, 0.0, 0.0});
    auto back = prism_inverse(prism_q(0.4, b2));
    CHECK(std::abs(back[0] - 0.4) <= 1e-15);
    CHECK(std::abs(back[1] - 0.2) <= 1e-15);
    CHECK(std::abs(back[2] - 0.1) <= 1e-15);
    std::vector<double> zero{0.0, 0.0};
    CHECK_THROWS_AS(prism_inverse(zero), DomainError);
}

TEST_CASE("property: prism equals cone after q") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    for (int d = 1; d <= 3; ++d) {
        SingularSimplex s = testing::random_smooth_simplex(rng, d, 2);
        SingularSimplex c = cone(s);
        Prism bar(s, parse("1 - t", 1));
        for (int k = 0; k < 500; ++k) {
            double t = u(rng);
            auto b = testing::simplex_point(rng, d);
            std::vector<double> tb{t};
            tb.insert(tb.end(), b.begin(), b.end());
            std::vector<double> pv(2);
            bar.eval(tb, pv);
            worst = std::max(worst, max_abs_diff(pv, c(prism_q(t, b))));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("jacobians match finite differences") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        int d = 1 + trial % 3;
        SingularSimplex s = testing::random_smooth_simplex(rng, d, 2);
        std::vector<SingularSimplex> cases{s, cone(s), face(cone(s), 1), barycentric_subdivide(s).terms().back().simplex};
        Prism bar(s, parse("(1 - t)^2 + t/3", 1));
        for (const auto& [alpha, sign] : prism_decomposition(d)) cases.push_back(bar.piece(alpha));
        for (const auto& c : cases) {
            auto x = testing::simplex_point(rng, c.dim());
            auto J = c.jacobian(x);
            auto F = fd_jacobian(c, x);
            for (std::size_t i = 0; i < J.size(); ++i) CHECK(std::abs(J[i] - F[i]) <= 1e-6 * (1 + std::abs(J[i])));
        }
    }
}

TEST_CASE("prism decomposition covers the prism") {
    for (int d = 1; d <= 3; ++d) {
        auto pieces = prism_decomposition(d);
        CHECK(pieces.size() == static_cast<std::size_t>(d + 1));
        // Volumes |det|/(d+1)! add up to vol(Δ_d) = 1/d!.
        for (const auto& [m, s] : pieces) CHECK(s != 0);
    }
    // [0,1] x Δ_1 as two triangles: the signed boundary is the square's boundary.
    auto pieces = prism_decomposition(1);
    Chain sq(2);
    for (const auto& [m, s] : pieces) sq.add(SingularSimplex::affine(m), s);
    Chain expected(1);
    auto seg = [](RationalPoint a, RationalPoint b) { return SingularSimplex::affine({a, b}); };
    expected.add(seg(rp({0, 0}), rp({1, 0})), 1);
    expected.add(seg(rp({1, 0}), rp({1, 1})), 1);
    expected.add(seg(rp({0, 1}), rp({1, 1})), -1);
    expected.add(seg(rp({0, 0}), rp({0, 1})), -1);
    CHECK(boundary(sq) == expected);
}

TEST_CASE("barycentric subdivision") {
    SingularSimplex unit = SingularSimplex::identity(1);
    Chain sd = barycentric_subdivide(unit);
    Chain expected = Chain::of(SingularSimplex::affine({rp({Rational(1, 2)}), rp({1})})) -
                     Chain::of(SingularSimplex::affine({rp({Rational(1, 2)}), rp({0})}));
    CHECK(sd == expected);
    CHECK(barycentric_subdivide(SingularSimplex::identity(2)).size() == 6);
    CHECK(barycentric_subdivide(SingularSimplex::identity(3)).size() == 24);
    // Orientation signs: every term, weighted by its sign, is orientation preserving.
    for (int d = 1; d <= 3; ++d) {
        for (const auto& [m, s] : subdivision_maps(d)) CHECK(m.orientation() == s);
    }
}

TEST_CASE("property: subdivision commutes with boundary") {
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 20; ++trial) {
        int d = 1 + trial % 3;
        Chain c(d);
        for (int k = 0; k < 3; ++k) {
            SingularSimplex s = testing::random_smooth_simplex(rng, d, 2);
            if (k == 1) s = cone(testing::random_smooth_simplex(rng, d - 1, 2));
            c.add(s, static_cast<std::int64_t>(rng() % 7) - 3);
        }
        CHECK(boundary(barycentric_subdivide(c)) == barycentric_subdivide(boundary(c)));
    }
}

TEST_CASE("continuity spot check") {
    SingularSimplex root = SingularSimplex::from_exprs(1, {parse("t", 1), parse("sqrt(t)", 1)});
    CHECK(root.boundary_singular());
    CHECK(check_continuity(root).ok);
    CHECK(check_continuity(cone(root)).ok);
    SingularSimplex osc = SingularSimplex::from_exprs(1, {parse("t", 1), parse("t*sin(1/t)", 1)});
    CHECK(!check_continuity(osc).ok);
    SingularSimplex smooth = SingularSimplex::from_exprs(2, {parse("a1*a2", 2), parse("exp(a1)", 2)});
    CHECK(!smooth.boundary_singular());
    CHECK(check_continuity(smooth).ok);
}
