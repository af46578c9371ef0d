#include "doctest.h"

#include "periodlab/error.hpp"
#include "periodlab/homology.hpp"

#include <random>

using namespace periodlab;

namespace {

SimplicialComplex torus7() {
    std::vector<Simplex> t;
    for (int i = 0; i < 7; ++i) {
        t.push_back({i, (i + 1) % 7, (i + 3) % 7});
        t.push_back({i, (i + 2) % 7, (i + 3) % 7});
    }
    return SimplicialComplex::from_simplices(t);
}

SimplicialComplex rp2() {
    return SimplicialComplex::from_simplices({{1, 2, 3}, {1, 2, 4}, {1, 3, 5}, {1, 4, 6}, {1, 5, 6},
                                              {2, 3, 6}, {2, 4, 5}, {2, 5, 6}, {3, 4, 5}, {3, 4, 6}});
}

SimplicialComplex hollow_triangle() { return SimplicialComplex::from_simplices({{0, 1}, {1, 2}, {0, 2}}); }

SimplicialComplex boundary_tetrahedron() {
    return SimplicialComplex::from_simplices({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n, int range) {
    std::uniform_int_distribution<int> dist(-range, range);
    IntMatrix M(m, n);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) M(r, c) = dist(rng) * (rng() % 3 == 0 ? 0 : 1);
    return M;
}

IntMatrix diag(const SNFResult& s, std::size_t m, std::size_t n) {
    IntMatrix D(m, n);
    for (std::size_t i = 0; i < s.diagonal.size(); ++i) D(i, i) = s.diagonal[i];
    return D;
}

std::vector<std::size_t> betti(const SimplicialComplex& K) { return homology(K).betti(); }

}  // namespace

TEST_CASE("complex closure and facets") {
    auto K = SimplicialComplex::from_simplices({{2, 0, 1}});
    CHECK(K.dimension() == 2);
    CHECK(K.count(0) == 3);
    CHECK(K.count(1) == 3);
    CHECK(K.facets() == std::vector<Simplex>{{0, 1, 2}});
    CHECK(K.contains({0, 2}));
    CHECK_THROWS_AS(SimplicialComplex::from_simplices({{1, 1, 2}}), InputError);
    CHECK(torus7().count(1) == 21);
    CHECK(torus7().count(2) == 14);
    CHECK(torus7().euler_characteristic() == 0);
    CHECK(rp2().euler_characteristic() == 1);
}

TEST_CASE("boundary matrices") {
    auto H = hollow_triangle();
    IntMatrix d1 = boundary_matrix(H, 1);
    CHECK(d1.rows() == 3);
    CHECK(d1.cols() == 3);
    for (std::size_t c = 0; c < 3; ++c) CHECK(d1(0, c) + d1(1, c) + d1(2, c) == 0);
    auto D = SimplicialComplex::from_simplices({{0, 1, 2}});
    CHECK((boundary_matrix(D, 1) * boundary_matrix(D, 2)).is_zero());
    CHECK_THROWS_AS(boundary_matrix(D, 0), InputError);

    auto T = torus7();
    IntMatrix d2 = boundary_matrix(T, 2);
    CHECK(d2.rows() == 21);
    CHECK(d2.cols() == 14);
    for (std::size_t r = 0; r < 21; ++r) {
        int nonzero = 0;
        for (std::size_t c = 0; c < 14; ++c) {
            if (d2(r, c) != 0) {
                ++nonzero;
                CHECK(abs(d2(r, c)) == 1);
            }
        }
        CHECK(nonzero == 2);
    }
}

TEST_CASE("boundary of boundary vanishes") {
    for (const auto& K : {torus7(), rp2(), boundary_tetrahedron(),
                          SimplicialComplex::from_simplices({{0, 1, 2, 3, 4}}),
                          barycentric_subdivision(rp2()).complex}) {
        for (int d = 2; d <= K.dimension(); ++d) CHECK((boundary_matrix(K, d - 1) * boundary_matrix(K, d)).is_zero());
    }
}

TEST_CASE("smith normal form examples") {
    IntMatrix M(2, 2);
    M(0, 0) = 2;
    M(1, 1) = 3;
    auto s = smith_normal_form(M);
    CHECK(s.diagonal == std::vector<BigInt>{1, 6});

    auto z = smith_normal_form(IntMatrix(3, 2));
    CHECK(z.diagonal == std::vector<BigInt>{0, 0});
    CHECK(z.rank == 0);

    auto h = smith_normal_form(boundary_matrix(hollow_triangle(), 1));
    CHECK(h.diagonal == std::vector<BigInt>{1, 1, 0});
}

TEST_CASE("smith normal form property") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t m = 1 + rng() % 6, n = 1 + rng() % 6;
        IntMatrix M = random_matrix(rng, m, n, 9);
        auto s = smith_normal_form(M);
        CHECK(s.U * M * s.V == diag(s, m, n));
        CHECK(s.U * s.U_inv == IntMatrix::identity(m));
        CHECK(s.V * s.V_inv == IntMatrix::identity(n));
        CHECK(abs(determinant(s.U)) == 1);
        CHECK(abs(determinant(s.V)) == 1);
        for (std::size_t i = 0; i < s.diagonal.size(); ++i) {
            CHECK(s.diagonal[i] >= 0);
            if (i + 1 < s.diagonal.size() && s.diagonal[i] != 0) CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
            if (i + 1 < s.diagonal.size() && s.diagonal[i] == 0) CHECK(s.diagonal[i + 1] == 0);
        }
    }
}

TEST_CASE("classical homology") {
    CHECK(betti(hollow_triangle()) == std::vector<std::size_t>{1, 1});
    CHECK(betti(boundary_tetrahedron()) == std::vector<std::size_t>{1, 0, 1});
    CHECK(betti(torus7()) == std::vector<std::size_t>{1, 2, 1});
    auto h = homology(rp2());
    CHECK(h.betti() == std::vector<std::size_t>{1, 0, 0});
    CHECK(h.groups[0].torsion.empty());
    CHECK(h.groups[1].torsion == std::vector<BigInt>{2});
    CHECK(h.groups[2].torsion.empty());
    // two disjoint circles
    auto two = SimplicialComplex::from_simplices({{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    CHECK(betti(two) == std::vector<std::size_t>{2, 2});
}

TEST_CASE("representatives are cycles") {
    for (const auto& K : {hollow_triangle(), boundary_tetrahedron(), torus7(), rp2()}) {
        auto h = homology(K);
        for (const auto& g : h.groups) {
            for (const auto& z : g.free_generators) CHECK(is_cycle(K, g.degree, z));
            for (const auto& z : g.torsion_generators) CHECK(is_cycle(K, g.degree, z));
        }
    }
    // the torsion class of RP² is the generator: twice it bounds
    auto K = rp2();
    auto z = homology(K).groups[1].torsion_generators.at(0);
    CHECK(chain_string(K, 1, z) != "0");
}

TEST_CASE("betti numbers survive subdivision; euler characteristic matches") {
    for (const auto& K : {hollow_triangle(), boundary_tetrahedron(), torus7(), rp2()}) {
        auto b = betti(K);
        auto sd = barycentric_subdivision(K);
        CHECK(betti(sd.complex) == b);
        CHECK(sd.complex.euler_characteristic() == K.euler_characteristic());
        long long alt = 0;
        for (std::size_t d = 0; d < b.size(); ++d) alt += (d % 2 ? -1 : 1) * static_cast<long long>(b[d]);
        CHECK(alt == K.euler_characteristic());
    }
    CHECK(homology(barycentric_subdivision(rp2()).complex).groups[1].torsion == std::vector<BigInt>{2});
}

TEST_CASE("random complexes: euler characteristic equals alternating betti sum") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Simplex> gens;
        int nv = 4 + static_cast<int>(rng() % 5);
        for (int k = 0; k < 6; ++k) {
            Simplex s;
            for (int v = 0; v < nv; ++v)
                if (rng() % 3 == 0) s.push_back(v);
            if (s.size() > 4) s.resize(4);
            if (!s.empty()) gens.push_back(s);
        }
        if (gens.empty()) continue;
        auto K = SimplicialComplex::from_simplices(gens);
        auto b = betti(K);
        long long alt = 0;
        for (std::size_t d = 0; d < b.size(); ++d) alt += (d % 2 ? -1 : 1) * static_cast<long long>(b[d]);
        CHECK(alt == K.euler_characteristic());
    }
}
