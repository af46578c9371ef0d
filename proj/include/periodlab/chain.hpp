#pragma once

// Integer chains of singular simplices.

#include "periodlab/simplex.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace periodlab {

class Chain {
public:
    struct Term {
        SingularSimplex simplex;
        std::int64_t coeff;
    };

    explicit Chain(int degree = 0) : degree_(degree) {}
    static Chain of(const SingularSimplex& s, std::int64_t coeff = 1);

    int degree() const { return degree_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Adds coeff * s, merging with an equal simplex; zero terms are dropped.
    void add(const SingularSimplex& s, std::int64_t coeff);
    void add(const Chain& other, std::int64_t scale = 1);

    /// Terms in key order.
    std::vector<Term> terms() const;
    std::int64_t coefficient(const SingularSimplex& s) const;

    Chain operator-() const;
    friend Chain operator+(Chain a, const Chain& b) {
        a.add(b, 1);
        return a;
    }
    friend Chain operator-(Chain a, const Chain& b) {
        a.add(b, -1);
        return a;
    }
    friend Chain operator*(std::int64_t k, const Chain& c);
    friend bool operator==(const Chain& a, const Chain& b);

    /// Ambient dimension of the terms (0 for the empty chain).
    int ambient() const;

private:
    int degree_;
    std::map<std::string, Term> terms_;
};

/// ∂σ = Σ_i (−1)^i σ ∘ face_map(d, i), extended linearly.
Chain boundary(const SingularSimplex& s);
Chain boundary(const Chain& c);

/// Termwise cone.
Chain cone(const Chain& c);

/// First barycentric subdivision of the identity of Δ_d as signed affine maps
/// Δ_d → Δ_d. Sd(σ) = b * Sd(∂σ) with the barycenter b as the new vertex 0.
const std::vector<std::pair<AffineMap, int>>& subdivision_maps(int d);

Chain barycentric_subdivide(const SingularSimplex& s);
Chain barycentric_subdivide(const Chain& c);

/// Sample points used for geometric comparisons: vertices, face barycenters
/// and a few interior points of Δ_d.
std::vector<std::vector<double>> comparison_grid(int d);

/// Whether two simplices agree at every point of the comparison grid.
bool geometrically_equal(const SingularSimplex& a, const SingularSimplex& b, double tol = 1e-12);

/// Whether a − b reduces to zero after merging geometrically equal terms.
bool chains_geometrically_equal(const Chain& a, const Chain& b, double tol = 1e-12);

}  // namespace periodlab
