#pragma once

// Geometric triangulations: a simplicial complex with one evaluator per
// facet, optional orientations, chart tags and named marked subcomplexes.

#include "periodlab/complex.hpp"
#include "periodlab/simplex.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace periodlab {

class Triangulation {
public:
    Triangulation() = default;
    Triangulation(SimplicialComplex K, int ambient);

    const SimplicialComplex& complex() const { return K_; }
    int ambient() const { return ambient_; }

    /// Evaluator of a facet: vertex j of Δ_d goes to facet vertex j (sorted order).
    void set_evaluator(const Simplex& facet, SingularSimplex s);
    bool has_evaluator(const Simplex& facet) const { return evaluators_.count(facet) > 0; }
    const std::map<Simplex, SingularSimplex>& evaluators() const { return evaluators_; }
    /// Any simplex, through the first facet containing it.
    SingularSimplex evaluator(const Simplex& s) const;
    /// Image of a vertex.
    std::vector<double> vertex_position(int v) const;

    void set_orientation(const Simplex& facet, int sign);
    int orientation(const Simplex& facet) const;
    void set_chart(const Simplex& facet, std::string chart);
    std::string chart(const Simplex& facet) const;
    const std::map<Simplex, std::string>& charts() const { return charts_; }

    /// Stores the closure of `simplices` under faces.
    void set_mark(const std::string& name, const std::vector<Simplex>& simplices);
    const std::map<std::string, std::set<Simplex>>& marks() const { return marks_; }
    const std::set<Simplex>& mark(const std::string& name) const;
    bool has_mark(const std::string& name) const { return marks_.count(name) > 0; }
    void erase_mark(const std::string& name) { marks_.erase(name); }

private:
    void check_facet(const Simplex& facet) const;

    SimplicialComplex K_;
    int ambient_ = 0;
    std::map<Simplex, SingularSimplex> evaluators_;
    std::map<Simplex, int> orientation_;
    std::map<Simplex, std::string> charts_;
    std::map<std::string, std::set<Simplex>> marks_;
};

/// Affine map from Δ_k onto the face `face` of the facet `facet` (vertex order kept).
AffineMap face_inclusion(const Simplex& face, const Simplex& facet);

/// Triangulation whose facets are the affine simplices on the given vertex positions.
Triangulation affine_triangulation(const SimplicialComplex& K, const std::map<int, RationalPoint>& positions);

struct TriangulationCheck {
    bool ok = true;
    bool faces_compatible = true;
    bool injective = true;
    double max_face_gap = 0;
    double min_separation = 0;  ///< smallest image distance between distinct sample points
    std::vector<std::string> problems;
};

/// Face compatibility on the comparison grid (≤ face_tol) and an injectivity
/// sample: distinct points of |K| on a barycentric grid of resolution
/// `resolution` must not map closer than `collision_tol`. Sampled, not certified.
TriangulationCheck validate(const Triangulation& T, double face_tol = 1e-10, int resolution = 8,
                            double collision_tol = 1e-9);

/// First barycentric subdivision; evaluators are composed with the affine
/// flag simplices, marks and charts are carried along.
Triangulation subdivide(const Triangulation& T);

/// Whether every simplex whose vertices all lie in the mark lies in the mark.
bool satisfies_B_condition(const Triangulation& T, const std::string& mark);

/// Subdivides until the condition holds. For a mark that is a subcomplex one
/// subdivision is enough; more than `max_rounds` is an Error.
Triangulation enforce_B_condition(const Triangulation& T, const std::string& mark, int max_rounds = 5);

}  // namespace periodlab
