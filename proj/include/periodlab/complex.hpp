#pragma once

// Finite abstract simplicial complexes.

#include <cstddef>
#include <map>
#include <vector>

namespace periodlab {

/// A simplex as a strictly increasing list of vertex labels.
using Simplex = std::vector<int>;

class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Closure under faces of the given simplices. Vertex tuples are sorted;
    /// repeated vertices inside a tuple are an InputError.
    static SimplicialComplex from_simplices(const std::vector<Simplex>& generators);

    /// -1 for the empty complex.
    int dimension() const { return static_cast<int>(by_dim_.size()) - 1; }
    std::size_t vertex_count() const { return count(0); }
    std::size_t count(int d) const;

    /// d-simplices in lexicographic order (empty outside 0..dimension()).
    const std::vector<Simplex>& simplices(int d) const;
    bool contains(const Simplex& s) const;
    /// Position of s in simplices(s.size() - 1); InputError if absent.
    std::size_t index_of(const Simplex& s) const;

    /// Maximal simplices, in dimension then lexicographic order.
    const std::vector<Simplex>& facets() const { return facets_; }
    /// Facets containing s.
    std::vector<Simplex> cofacets_of(const Simplex& s) const;

    long long euler_characteristic() const;

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) { return a.by_dim_ == b.by_dim_; }

private:
    std::vector<std::vector<Simplex>> by_dim_;
    std::map<Simplex, std::size_t> index_;
    std::vector<Simplex> facets_;
};

/// Whether `face` is a subset of `s` (both sorted).
bool is_face(const Simplex& face, const Simplex& s);

/// s without its i-th vertex.
Simplex drop_vertex(const Simplex& s, std::size_t i);

struct ComplexSubdivision {
    SimplicialComplex complex;
    /// carriers[v] is the simplex of the original complex whose barycenter is
    /// the new vertex v; new vertices are numbered 0, 1, ... in (dimension,
    /// lexicographic) order of their carriers.
    std::vector<Simplex> carriers;
};

/// First barycentric subdivision: simplices are flags σ_0 ⊂ ... ⊂ σ_k.
ComplexSubdivision barycentric_subdivision(const SimplicialComplex& K);

}  // namespace periodlab
