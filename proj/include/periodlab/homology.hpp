#pragma once

// Integer simplicial homology with representative cycles.

#include "periodlab/complex.hpp"
#include "periodlab/snf.hpp"

#include <string>
#include <vector>

namespace periodlab {

/// Rows are (d-1)-simplices, columns d-simplices, both in complex order;
/// entry (F, σ) = (−1)^i when F is σ without its i-th vertex.
IntMatrix boundary_matrix(const SimplicialComplex& K, int d);

/// Integer coefficients on the d-simplices of K (complex order).
using CombinatorialChain = std::vector<BigInt>;

struct HomologyGroup {
    int degree = 0;
    std::size_t betti = 0;
    std::vector<BigInt> torsion;  ///< invariant factors > 1
    std::vector<CombinatorialChain> free_generators;
    std::vector<CombinatorialChain> torsion_generators;  ///< parallel to `torsion`
};

struct HomologyResult {
    std::vector<HomologyGroup> groups;  ///< degrees 0..dim K
    std::vector<std::size_t> betti() const;
};

HomologyResult homology(const SimplicialComplex& K);

/// ∂_d c computed exactly; zero for d = 0.
CombinatorialChain boundary_of(const SimplicialComplex& K, int d, const CombinatorialChain& c);
bool is_cycle(const SimplicialComplex& K, int d, const CombinatorialChain& c);

/// Human-readable form such as "(0,1) - (0,2)".
std::string chain_string(const SimplicialComplex& K, int d, const CombinatorialChain& c);

}  // namespace periodlab
