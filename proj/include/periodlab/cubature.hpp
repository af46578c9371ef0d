#pragma once

// Positive-weight cubature on the standard simplex.
//
// Conical product (collapsed coordinate) rules: Gauss–Jacobi in each
// direction of the Duffy cube, so all nodes are strictly interior and all
// weights positive. n points per direction integrate total degree 2n − 1
// exactly.

#include <vector>

namespace periodlab {

struct GaussRule {
    std::vector<double> nodes;    // in (0, 1)
    std::vector<double> weights;  // for ∫_0^1 f(u) (1 − u)^alpha du
};

/// n-point Gauss–Jacobi rule on [0,1] with weight (1 − u)^alpha.
GaussRule gauss_jacobi(int n, double alpha);

struct SimplexRule {
    int dim = 0;
    int degree = 0;
    std::vector<double> nodes;    // point-major, dim coordinates each
    std::vector<double> weights;  // sum to 1/dim!
    std::size_t size() const { return weights.size(); }
};

/// Conical product rule on Δ_d with n points per direction.
const SimplexRule& conical_product_rule(int d, int n);

}  // namespace periodlab
