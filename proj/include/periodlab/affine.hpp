#pragma once

// Affine maps between simplices with exact rational vertex images.
//
// An AffineMap from the standard simplex of dimension k into R^n is stored
// as the images of the k+1 vertices e_0 = origin, e_1, ..., e_k. Composition
// is exact, so chains built from face maps and subdivision maps merge by
// plain structural equality.

#include "periodlab/expr.hpp"

#include <span>
#include <string>
#include <vector>

namespace periodlab {

using RationalPoint = std::vector<Rational>;

class AffineMap {
public:
    AffineMap() = default;
    /// `vertices[j]` is the image of e_j; all points must have the same size.
    explicit AffineMap(std::vector<RationalPoint> vertices);

    static AffineMap identity(int dim);

    int domain_dim() const { return static_cast<int>(vertices_.size()) - 1; }
    int target_dim() const { return target_dim_; }
    const std::vector<RationalPoint>& vertices() const { return vertices_; }

    void apply(std::span<const double> x, std::span<double> out) const;
    /// Column-major n x k linear part, `linear()[col * n + row]`.
    const std::vector<double>& linear() const { return linear_; }

    /// Exact image of a rational point.
    RationalPoint apply_exact(const RationalPoint& x) const;

    /// this ∘ inner. Requires inner.target_dim() == domain_dim().
    AffineMap compose(const AffineMap& inner) const;

    /// Sign of the determinant when the map is square (-1, 0, +1).
    int orientation() const;

    const std::string& key() const { return key_; }
    friend bool operator==(const AffineMap& a, const AffineMap& b) { return a.key_ == b.key_; }

private:
    std::vector<RationalPoint> vertices_;
    int target_dim_ = 0;
    std::vector<double> offset_;
    std::vector<double> linear_;
    std::string key_;
};

/// Standard coordinates of vertex j of the standard simplex of dimension d
/// (origin for j = 0, unit vector e_j otherwise).
RationalPoint standard_vertex(int d, int j);

/// Affine embedding of the (d-1)-simplex onto the face of the d-simplex
/// opposite vertex i; remaining vertices keep their order.
AffineMap face_map(int d, int i);

/// Barycenter (in standard coordinates) of the given vertices of the d-simplex.
RationalPoint barycenter(int d, std::span<const int> vertex_ids);

std::string rational_string(const Rational& r);

}  // namespace periodlab
