#include "periodlab/affine.hpp"

#include "periodlab/error.hpp"

#include <sstream>

namespace periodlab {

std::string rational_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << '/' << denominator(r);
    return os.str();
}

AffineMap::AffineMap(std::vector<RationalPoint> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw InputError("AffineMap: needs at least one vertex");
    target_dim_ = static_cast<int>(vertices_[0].size());
    for (const auto& v : vertices_) {
        if (static_cast<int>(v.size()) != target_dim_) throw InputError("AffineMap: ragged vertex list");
    }
    const int k = domain_dim();
    const int n = target_dim_;
    offset_.resize(n);
    linear_.resize(static_cast<std::size_t>(n) * k);
    for (int r = 0; r < n; ++r) offset_[r] = vertices_[0][r].convert_to<double>();
    for (int c = 0; c < k; ++c) {
        for (int r = 0; r < n; ++r) {
            Rational diff = vertices_[c + 1][r] - vertices_[0][r];
            linear_[static_cast<std::size_t>(c) * n + r] = diff.convert_to<double>();
        }
    }
    key_ = "[";
    for (std::size_t j = 0; j < vertices_.size(); ++j) {
        if (j) key_ += ';';
        for (int r = 0; r < n; ++r) {
            if (r) key_ += ',';
            key_ += rational_string(vertices_[j][r]);
        }
    }
    key_ += ']';
}

AffineMap AffineMap::identity(int dim) {
    std::vector<RationalPoint> v;
    for (int j = 0; j <= dim; ++j) v.push_back(standard_vertex(dim, j));
    return AffineMap(std::move(v));
}

void AffineMap::apply(std::span<const double> x, std::span<double> out) const {
    const int k = domain_dim();
    const int n = target_dim_;
    for (int r = 0; r < n; ++r) {
        double acc = offset_[r];
        for (int c = 0; c < k; ++c) acc += linear_[static_cast<std::size_t>(c) * n + r] * x[c];
        out[r] = acc;
    }
}

RationalPoint AffineMap::apply_exact(const RationalPoint& x) const {
    const int k = domain_dim();
    if (static_cast<int>(x.size()) != k) throw InputError("AffineMap::apply_exact: dimension mismatch");
    RationalPoint out = vertices_[0];
    for (int c = 0; c < k; ++c) {
        if (x[c] == 0) continue;
        for (int r = 0; r < target_dim_; ++r) out[r] += x[c] * (vertices_[c + 1][r] - vertices_[0][r]);
    }
    return out;
}

AffineMap AffineMap::compose(const AffineMap& inner) const {
    if (inner.target_dim() != domain_dim()) {
        throw InputError("AffineMap::compose: inner map lands in dimension " +
                         std::to_string(inner.target_dim()) + ", expected " + std::to_string(domain_dim()));
    }
    std::vector<RationalPoint> v;
    v.reserve(inner.vertices_.size());
    for (const auto& p : inner.vertices_) v.push_back(apply_exact(p));
    return AffineMap(std::move(v));
}

int AffineMap::orientation() const {
    const int k = domain_dim();
    if (k != target_dim_) throw InputError("AffineMap::orientation: map is not square");
    // Exact Gaussian elimination over the rationals.
    std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k));
    for (int c = 0; c < k; ++c)
        for (int r = 0; r < k; ++r) m[r][c] = vertices_[c + 1][r] - vertices_[0][r];
    int sign = 1;
    for (int col = 0; col < k; ++col) {
        int piv = -1;
        for (int r = col; r < k; ++r) {
            if (m[r][col] != 0) {
                piv = r;
                break;
            }
        }
        if (piv < 0) return 0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            sign = -sign;
        }
        if (m[col][col] < 0) sign = -sign;
        for (int r = col + 1; r < k; ++r) {
            if (m[r][col] == 0) continue;
            Rational f = m[r][col] / m[col][col];
            for (int c = col; c < k; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return sign;
}

RationalPoint standard_vertex(int d, int j) {
    if (j < 0 || j > d) throw InputError("standard_vertex: index out of range");
    RationalPoint p(d, Rational(0));
    if (j > 0) p[j - 1] = 1;
    return p;
}

AffineMap face_map(int d, int i) {
    if (d < 1) throw InputError("face_map: dimension must be >= 1");
    if (i < 0 || i > d) {
        throw InputError("face_map: face index " + std::to_string(i) + " out of range for dimension " +
                         std::to_string(d));
    }
    std::vector<RationalPoint> v;
    for (int j = 0; j <= d; ++j) {
        if (j != i) v.push_back(standard_vertex(d, j));
    }
    return AffineMap(std::move(v));
}

RationalPoint barycenter(int d, std::span<const int> vertex_ids) {
    if (vertex_ids.empty()) throw InputError("barycenter: empty vertex set");
    RationalPoint p(d, Rational(0));
    for (int j : vertex_ids) {
        RationalPoint v = standard_vertex(d, j);
        for (int r = 0; r < d; ++r) p[r] += v[r];
    }
    Rational n(static_cast<long long>(vertex_ids.size()));
    for (auto& x : p) x /= n;
    return p;
}

}  // namespace periodlab
