#include "periodlab/chain.hpp"

#include "periodlab/error.hpp"

#include <cmath>
#include <mutex>
#include <numeric>

namespace periodlab {

Chain Chain::of(const SingularSimplex& s, std::int64_t coeff) {
    Chain c(s.dim());
    c.add(s, coeff);
    return c;
}

void Chain::add(const SingularSimplex& s, std::int64_t coeff) {
    if (coeff == 0) return;
    if (terms_.empty() && degree_ != s.dim()) degree_ = s.dim();
    if (s.dim() != degree_) {
        throw InputError("chain of degree " + std::to_string(degree_) + " cannot hold a simplex of dimension " +
                         std::to_string(s.dim()));
    }
    auto [it, inserted] = terms_.try_emplace(s.key(), Term{s, coeff});
    if (!inserted) {
        it->second.coeff += coeff;
        if (it->second.coeff == 0) terms_.erase(it);
    }
}

void Chain::add(const Chain& other, std::int64_t scale) {
    for (const auto& [k, t] : other.terms_) add(t.simplex, t.coeff * scale);
}

std::vector<Chain::Term> Chain::terms() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [k, t] : terms_) out.push_back(t);
    return out;
}

std::int64_t Chain::coefficient(const SingularSimplex& s) const {
    auto it = terms_.find(s.key());
    return it == terms_.end() ? 0 : it->second.coeff;
}

Chain Chain::operator-() const {
    Chain c(degree_);
    c.add(*this, -1);
    return c;
}

Chain operator*(std::int64_t k, const Chain& c) {
    Chain out(c.degree_);
    out.add(c, k);
    return out;
}

bool operator==(const Chain& a, const Chain& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (auto ia = a.terms_.begin(), ib = b.terms_.begin(); ia != a.terms_.end(); ++ia, ++ib) {
        if (ia->first != ib->first || ia->second.coeff != ib->second.coeff) return false;
    }
    return true;
}

int Chain::ambient() const { return terms_.empty() ? 0 : terms_.begin()->second.simplex.ambient(); }

Chain boundary(const SingularSimplex& s) {
    const int d = s.dim();
    if (d < 1) throw InputError("boundary of a 0-simplex is not defined here (degree must be >= 1)");
    Chain out(d - 1);
    for (int i = 0; i <= d; ++i) out.add(face(s, i), (i % 2 == 0) ? 1 : -1);
    return out;
}

Chain boundary(const Chain& c) {
    if (c.degree() < 1) throw InputError("boundary of a degree-0 chain is not defined here");
    Chain out(c.degree() - 1);
    for (const auto& t : c.terms()) out.add(boundary(t.simplex), t.coeff);
    return out;
}

Chain cone(const Chain& c) {
    Chain out(c.degree() + 1);
    for (const auto& t : c.terms()) out.add(cone(t.simplex), t.coeff);
    return out;
}

namespace {

using SignedSimplex = std::pair<std::vector<RationalPoint>, int>;

// Sd of the affine simplex with the given vertices (all in Δ_d coordinates).
std::vector<SignedSimplex> subdivide_vertices(const std::vector<RationalPoint>& verts) {
    const int k = static_cast<int>(verts.size()) - 1;
    if (k == 0) return {{verts, 1}};
    RationalPoint b(verts[0].size(), Rational(0));
    for (const auto& v : verts)
        for (std::size_t r = 0; r < b.size(); ++r) b[r] += v[r];
    for (auto& x : b) x /= Rational(k + 1);
    std::vector<SignedSimplex> out;
    for (int i = 0; i <= k; ++i) {
        std::vector<RationalPoint> f;
        for (int j = 0; j <= k; ++j)
            if (j != i) f.push_back(verts[j]);
        for (auto& [sub, sign] : subdivide_vertices(f)) {
            std::vector<RationalPoint> w;
            w.push_back(b);
            w.insert(w.end(), sub.begin(), sub.end());
            out.emplace_back(std::move(w), (i % 2 == 0 ? 1 : -1) * sign);
        }
    }
    return out;
}

}  // namespace

const std::vector<std::pair<AffineMap, int>>& subdivision_maps(int d) {
    static std::mutex mu;
    static std::map<int, std::vector<std::pair<AffineMap, int>>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(d);
    if (it != cache.end()) return it->second;
    std::vector<RationalPoint> verts;
    for (int j = 0; j <= d; ++j) verts.push_back(standard_vertex(d, j));
    std::vector<std::pair<AffineMap, int>> maps;
    for (auto& [v, s] : subdivide_vertices(verts)) maps.emplace_back(AffineMap(std::move(v)), s);
    return cache.emplace(d, std::move(maps)).first->second;
}

Chain barycentric_subdivide(const SingularSimplex& s) {
    Chain out(s.dim());
    for (const auto& [alpha, sign] : subdivision_maps(s.dim())) out.add(compose(s, alpha), sign);
    return out;
}

Chain barycentric_subdivide(const Chain& c) {
    Chain out(c.degree());
    for (const auto& t : c.terms()) out.add(barycentric_subdivide(t.simplex), t.coeff);
    return out;
}

std::vector<std::vector<double>> comparison_grid(int d) {
    std::vector<std::vector<double>> pts;
    if (d == 0) return {{}};
    for (unsigned mask = 1; mask < (1u << (d + 1)); ++mask) {
        std::vector<int> ids;
        for (int j = 0; j <= d; ++j)
            if (mask & (1u << j)) ids.push_back(j);
        RationalPoint p = barycenter(d, ids);
        std::vector<double> x(d);
        for (int r = 0; r < d; ++r) x[r] = p[r].convert_to<double>();
        pts.push_back(std::move(x));
    }
    // A few asymmetric interior points.
    const double w[] = {0.13, 0.29, 0.07, 0.21, 0.17};
    for (int s = 0; s < 3; ++s) {
        std::vector<double> x(d);
        for (int r = 0; r < d; ++r) x[r] = w[(r + s) % 5] / (1 + 0.1 * d);
        pts.push_back(std::move(x));
    }
    return pts;
}

bool geometrically_equal(const SingularSimplex& a, const SingularSimplex& b, double tol) {
    if (a.dim() != b.dim() || a.ambient() != b.ambient()) return false;
    if (a == b) return true;
    for (const auto& x : comparison_grid(a.dim())) {
        std::vector<double> va, vb;
        try {
            va = a(x);
            vb = b(x);
        } catch (const DomainError&) {
            return false;
        }
        for (int r = 0; r < a.ambient(); ++r) {
            if (!(std::abs(va[r] - vb[r]) <= tol * (1 + std::abs(va[r])))) return false;
        }
    }
    return true;
}

bool chains_geometrically_equal(const Chain& a, const Chain& b, double tol) {
    std::vector<Chain::Term> pool = (a - b).terms();
    // Merge geometrically equal terms into the first representative.
    std::vector<Chain::Term> merged;
    for (const auto& t : pool) {
        bool found = false;
        for (auto& m : merged) {
            if (geometrically_equal(m.simplex, t.simplex, tol)) {
                m.coeff += t.coeff;
                found = true;
                break;
            }
        }
        if (!found) merged.push_back(t);
    }
    for (const auto& m : merged)
        if (m.coeff != 0) return false;
    return true;
}

}  // namespace periodlab
