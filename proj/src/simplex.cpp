#include "periodlab/simplex.hpp"

#include "periodlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

namespace periodlab {

std::string kind_name(SimplexKind k) {
    switch (k) {
    case SimplexKind::ExprMap: return "expr";
    case SimplexKind::Affine: return "affine";
    case SimplexKind::Cone: return "cone";
    case SimplexKind::Prism: return "prism";
    case SimplexKind::Composed: return "composed";
    case SimplexKind::Glued: return "glued";
    }
    return "?";
}

namespace {

bool has_root_singularity(const Expr& e) {
    if (e.op() == Op::Sqrt) return true;
    if (e.op() == Op::Pow && boost::multiprecision::denominator(e.exponent()) != 1) return true;
    if (e.op() == Op::Pow && e.exponent() < 0) return true;
    for (std::size_t i = 0; i < e.arity_of_node(); ++i) {
        if (has_root_singularity(e.child(i))) return true;
    }
    return false;
}

class ExprMapNode final : public detail::SimplexNode {
public:
    ExprMapNode(int dim, std::vector<Expr> comps) : SimplexNode(dim, static_cast<int>(comps.size())), comps_(std::move(comps)) {
        key_ = "E" + std::to_string(dim) + "(";
        for (std::size_t r = 0; r < comps_.size(); ++r) {
            if (comps_[r].max_var() > dim) {
                throw InputError("simplex component " + std::to_string(r + 1) + " uses a variable beyond dimension " +
                                 std::to_string(dim));
            }
            if (r) key_ += " | ";
            key_ += to_string(comps_[r]);
            compiled_.emplace_back(comps_[r]);
            singular_ = singular_ || has_root_singularity(comps_[r]);
        }
        key_ += ")";
        for (int c = 0; c < dim; ++c) {
            for (const Expr& e : comps_) partials_.emplace_back(diff(e, c + 1));
        }
    }
    SimplexKind kind() const override { return SimplexKind::ExprMap; }
    void eval(std::span<const double> x, std::span<double> out) const override {
        for (std::size_t r = 0; r < compiled_.size(); ++r) out[r] = compiled_[r](x);
    }
    void jacobian(std::span<const double> x, std::span<double> out) const override {
        for (std::size_t k = 0; k < partials_.size(); ++k) out[k] = partials_[k](x);
    }
    bool boundary_singular() const override { return singular_; }
    const std::vector<Expr>& components() const { return comps_; }
    void parts(SimplexParts& out) const override {
        out.kind = SimplexKind::ExprMap;
        out.components = comps_;
    }

private:
    std::vector<Expr> comps_;
    std::vector<CompiledExpr> compiled_;
    std::vector<CompiledExpr> partials_;
    bool singular_ = false;
};

class AffineNode final : public detail::SimplexNode {
public:
    explicit AffineNode(AffineMap map) : SimplexNode(map.domain_dim(), map.target_dim()), map_(std::move(map)) {
        key_ = "A" + map_.key();
    }
    SimplexKind kind() const override { return SimplexKind::Affine; }
    void eval(std::span<const double> x, std::span<double> out) const override { map_.apply(x, out); }
    void jacobian(std::span<const double>, std::span<double> out) const override {
        std::copy(map_.linear().begin(), map_.linear().end(), out.begin());
    }
    bool boundary_singular() const override { return false; }
    const AffineMap& map() const { return map_; }
    void parts(SimplexParts& out) const override {
        out.kind = SimplexKind::Affine;
        out.map = map_;
    }

private:
    AffineMap map_;
};

class ConeNode final : public detail::SimplexNode {
public:
    explicit ConeNode(SingularSimplex sigma) : SimplexNode(sigma.dim() + 1, sigma.ambient()), sigma_(std::move(sigma)) {
        key_ = "C(" + sigma_.key() + ")";
    }
    SimplexKind kind() const override { return SimplexKind::Cone; }
    void eval(std::span<const double> x, std::span<double> out) const override {
        const int d = sigma_.dim();
        double A = 0;
        for (double v : x) A += v;
        if (A == 0) {
            std::fill(out.begin(), out.end(), 0.0);
            return;
        }
        std::vector<double> y(d);
        for (int k = 0; k < d; ++k) y[k] = x[k + 1] / A;
        sigma_.eval(y, out);
        for (double& v : out) v *= A;
    }
    void jacobian(std::span<const double> x, std::span<double> out) const override {
        // With y = (a_1..a_d)/A:
        //   d/da_0 = σ(y) − Dσ(y) y,   d/da_k = σ(y) + Dσ(y)(e_k − y).
        const int d = sigma_.dim();
        const int n = ambient();
        double A = 0;
        for (double v : x) A += v;
        if (A == 0) throw DomainError("cone Jacobian requested at the cone vertex", sigma_.key());
        std::vector<double> y(d), s(n), J(static_cast<std::size_t>(n) * d), Jy(n, 0.0);
        for (int k = 0; k < d; ++k) y[k] = x[k + 1] / A;
        sigma_.eval(y, s);
        if (d > 0) sigma_.jacobian(y, J);
        for (int k = 0; k < d; ++k)
            for (int r = 0; r < n; ++r) Jy[r] += J[static_cast<std::size_t>(k) * n + r] * y[k];
        for (int r = 0; r < n; ++r) out[r] = s[r] - Jy[r];
        for (int k = 0; k < d; ++k) {
            for (int r = 0; r < n; ++r) {
                out[static_cast<std::size_t>(k + 1) * n + r] = s[r] + J[static_cast<std::size_t>(k) * n + r] - Jy[r];
            }
        }
    }
    bool boundary_singular() const override { return sigma_.boundary_singular(); }
    const SingularSimplex& base() const { return sigma_; }
    void parts(SimplexParts& out) const override {
        out.kind = SimplexKind::Cone;
        out.children = {sigma_};
    }

private:
    SingularSimplex sigma_;
};

// The face of ĥσ opposite vertex i: σ itself for i = 0, ĥ(face of σ) otherwise.
SingularSimplex cone_face(const SingularSimplex& base, int i) {
    if (i == 0) return base;
    if (base.dim() == 0) return SingularSimplex::point(RationalPoint(base.ambient(), Rational(0)));
    return cone(face(base, i - 1));
}

// If every vertex of alpha lies on the face of Δ_D opposite vertex i, the
// index i and alpha rewritten as a map into that face.
std::optional<std::pair<int, AffineMap>> factor_through_face(const AffineMap& alpha) {
    const int D = alpha.target_dim();
    for (int i = 0; i <= D; ++i) {
        bool inside = true;
        for (const auto& v : alpha.vertices()) {
            if (i == 0) {
                Rational sum = 0;
                for (const auto& c : v) sum += c;
                inside = sum == 1;
            } else {
                inside = v[i - 1] == 0;
            }
            if (!inside) break;
        }
        if (!inside) continue;
        std::vector<RationalPoint> verts;
        for (const auto& v : alpha.vertices()) {
            RationalPoint b;
            for (int k = 0; k < D; ++k)
                if (k != (i == 0 ? 0 : i - 1)) b.push_back(v[k]);
            verts.push_back(std::move(b));
        }
        return std::make_pair(i, AffineMap(std::move(verts)));
    }
    return std::nullopt;
}

class PrismNode final : public detail::SimplexNode {
public:
    PrismNode(std::shared_ptr<const Prism> prism, AffineMap alpha)
        : SimplexNode(alpha.domain_dim(), prism->ambient()), prism_(std::move(prism)), alpha_(std::move(alpha)) {
        key_ = "P(" + prism_->sigma().key() + " ; " + to_string(prism_->profile()) + ")o" + alpha_.key();
    }
    SimplexKind kind() const override { return SimplexKind::Prism; }
    void eval(std::span<const double> x, std::span<double> out) const override {
        std::vector<double> tb(alpha_.target_dim());
        alpha_.apply(x, tb);
        prism_->eval(tb, out);
    }
    void jacobian(std::span<const double> x, std::span<double> out) const override {
        const int m = alpha_.target_dim();
        const int n = ambient();
        const int k = dim();
        std::vector<double> tb(m), J(static_cast<std::size_t>(n) * m);
        alpha_.apply(x, tb);
        prism_->jacobian(tb, J);
        const auto& L = alpha_.linear();
        for (int c = 0; c < k; ++c) {
            for (int r = 0; r < n; ++r) {
                double acc = 0;
                for (int j = 0; j < m; ++j) acc += J[static_cast<std::size_t>(j) * n + r] * L[static_cast<std::size_t>(c) * m + j];
                out[static_cast<std::size_t>(c) * n + r] = acc;
            }
        }
    }
    bool boundary_singular() const override {
        return prism_->sigma().boundary_singular() || has_root_singularity(prism_->profile());
    }
    const std::shared_ptr<const Prism>& prism() const { return prism_; }
    void parts(SimplexParts& out) const override {
        out.kind = SimplexKind::Prism;
        out.children = {prism_->sigma()};
        out.profile = prism_->profile();
        out.map = alpha_;
    }
    const AffineMap& alpha() const { return alpha_; }

private:
    std::shared_ptr<const Prism> prism_;
    AffineMap alpha_;
};

class ComposedNode final : public detail::SimplexNode {
public:
    ComposedNode(SingularSimplex sigma, AffineMap alpha)
        : SimplexNode(alpha.domain_dim(), sigma.ambient()), sigma_(std::move(sigma)), alpha_(std::move(alpha)) {
        key_ = "(" + sigma_.key() + ")o" + alpha_.key();
        if (sigma_.kind() == SimplexKind::ExprMap) {
            // Substitute α into the components so that derivatives along a
            // face never go through a singular derivative of the full map.
            const auto& inner = static_cast<const ExprMapNode&>(sigma_.node());
            const auto& v = alpha_.vertices();
            std::vector<Expr> repl;
            for (int j = 0; j < alpha_.target_dim(); ++j) {
                Expr e = constant(v[0][j]);
                for (int c = 1; c <= dim(); ++c) {
                    Rational slope = v[c][j] - v[0][j];
                    if (slope != 0) e = e + constant(slope) * var(c);
                }
                repl.push_back(e);
            }
            for (const Expr& comp : inner.components()) {
                Expr e = substitute(comp, repl);
                compiled_.emplace_back(e);
                substituted_.push_back(std::move(e));
            }
            for (int c = 0; c < dim(); ++c)
                for (const Expr& e : substituted_) partials_.emplace_back(diff(e, c + 1));
        }
    }
    SimplexKind kind() const override { return SimplexKind::Composed; }
    void parts(SimplexParts& out) const override {
        out.kind = SimplexKind::Composed;
        out.children = {sigma_};
        out.map = alpha_;
    }
    void eval(std::span<const double> x, std::span<double> out) const override {
        if (!compiled_.empty()) {
            for (std::size_t r = 0; r < compiled_.size(); ++r) out[r] = compiled_[r](x);
            return;
        }
        std::vector<double> y(alpha_.target_dim());
        alpha_.apply(x, y);
        sigma_.eval(y, out);
    }
    void jacobian(std::span<const double> x, std::span<double> out) const override {
        if (!compiled_.empty()) {
            for (std::size_t k = 0; k < partials_.size(); ++k) out[k] = partials_[k](x);
            return;
        }
        const int m = alpha_.target_dim();
        const int n = ambient();
        const int k = dim();
        std::vector<double> y(m), J(static_cast<std::size_t>(n) * m);
        alpha_.apply(x, y);
        if (m > 0) sigma_.jacobian(y, J);
        const auto& L = alpha_.linear();
        for (int c = 0; c < k; ++c) {
            for (int r = 0; r < n; ++r) {
                double acc = 0;
                for (int j = 0; j < m; ++j) acc += J[static_cast<std::size_t>(j) * n + r] * L[static_cast<std::size_t>(c) * m + j];
                out[static_cast<std::size_t>(c) * n + r] = acc;
            }
        }
    }
    bool boundary_singular() const override { return sigma_.boundary_singular(); }
    const SingularSimplex& inner() const { return sigma_; }
    const AffineMap& alpha() const { return alpha_; }

private:
    SingularSimplex sigma_;
    AffineMap alpha_;
    std::vector<Expr> substituted_;
    std::vector<CompiledExpr> compiled_;
    std::vector<CompiledExpr> partials_;
};

}  // namespace

SingularSimplex SingularSimplex::from_exprs(int dim, std::vector<Expr> components) {
    if (dim < 0) throw InputError("simplex dimension must be >= 0");
    if (components.empty()) throw InputError("simplex needs at least one component");
    return SingularSimplex(std::make_shared<ExprMapNode>(dim, std::move(components)));
}

SingularSimplex SingularSimplex::affine(std::vector<RationalPoint> vertices) {
    return affine(AffineMap(std::move(vertices)));
}

SingularSimplex SingularSimplex::affine(const AffineMap& map) {
    if (map.target_dim() < 1) throw InputError("affine simplex needs ambient dimension >= 1");
    return SingularSimplex(std::make_shared<AffineNode>(map));
}

SingularSimplex SingularSimplex::identity(int dim) { return affine(AffineMap::identity(dim)); }

SingularSimplex SingularSimplex::point(RationalPoint p) { return affine(std::vector<RationalPoint>{std::move(p)}); }

std::vector<double> SingularSimplex::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim()) throw InputError("simplex evaluated at a point of the wrong dimension");
    std::vector<double> out(ambient());
    eval(x, out);
    return out;
}

std::vector<double> SingularSimplex::jacobian(std::span<const double> x) const {
    std::vector<double> out(static_cast<std::size_t>(ambient()) * dim());
    if (dim() > 0) jacobian(x, out);
    return out;
}

SingularSimplex compose(const SingularSimplex& sigma, const AffineMap& alpha) {
    if (alpha.target_dim() != sigma.dim()) {
        throw InputError("compose: affine map lands in dimension " + std::to_string(alpha.target_dim()) +
                         " but the simplex has dimension " + std::to_string(sigma.dim()));
    }
    if (alpha == AffineMap::identity(sigma.dim())) return sigma;
    switch (sigma.kind()) {
    case SimplexKind::Affine: {
        const auto& n = static_cast<const AffineNode&>(sigma.node());
        return SingularSimplex::affine(n.map().compose(alpha));
    }
    case SimplexKind::Prism: {
        const auto& n = static_cast<const PrismNode&>(sigma.node());
        return SingularSimplex(std::make_shared<PrismNode>(n.prism(), n.alpha().compose(alpha)));
    }
    case SimplexKind::Composed: {
        const auto& n = static_cast<const ComposedNode&>(sigma.node());
        return compose(n.inner(), n.alpha().compose(alpha));
    }
    case SimplexKind::Cone: {
        // Maps into a face of the cone go through the face itself, so no
        // Jacobian of σ is ever requested on ∂Δ.
        if (alpha.domain_dim() < sigma.dim()) {
            if (auto f = factor_through_face(alpha)) {
                const auto& n = static_cast<const ConeNode&>(sigma.node());
                return compose(cone_face(n.base(), f->first), f->second);
            }
        }
        return SingularSimplex(std::make_shared<ComposedNode>(sigma, alpha));
    }
    default: return SingularSimplex(std::make_shared<ComposedNode>(sigma, alpha));
    }
}

SingularSimplex face(const SingularSimplex& sigma, int i) { return compose(sigma, face_map(sigma.dim(), i)); }

SimplexParts parts(const SingularSimplex& s) {
    SimplexParts out;
    s.node().parts(out);
    return out;
}

SingularSimplex cone(const SingularSimplex& sigma) { return SingularSimplex(std::make_shared<ConeNode>(sigma)); }

Prism::Prism(SingularSimplex sigma, Expr f) : sigma_(std::move(sigma)), f_(std::move(f)) {
    if (f_.max_var() > 1) throw InputError("prism profile must be an expression in t only");
    fc_ = CompiledExpr(f_);
    dfc_ = CompiledExpr(diff(f_, 1));
}

double Prism::f(double t) const { return fc_(std::span<const double>(&t, 1)); }
double Prism::df(double t) const { return dfc_(std::span<const double>(&t, 1)); }

void Prism::eval(std::span<const double> x, std::span<double> out) const {
    const double ft = f(x[0]);
    sigma_.eval(x.subspan(1), out);
    for (double& v : out) v *= ft;
}

void Prism::jacobian(std::span<const double> x, std::span<double> out) const {
    const int n = ambient();
    const int d = sigma_.dim();
    const double ft = f(x[0]);
    const double dft = df(x[0]);
    std::vector<double> s(n);
    sigma_.eval(x.subspan(1), s);
    for (int r = 0; r < n; ++r) out[r] = dft * s[r];
    if (d > 0) {
        std::span<double> rest = out.subspan(n, static_cast<std::size_t>(n) * d);
        sigma_.jacobian(x.subspan(1), rest);
        for (double& v : rest) v *= ft;
    }
}

SingularSimplex Prism::piece(const AffineMap& alpha) const {
    if (alpha.target_dim() != dim()) throw InputError("prism piece: affine map must land in [0,1] x simplex coordinates");
    return SingularSimplex(std::make_shared<PrismNode>(std::make_shared<Prism>(*this), alpha));
}

std::vector<std::pair<AffineMap, int>> prism_decomposition(int d) {
    // Vertices (0, v_0..v_j) then (1, v_j..v_d) for j = 0..d.
    auto lift = [d](int t, int j) {
        RationalPoint p(d + 1, Rational(0));
        p[0] = t;
        RationalPoint v = standard_vertex(d, j);
        for (int r = 0; r < d; ++r) p[r + 1] = v[r];
        return p;
    };
    std::vector<std::pair<AffineMap, int>> out;
    for (int j = 0; j <= d; ++j) {
        std::vector<RationalPoint> verts;
        for (int k = 0; k <= j; ++k) verts.push_back(lift(0, k));
        for (int k = j; k <= d; ++k) verts.push_back(lift(1, k));
        AffineMap m(std::move(verts));
        out.emplace_back(m, m.orientation());
    }
    return out;
}

std::vector<double> prism_q(double t, std::span<const double> b) {
    const int d = static_cast<int>(b.size());
    std::vector<double> a(d + 1);
    double sb = 0;
    for (double v : b) sb += v;
    a[0] = (1 - t) * (1 - sb);
    for (int k = 0; k < d; ++k) a[k + 1] = (1 - t) * b[k];
    return a;
}

std::vector<double> prism_inverse(std::span<const double> a) {
    double A = 0;
    for (double v : a) A += v;
    if (A <= 0) throw DomainError("prism inverse is undefined at the cone vertex", "A = 0");
    std::vector<double> tb(a.size());
    tb[0] = 1 - A;
    for (std::size_t k = 1; k < a.size(); ++k) tb[k] = a[k] / A;
    return tb;
}

ContinuityReport check_continuity(const SingularSimplex& sigma, int depth, double tol) {
    ContinuityReport rep;
    const int d = sigma.dim();
    const int n = sigma.ambient();
    if (d == 0) return rep;
    std::vector<double> center(d, 1.0 / (d + 1));
    // Boundary targets: barycenters of every proper face (all nonempty vertex
    // subsets except the full one).
    for (unsigned mask = 1; mask < (1u << (d + 1)) - 1; ++mask) {
        std::vector<int> ids;
        for (int j = 0; j <= d; ++j)
            if (mask & (1u << j)) ids.push_back(j);
        RationalPoint pb = barycenter(d, ids);
        std::vector<double> p(d);
        for (int r = 0; r < d; ++r) p[r] = pb[r].convert_to<double>();
        std::vector<double> target(n), val(n), x(d);
        try {
            sigma.eval(p, target);
        } catch (const DomainError& e) {
            rep.ok = false;
            rep.detail = std::string("not evaluable at a boundary point: ") + e.what();
            return rep;
        }
        std::vector<double> jumps;
        for (int k = 1; k <= depth; ++k) {
            double h = std::ldexp(1.0, -k);
            for (int r = 0; r < d; ++r) x[r] = p[r] + h * (center[r] - p[r]);
            try {
                sigma.eval(x, val);
            } catch (const DomainError& e) {
                rep.ok = false;
                rep.detail = std::string("not evaluable near the boundary: ") + e.what();
                return rep;
            }
            double jump = 0;
            for (int r = 0; r < n; ++r) {
                if (!std::isfinite(val[r])) jump = INFINITY;
                else jump = std::max(jump, std::abs(val[r] - target[r]) / (1 + std::abs(target[r])));
            }
            jumps.push_back(jump);
        }
        rep.max_jump = std::max(rep.max_jump, jumps.back());
        // The gaps must shrink over the second half of the approach and end small.
        bool settling = true;
        for (std::size_t k = jumps.size() / 2 + 1; k < jumps.size(); ++k) {
            if (jumps[k] > jumps[k - 1] * (1 + 1e-9) + 1e-15) settling = false;
        }
        if (!settling || !(jumps.back() <= tol)) {
            rep.ok = false;
            rep.detail = "values do not settle at a boundary point";
        }
    }
    return rep;
}

}  // namespace periodlab
