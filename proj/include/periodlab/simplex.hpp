#pragma once

// Singular simplices: continuous maps from the standard simplex into R^N that
// are C^1 on open faces.
//
// Domain coordinates are (a_1, ..., a_d) with vertex 0 at the origin. Nodes
// are immutable and shared; equality and ordering go through key(), which is a
// canonical description of the evaluator (expression text for expression
// maps, recursive for wrappers, exact rational vertices for affine maps).

#include "periodlab/affine.hpp"
#include "periodlab/expr.hpp"

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace periodlab {

enum class SimplexKind { ExprMap, Affine, Cone, Prism, Composed, Glued };

std::string kind_name(SimplexKind k);

struct SimplexParts;

namespace detail {

class SimplexNode {
public:
    SimplexNode(int dim, int ambient) : dim_(dim), ambient_(ambient) {}
    virtual ~SimplexNode() = default;

    int dim() const { return dim_; }
    int ambient() const { return ambient_; }

    virtual SimplexKind kind() const = 0;
    /// Writes the image of x (size dim) into out (size ambient).
    virtual void eval(std::span<const double> x, std::span<double> out) const = 0;
    /// Column-major ambient x dim Jacobian, out[col * ambient + row].
    virtual void jacobian(std::span<const double> x, std::span<double> out) const = 0;
    /// True when the pullback may blow up at the boundary of the domain.
    virtual bool boundary_singular() const = 0;
    /// The constructor arguments of this node (see SimplexParts).
    virtual void parts(SimplexParts& out) const = 0;

    const std::string& key() const { return key_; }

protected:
    std::string key_;

private:
    int dim_;
    int ambient_;
};

}  // namespace detail

class Prism;

class SingularSimplex {
public:
    SingularSimplex() = default;
    explicit SingularSimplex(std::shared_ptr<const detail::SimplexNode> node) : node_(std::move(node)) {}

    /// Expression-backed map: components are expressions in a_1..a_d.
    static SingularSimplex from_exprs(int dim, std::vector<Expr> components);
    /// Affine map through the given vertex images (vertex 0 first).
    static SingularSimplex affine(std::vector<RationalPoint> vertices);
    static SingularSimplex affine(const AffineMap& map);
    /// The identity Δ_d → R^d.
    static SingularSimplex identity(int dim);
    static SingularSimplex point(RationalPoint p);

    int dim() const { return node_->dim(); }
    int ambient() const { return node_->ambient(); }
    SimplexKind kind() const { return node_->kind(); }
    const std::string& key() const { return node_->key(); }
    bool boundary_singular() const { return node_->boundary_singular(); }
    bool valid() const { return static_cast<bool>(node_); }

    std::vector<double> operator()(std::span<const double> x) const;
    void eval(std::span<const double> x, std::span<double> out) const { node_->eval(x, out); }
    void jacobian(std::span<const double> x, std::span<double> out) const { node_->jacobian(x, out); }
    std::vector<double> jacobian(std::span<const double> x) const;

    const detail::SimplexNode& node() const { return *node_; }
    const std::shared_ptr<const detail::SimplexNode>& node_ptr() const { return node_; }

    friend bool operator==(const SingularSimplex& a, const SingularSimplex& b) { return a.key() == b.key(); }
    friend bool operator<(const SingularSimplex& a, const SingularSimplex& b) { return a.key() < b.key(); }

private:
    std::shared_ptr<const detail::SimplexNode> node_;
};

/// What a simplex is built from, enough to rebuild it:
///   ExprMap   components
///   Affine    map
///   Cone      children = {base}
///   Composed  children = {inner}, map = α
///   Prism     children = {σ}, profile, map = α (the piece)
///   Glued     children = {h1|σ, h2|τ, h1|β}, v_pos, b_pos, tol
struct SimplexParts {
    SimplexKind kind = SimplexKind::ExprMap;
    std::vector<Expr> components;
    AffineMap map;
    std::vector<SingularSimplex> children;
    Expr profile;
    std::vector<int> v_pos, b_pos;
    double tol = 0;
};

SimplexParts parts(const SingularSimplex& s);

/// σ ∘ α for an affine α: Δ_k → Δ_d. Nested compositions collapse into one
/// exact affine map; affine and prism simplices absorb α directly.
SingularSimplex compose(const SingularSimplex& sigma, const AffineMap& alpha);

/// The face of σ opposite vertex i.
SingularSimplex face(const SingularSimplex& sigma, int i);

/// The cone ĥσ: (a_0, ..., a_d) ↦ A σ(a_1/A, ..., a_d/A), A = Σ a_i, and the
/// origin when A = 0. The cone vertex is the new vertex 0.
SingularSimplex cone(const SingularSimplex& sigma);

/// The prism map (t, b) ↦ f(t) σ(b) on [0,1] × Δ_d.
class Prism {
public:
    /// `f` is an expression in t (variable a1).
    Prism(SingularSimplex sigma, Expr f);

    const SingularSimplex& sigma() const { return sigma_; }
    const Expr& profile() const { return f_; }
    int dim() const { return sigma_.dim() + 1; }
    int ambient() const { return sigma_.ambient(); }

    /// x = (t, b_1, ..., b_d).
    void eval(std::span<const double> x, std::span<double> out) const;
    void jacobian(std::span<const double> x, std::span<double> out) const;
    double f(double t) const;
    double df(double t) const;

    /// The prism restricted to an affine simplex α: Δ_{d+1} → [0,1] × Δ_d,
    /// whose vertices are given in (t, b) coordinates.
    SingularSimplex piece(const AffineMap& alpha) const;

private:
    SingularSimplex sigma_;
    Expr f_;
    CompiledExpr fc_;
    CompiledExpr dfc_;
};

/// Staircase decomposition of [0,1] × Δ_d into d+1 simplices, as affine maps
/// into (t, b) coordinates paired with their orientation sign, so that the
/// signed sum is the fundamental chain of the prism.
std::vector<std::pair<AffineMap, int>> prism_decomposition(int d);

/// q(t, b) = ((1−t)(1−Σb), (1−t)b_1, ..., (1−t)b_d) ∈ Δ_{d+1}.
std::vector<double> prism_q(double t, std::span<const double> b);

/// Inverse of q away from the cone vertex: a ↦ (1−A, a_1/A, ..., a_d/A).
/// Returns (t, b_1, ..., b_d).
std::vector<double> prism_inverse(std::span<const double> a);

/// Result of sampling a simplex on paths approaching boundary points.
struct ContinuityReport {
    bool ok = true;
    double max_jump = 0;
    std::string detail;
};

/// Spot check of continuity on the closed simplex: for each vertex and face
/// barycenter p, evaluates along p + 2^-k (c − p) for k up to `depth` and
/// checks that the relative gaps to σ(p) shrink and end below `tol`. This is
/// a validation, not a proof.
ContinuityReport check_continuity(const SingularSimplex& sigma, int depth = 20, double tol = 1e-2);

}  // namespace periodlab
