#include "periodlab/glue.hpp"

#include "periodlab/error.hpp"
#include "periodlab/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <set>
#include <unordered_map>

namespace periodlab {

namespace {

std::string tuple_string(const Simplex& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + ")";
}

double norm(std::span<const double> v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

struct SimplexInverse::Cache {
    std::mutex mu;
    std::unordered_map<std::string, std::optional<std::vector<double>>> values;
};

SimplexInverse::SimplexInverse(SingularSimplex beta, double tol)
    : beta_(std::move(beta)), tol_(tol), cache_(std::make_unique<Cache>()) {}

SimplexInverse::~SimplexInverse() = default;

std::optional<std::vector<double>> SimplexInverse::invert(std::span<const double> y) const {
    const int d = beta_.dim();
    const int N = beta_.ambient();
    std::string key(reinterpret_cast<const char*>(y.data()), y.size() * sizeof(double));
    {
        std::lock_guard lock(cache_->mu);
        if (auto it = cache_->values.find(key); it != cache_->values.end()) return it->second;
    }
    const double scale = 1 + norm(y);
    auto residual = [&](const std::vector<double>& x, std::vector<double>& r) -> bool {
        try {
            beta_.eval(x, r);
        } catch (const DomainError&) {
            return false;
        }
        for (int i = 0; i < N; ++i) r[i] -= y[i];
        return std::isfinite(norm(r));
    };
    auto inside = [&](const std::vector<double>& x) {
        double sum = 0;
        for (double v : x) {
            if (v < -1e-9) return false;
            sum += v;
        }
        return sum <= 1 + 1e-9;
    };
    auto finish = [&](std::vector<double> x) {
        std::vector<double> bary(d + 1);
        double sum = 0;
        for (int k = 0; k < d; ++k) {
            x[k] = std::max(0.0, x[k]);
            sum += x[k];
        }
        if (sum > 1)
            for (double& v : x) v /= sum;
        bary[0] = std::max(0.0, 1 - std::min(sum, 1.0));
        for (int k = 0; k < d; ++k) bary[k + 1] = x[k];
        return bary;
    };

    std::optional<std::vector<double>> result;
    std::vector<double> r(N);
    if (d == 0) {
        std::vector<double> none;
        if (residual(none, r) && norm(r) <= 1e-10 * scale) result = std::vector<double>{1.0};
    } else if (beta_.kind() == SimplexKind::Affine) {
        std::vector<double> zero(d, 0.0);
        residual(zero, r);
        std::vector<double> J = beta_.jacobian(zero);
        Eigen::Map<const Eigen::MatrixXd> L(J.data(), N, d);
        Eigen::VectorXd rhs = -Eigen::Map<Eigen::VectorXd>(r.data(), N);
        Eigen::VectorXd x = L.colPivHouseholderQr().solve(rhs);
        std::vector<double> xs(x.data(), x.data() + d);
        std::vector<double> check(N);
        if (residual(xs, check) && norm(check) <= 1e-10 * scale && inside(xs)) result = finish(xs);
    } else {
        // seeds: barycenter, then points pulled toward each vertex
        std::vector<std::vector<double>> seeds;
        seeds.emplace_back(d, 1.0 / (d + 1));
        for (int j = 0; j <= d; ++j) {
            std::vector<double> s(d, 0.2 / (d + 1));
            if (j > 0) s[j - 1] += 0.8;
            seeds.push_back(s);
        }
        for (const auto& seed : seeds) {
            std::vector<double> x = seed, trial(d), rt(N);
            if (!residual(x, r)) continue;
            double rn = norm(r);
            for (int it = 0; it < 100 && rn > tol_ * scale; ++it) {
                std::vector<double> J = beta_.jacobian(x);
                Eigen::Map<const Eigen::MatrixXd> Jm(J.data(), N, d);
                Eigen::VectorXd step = Jm.colPivHouseholderQr().solve(-Eigen::Map<Eigen::VectorXd>(r.data(), N));
                double t = 1;
                bool moved = false;
                for (int h = 0; h < 40; ++h, t /= 2) {
                    for (int k = 0; k < d; ++k) trial[k] = x[k] + t * step[k];
                    if (residual(trial, rt) && norm(rt) < rn) {
                        x = trial;
                        r = rt;
                        rn = norm(rt);
                        moved = true;
                        break;
                    }
                }
                if (!moved) break;
            }
            if (rn <= std::max(tol_, 1e-11) * scale * 10 && inside(x)) {
                result = finish(x);
                break;
            }
        }
    }
    std::lock_guard lock(cache_->mu);
    cache_->values.emplace(std::move(key), result);
    return result;
}

namespace {

class GluedNode final : public detail::SimplexNode {
public:
    GluedNode(SingularSimplex h1, std::vector<int> v_pos, std::vector<int> b_pos, SingularSimplex h2,
              std::shared_ptr<const SimplexInverse> inv)
        : SimplexNode(static_cast<int>(v_pos.size() + h2.dim() + 1) - 1, h1.ambient()), h1_(std::move(h1)),
          h2_(std::move(h2)), v_pos_(std::move(v_pos)), b_pos_(std::move(b_pos)), inv_(std::move(inv)) {
        key_ = "G(" + h1_.key() + " ; " + h2_.key() + " ; v";
        for (int p : v_pos_) key_ += " " + std::to_string(p);
        key_ += " ; b";
        for (int p : b_pos_) key_ += " " + std::to_string(p);
        key_ += ")";
    }
    SimplexKind kind() const override { return SimplexKind::Glued; }
    bool boundary_singular() const override { return h1_.boundary_singular() || h2_.boundary_singular(); }
    void parts(SimplexParts& out) const override {
        out.kind = SimplexKind::Glued;
        out.children = {h1_, h2_, inv_->simplex()};
        out.v_pos = v_pos_;
        out.b_pos = b_pos_;
        out.tol = inv_->tolerance();
    }

    void eval(std::span<const double> x, std::span<double> out) const override {
        std::vector<double> P = sigma_point(x, nullptr);
        h1_.eval(std::span<const double>(P).subspan(1), out);
    }

    void jacobian(std::span<const double> x, std::span<double> out) const override {
        const int k = dim();
        const int N = ambient();
        const int D = h1_.dim();
        std::vector<double> dP;  // (D+1) x (k+1): ∂P/∂λ
        std::vector<double> P = sigma_point(x, &dP);
        std::vector<double> J1(static_cast<std::size_t>(N) * D);
        if (D > 0) h1_.jacobian(std::span<const double>(P).subspan(1), J1);
        // P_std = P[1..D]; ∂/∂x_c = ∂/∂λ_c − ∂/∂λ_0
        for (int c = 0; c < k; ++c) {
            for (int r = 0; r < N; ++r) {
                double acc = 0;
                for (int q = 1; q <= D; ++q) {
                    const double dq = dP[static_cast<std::size_t>(q) * (k + 1) + c + 1] - dP[static_cast<std::size_t>(q) * (k + 1)];
                    acc += J1[static_cast<std::size_t>(q - 1) * N + r] * dq;
                }
                out[static_cast<std::size_t>(c) * N + r] = acc;
            }
        }
    }

private:
    // Barycentric point of σ for the standard point x of the glued simplex;
    // optionally ∂P/∂λ as a row-major (D+1) x (k+1) matrix.
    std::vector<double> sigma_point(std::span<const double> x, std::vector<double>* dP) const {
        const int k = dim();
        const int m1 = static_cast<int>(v_pos_.size());
        const int s = h2_.dim();
        const int D = h1_.dim();
        const int n = static_cast<int>(b_pos_.size()) - 1;
        const int N = ambient();
        std::vector<double> lambda(k + 1);
        double rest = 1;
        for (int c = 0; c < k; ++c) {
            lambda[c + 1] = x[c];
            rest -= x[c];
        }
        lambda[0] = rest;
        double a = 0;
        for (int j = 0; j <= s; ++j) a += lambda[m1 + j];
        std::vector<double> P(D + 1, 0.0);
        for (int i = 0; i < m1; ++i) P[v_pos_[i]] = lambda[i];
        if (dP) {
            dP->assign(static_cast<std::size_t>(D + 1) * (k + 1), 0.0);
            for (int i = 0; i < m1; ++i) (*dP)[static_cast<std::size_t>(v_pos_[i]) * (k + 1) + i] = 1;
        }
        // u = w-part / a; at a = 0 the limit drops the w-part.
        std::vector<double> u(s + 1);
        if (a > 0) {
            for (int j = 0; j <= s; ++j) u[j] = lambda[m1 + j] / a;
        } else {
            std::fill(u.begin(), u.end(), 1.0 / (s + 1));
        }
        std::vector<double> ustd(u.begin() + 1, u.end());
        std::vector<double> y(N);
        h2_.eval(ustd, y);
        auto c = inv_->invert(y);
        if (!c) throw DomainError("glue: h2 point has no preimage under h1 on the B-face", h1_.key());
        if (a > 0)
            for (int b = 0; b <= n; ++b) P[b_pos_[b]] = a * (*c)[b];
        if (dP) {
            // dc_std/du_std = pinv(D h1|β) D h2|τ
            std::vector<double> dc(static_cast<std::size_t>(n + 1) * (s + 1), 0.0);  // [b][k], k >= 1 used
            if (n > 0 && s > 0) {
                std::vector<double> cstd((*c).begin() + 1, (*c).end());
                std::vector<double> Jb = inv_->simplex().jacobian(cstd);
                std::vector<double> J2 = h2_.jacobian(ustd);
                Eigen::Map<const Eigen::MatrixXd> B(Jb.data(), N, n);
                Eigen::Map<const Eigen::MatrixXd> T(J2.data(), N, s);
                Eigen::MatrixXd G = B.colPivHouseholderQr().solve(T);  // n x s
                for (int kk = 1; kk <= s; ++kk) {
                    double sum = 0;
                    for (int b = 1; b <= n; ++b) {
                        dc[static_cast<std::size_t>(b) * (s + 1) + kk] = G(b - 1, kk - 1);
                        sum += G(b - 1, kk - 1);
                    }
                    dc[kk] = -sum;
                }
            }
            for (int b = 0; b <= n; ++b) {
                for (int j = 0; j <= s; ++j) {
                    double v = (*c)[b];
                    if (a > 0)
                        for (int kk = 1; kk <= s; ++kk) v += dc[static_cast<std::size_t>(b) * (s + 1) + kk] * ((kk == j) - u[kk]);
                    (*dP)[static_cast<std::size_t>(b_pos_[b]) * (k + 1) + m1 + j] = v;
                }
            }
        }
        return P;
    }

    SingularSimplex h1_, h2_;
    std::vector<int> v_pos_, b_pos_;
    std::shared_ptr<const SimplexInverse> inv_;
};

}  // namespace

SingularSimplex glued_simplex(const SingularSimplex& h1_sigma, std::vector<int> v_pos, std::vector<int> b_pos,
                              const SingularSimplex& h2_tau, std::shared_ptr<const SimplexInverse> g_inverse) {
    if (v_pos.empty() || b_pos.empty()) throw InputError("glued simplex: needs both v and b vertices");
    if (static_cast<int>(v_pos.size() + b_pos.size()) != h1_sigma.dim() + 1)
        throw InputError("glued simplex: vertex positions do not match σ");
    if (g_inverse->simplex().dim() + 1 != static_cast<int>(b_pos.size()))
        throw InputError("glued simplex: inverse is not on the B-face");
    return SingularSimplex(std::make_shared<GluedNode>(h1_sigma, std::move(v_pos), std::move(b_pos), h2_tau, std::move(g_inverse)));
}

namespace {

int pos_in(const Simplex& s, int v) { return static_cast<int>(std::lower_bound(s.begin(), s.end(), v) - s.begin()); }

Simplex support(const Simplex& beta, const std::vector<double>& bary) {
    Simplex out;
    for (std::size_t i = 0; i < beta.size(); ++i)
        if (bary[i] > 1e-9) out.push_back(beta[i]);
    return out;
}

}  // namespace

GlueResult glue(const GlueInput& input, const GlueOptions& opts) {
    GlueResult res;
    const std::string& B = input.b_mark;
    Triangulation t1 = input.t1, t2 = input.t2;
    if (t1.ambient() != t2.ambient()) throw InputError("glue: the triangulations live in different ambient spaces");
    if (!t1.has_mark(B)) t1.set_mark(B, {});
    if (!t2.has_mark(B)) t2.set_mark(B, {});
    std::map<int, Simplex> ident = input.identification;
    if (!satisfies_B_condition(t1, B)) {
        t1 = enforce_B_condition(t1, B);
        res.subdivided_t1 = true;
        ident.clear();
    }
    if (!satisfies_B_condition(t2, B)) {
        t2 = enforce_B_condition(t2, B);
        res.subdivided_t2 = true;
        ident.clear();
    }
    const auto& K1 = t1.complex();
    const auto& K2 = t2.complex();
    const auto& B1 = t1.mark(B);
    const auto& B2 = t2.mark(B);
    for (const auto& f : K1.facets())
        if (!t1.has_evaluator(f)) throw InputError("glue: T1 facet " + tuple_string(f) + " has no evaluator");
    for (const auto& f : K2.facets())
        if (!t2.has_evaluator(f)) throw InputError("glue: T2 facet " + tuple_string(f) + " has no evaluator");

    // Inverses of h1 on the B-simplices of K1, shared by all glued simplices.
    std::map<Simplex, std::shared_ptr<const SimplexInverse>> inverses;
    for (const auto& beta : B1) inverses[beta] = std::make_shared<SimplexInverse>(t1.evaluator(beta), opts.inverse_tol);

    // Carriers of the B-vertices of K2.
    std::vector<int> b2_vertices;
    for (const auto& s : B2)
        if (s.size() == 1) b2_vertices.push_back(s[0]);
    std::vector<Simplex> carriers(b2_vertices.size());
    std::vector<Simplex> b1_by_dim(B1.begin(), B1.end());
    std::stable_sort(b1_by_dim.begin(), b1_by_dim.end(), [](const Simplex& a, const Simplex& b) { return a.size() < b.size(); });
    parallel_for(b2_vertices.size(), opts.jobs, [&](std::size_t i) {
        const int w = b2_vertices[i];
        if (auto it = ident.find(w); it != ident.end()) {
            Simplex c = it->second;
            std::sort(c.begin(), c.end());
            if (!B1.count(c)) throw InputError("glue: identification of vertex " + std::to_string(w) + " is not a B-simplex of T1");
            carriers[i] = c;
            return;
        }
        std::vector<double> y = t2.vertex_position(w);
        for (const auto& beta : b1_by_dim) {
            if (auto c = inverses.at(beta)->invert(y)) {
                carriers[i] = support(beta, *c);
                return;
            }
        }
        throw InputError("glue: B-vertex " + std::to_string(w) + " of T2 is not in the image of B under h1");
    });
    std::map<int, Simplex> carrier_of;
    for (std::size_t i = 0; i < b2_vertices.size(); ++i) carrier_of[b2_vertices[i]] = carriers[i];
    res.identification = carrier_of;
    auto tau_carrier = [&](const Simplex& tau) {
        std::set<int> u;
        for (int w : tau) u.insert(carrier_of.at(w).begin(), carrier_of.at(w).end());
        Simplex c(u.begin(), u.end());
        if (!B1.count(c)) throw InputError("glue: T2 does not subdivide T1 on B (" + tuple_string(tau) + ")");
        return c;
    };

    // New vertex numbering: non-B vertices of K1, then all of K2.
    std::map<int, int> id1, id2;
    int next = 0;
    for (const auto& s : K1.simplices(0))
        if (!B1.count(s)) {
            id1[s[0]] = next;
            res.vertex_origin[next++] = {1, s[0]};
        }
    for (const auto& s : K2.simplices(0)) {
        id2[s[0]] = next;
        res.vertex_origin[next++] = {2, s[0]};
    }
    auto map1 = [&](const Simplex& s) {
        Simplex o;
        for (int v : s) o.push_back(id1.at(v));
        return o;
    };
    auto map2 = [&](const Simplex& s) {
        Simplex o;
        for (int v : s) o.push_back(id2.at(v));
        return o;
    };

    // B-simplices of K2 grouped by carrier.
    std::map<Simplex, std::vector<Simplex>> taus_in;  // K1 B-simplex β ↦ K2 simplices with carrier ⊆ β
    std::map<Simplex, Simplex> carrier_of_tau;
    for (const auto& tau : B2) carrier_of_tau[tau] = tau_carrier(tau);
    for (const auto& beta : B1)
        for (const auto& [tau, c] : carrier_of_tau)
            if (is_face(c, beta)) taus_in[beta].push_back(tau);

    // Simplices (v, τ) together with the data needed for their evaluators.
    struct Origin {
        Simplex v;    // K1 vertices (original labels)
        Simplex tau;  // K2 vertices (original labels)
    };
    std::map<Simplex, Origin> origin;
    std::vector<Simplex> gens;
    auto add = [&](const Simplex& v, const Simplex& tau) {
        Simplex s = map1(v);
        Simplex t = map2(tau);
        s.insert(s.end(), t.begin(), t.end());
        if (origin.emplace(s, Origin{v, tau}).second) gens.push_back(s);
    };
    for (int d = 0; d <= K2.dimension(); ++d)
        for (const auto& tau : K2.simplices(d)) add({}, tau);
    for (int d = 0; d <= K1.dimension(); ++d) {
        for (const auto& sigma : K1.simplices(d)) {
            if (B1.count(sigma)) continue;
            Simplex v, b;
            for (int x : sigma) (B1.count(Simplex{x}) ? b : v).push_back(x);
            add(v, {});
            if (b.empty()) continue;
            for (const auto& tau : taus_in[b]) add(v, tau);
        }
    }
    SimplicialComplex K = SimplicialComplex::from_simplices(gens);
    Triangulation out(K, t1.ambient());

    auto chart_of = [](const Triangulation& T, const Simplex& s) {
        for (const auto& f : T.complex().facets())
            if (is_face(s, f) && !T.chart(f).empty()) return T.chart(f);
        return std::string();
    };
    const auto& facets = K.facets();
    std::vector<SingularSimplex> evals(facets.size());
    std::vector<std::string> charts(facets.size());
    parallel_for(facets.size(), opts.jobs, [&](std::size_t i) {
        const Origin& o = origin.at(facets[i]);
        if (o.v.empty()) {
            evals[i] = t2.evaluator(o.tau);
            charts[i] = chart_of(t2, o.tau);
        } else if (o.tau.empty()) {
            evals[i] = t1.evaluator(o.v);
            charts[i] = chart_of(t1, o.v);
        } else {
            const Simplex& beta = carrier_of_tau.at(o.tau);
            Simplex sigma = o.v;
            sigma.insert(sigma.end(), beta.begin(), beta.end());
            std::sort(sigma.begin(), sigma.end());
            std::vector<int> vp, bp;
            for (int x : o.v) vp.push_back(pos_in(sigma, x));
            for (int x : beta) bp.push_back(pos_in(sigma, x));
            evals[i] = glued_simplex(t1.evaluator(sigma), vp, bp, t2.evaluator(o.tau), inverses.at(beta));
            charts[i] = chart_of(t1, sigma);
        }
    });
    for (std::size_t i = 0; i < facets.size(); ++i) {
        out.set_evaluator(facets[i], evals[i]);
        if (!charts[i].empty()) out.set_chart(facets[i], charts[i]);
    }

    // Marks: K1 parts outside B, all of K2, and (v, τ) whenever (v, carrier τ) is marked.
    std::set<std::string> names;
    for (const auto& [n, _] : t1.marks()) names.insert(n);
    for (const auto& [n, _] : t2.marks()) names.insert(n);
    for (const auto& name : names) {
        const std::set<Simplex> empty;
        const auto& m1 = t1.has_mark(name) ? t1.mark(name) : empty;
        const auto& m2 = t2.has_mark(name) ? t2.mark(name) : empty;
        std::vector<Simplex> marked;
        for (const auto& [s, o] : origin) {
            if (o.v.empty()) {
                if (m2.count(o.tau)) marked.push_back(s);
                continue;
            }
            Simplex sigma = o.v;
            if (!o.tau.empty()) {
                const Simplex& beta = carrier_of_tau.at(o.tau);
                sigma.insert(sigma.end(), beta.begin(), beta.end());
                std::sort(sigma.begin(), sigma.end());
            }
            if (m1.count(sigma)) marked.push_back(s);
        }
        out.set_mark(name, marked);
    }

    res.triangulation = std::move(out);
    if (opts.validate) res.check = validate(res.triangulation, opts.face_tol);
    return res;
}

CoverResult cover_and_triangulate(const std::vector<CoverPiece>& pieces, const GlueOptions& opts) {
    if (pieces.empty()) throw InputError("cover: no pieces");
    auto tagged = [](const CoverPiece& p) {
        Triangulation t = p.triangulation;
        for (const auto& f : t.complex().facets())
            if (t.chart(f).empty()) t.set_chart(f, p.chart);
        return t;
    };
    CoverResult res;
    Triangulation acc = tagged(pieces[0]);
    if (pieces.size() == 1 && opts.validate) res.steps.push_back(validate(acc, opts.face_tol));
    const std::string B = "__overlap";
    for (std::size_t k = 1; k < pieces.size(); ++k) {
        Triangulation next = tagged(pieces[k]);
        const std::string here = "X" + std::to_string(k + 1);
        std::vector<Simplex> b1, b2;
        if (acc.has_mark(here)) b1.assign(acc.mark(here).begin(), acc.mark(here).end());
        for (std::size_t j = 1; j <= k; ++j) {
            const std::string name = "X" + std::to_string(j);
            if (next.has_mark(name)) b2.insert(b2.end(), next.mark(name).begin(), next.mark(name).end());
        }
        acc.set_mark(B, b1);
        next.set_mark(B, b2);
        GlueInput in{acc, next, B, {}};
        GlueResult g = glue(in, opts);
        acc = std::move(g.triangulation);
        acc.erase_mark(B);
        res.steps.push_back(g.check);
    }
    res.triangulation = std::move(acc);
    return res;
}

}  // namespace periodlab
