#include "periodlab/triangulation.hpp"

#include "periodlab/chain.hpp"
#include "periodlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace periodlab {

namespace {

std::string tuple_string(const Simplex& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + ")";
}

int position_in(const Simplex& s, int v) {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) throw InputError("vertex " + std::to_string(v) + " not in " + tuple_string(s));
    return static_cast<int>(it - s.begin());
}

}  // namespace

Triangulation::Triangulation(SimplicialComplex K, int ambient) : K_(std::move(K)), ambient_(ambient) {
    if (ambient < 1) throw InputError("triangulation: ambient dimension must be positive");
}

void Triangulation::check_facet(const Simplex& facet) const {
    const auto& f = K_.facets();
    if (!std::binary_search(f.begin(), f.end(), facet, [](const Simplex& a, const Simplex& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        }))
        throw InputError("triangulation: " + tuple_string(facet) + " is not a facet");
}

void Triangulation::set_evaluator(const Simplex& facet, SingularSimplex s) {
    check_facet(facet);
    if (s.dim() + 1 != static_cast<int>(facet.size()))
        throw InputError("triangulation: evaluator of " + tuple_string(facet) + " has dimension " + std::to_string(s.dim()));
    if (s.ambient() != ambient_)
        throw InputError("triangulation: evaluator of " + tuple_string(facet) + " lives in R^" + std::to_string(s.ambient()));
    evaluators_[facet] = std::move(s);
}

AffineMap face_inclusion(const Simplex& face, const Simplex& facet) {
    const int d = static_cast<int>(facet.size()) - 1;
    std::vector<RationalPoint> verts;
    for (int v : face) verts.push_back(standard_vertex(d, position_in(facet, v)));
    return AffineMap(std::move(verts));
}

SingularSimplex Triangulation::evaluator(const Simplex& s) const {
    if (auto it = evaluators_.find(s); it != evaluators_.end()) return it->second;
    for (const auto& [facet, ev] : evaluators_)
        if (is_face(s, facet)) return compose(ev, face_inclusion(s, facet));
    throw InputError("triangulation: no evaluator covers " + tuple_string(s));
}

std::vector<double> Triangulation::vertex_position(int v) const {
    std::vector<double> none;
    return evaluator({v})(none);
}

void Triangulation::set_orientation(const Simplex& facet, int sign) {
    check_facet(facet);
    if (sign != 1 && sign != -1) throw InputError("triangulation: orientation must be +1 or -1");
    orientation_[facet] = sign;
}

int Triangulation::orientation(const Simplex& facet) const {
    auto it = orientation_.find(facet);
    return it == orientation_.end() ? 1 : it->second;
}

void Triangulation::set_chart(const Simplex& facet, std::string chart) {
    check_facet(facet);
    charts_[facet] = std::move(chart);
}

std::string Triangulation::chart(const Simplex& facet) const {
    auto it = charts_.find(facet);
    return it == charts_.end() ? std::string() : it->second;
}

void Triangulation::set_mark(const std::string& name, const std::vector<Simplex>& simplices) {
    std::set<Simplex> closure;
    for (Simplex s : simplices) {
        std::sort(s.begin(), s.end());
        if (!K_.contains(s)) throw InputError("mark '" + name + "': " + tuple_string(s) + " is not in the complex");
        for (unsigned long mask = 1; mask < (1ul << s.size()); ++mask) {
            Simplex f;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (mask & (1ul << i)) f.push_back(s[i]);
            closure.insert(std::move(f));
        }
    }
    marks_[name] = std::move(closure);
}

const std::set<Simplex>& Triangulation::mark(const std::string& name) const {
    auto it = marks_.find(name);
    if (it == marks_.end()) throw InputError("unknown mark '" + name + "'");
    return it->second;
}

Triangulation affine_triangulation(const SimplicialComplex& K, const std::map<int, RationalPoint>& positions) {
    if (positions.empty()) throw InputError("affine triangulation: no vertex positions");
    const int n = static_cast<int>(positions.begin()->second.size());
    Triangulation T(K, n);
    for (const auto& f : K.facets()) {
        std::vector<RationalPoint> verts;
        for (int v : f) {
            auto it = positions.find(v);
            if (it == positions.end()) throw InputError("affine triangulation: vertex " + std::to_string(v) + " has no position");
            if (static_cast<int>(it->second.size()) != n) throw InputError("affine triangulation: inconsistent coordinates");
            verts.push_back(it->second);
        }
        T.set_evaluator(f, SingularSimplex::affine(std::move(verts)));
    }
    return T;
}

TriangulationCheck validate(const Triangulation& T, double face_tol, int resolution, double collision_tol) {
    TriangulationCheck rep;
    const auto& K = T.complex();
    for (const auto& f : K.facets()) {
        if (!T.has_evaluator(f)) {
            rep.ok = false;
            rep.problems.push_back("facet " + tuple_string(f) + " has no evaluator");
        }
    }
    if (!rep.ok) return rep;

    // Face compatibility.
    for (int d = 0; d <= K.dimension(); ++d) {
        auto grid = comparison_grid(d);
        for (const auto& s : K.simplices(d)) {
            auto owners = K.cofacets_of(s);
            if (owners.size() < 2) continue;
            std::vector<std::vector<double>> ref;
            SingularSimplex first = compose(T.evaluators().at(owners[0]), face_inclusion(s, owners[0]));
            for (const auto& p : grid) ref.push_back(first(p));
            for (std::size_t o = 1; o < owners.size(); ++o) {
                SingularSimplex other = compose(T.evaluators().at(owners[o]), face_inclusion(s, owners[o]));
                for (std::size_t g = 0; g < grid.size(); ++g) {
                    auto v = other(grid[g]);
                    for (std::size_t r = 0; r < v.size(); ++r) {
                        double gap = std::abs(v[r] - ref[g][r]);
                        rep.max_face_gap = std::max(rep.max_face_gap, gap);
                        if (!(gap <= face_tol)) {
                            if (rep.faces_compatible)
                                rep.problems.push_back("evaluators of " + tuple_string(owners[0]) + " and " +
                                                       tuple_string(owners[o]) + " disagree on " + tuple_string(s));
                            rep.faces_compatible = false;
                        }
                    }
                }
            }
        }
    }

    // Injectivity sample on a barycentric grid of |K|.
    struct Sample {
        std::vector<std::pair<int, int>> key;  // (vertex, weight) with weights summing to resolution
        std::vector<double> image;
    };
    std::map<std::vector<std::pair<int, int>>, std::size_t> seen;
    std::vector<Sample> samples;
    const int R = std::max(1, resolution);
    for (const auto& [facet, ev] : T.evaluators()) {
        const int d = static_cast<int>(facet.size()) - 1;
        std::vector<int> w(d + 1, 0);
        auto rec = [&](auto&& self, int k, int left) -> void {
            if (k == d) {
                w[d] = left;
                std::vector<std::pair<int, int>> key;
                for (int j = 0; j <= d; ++j)
                    if (w[j]) key.emplace_back(facet[j], w[j]);
                if (seen.count(key)) return;
                std::vector<double> x(d);
                for (int j = 1; j <= d; ++j) x[j - 1] = static_cast<double>(w[j]) / R;
                seen[key] = samples.size();
                samples.push_back({key, ev(x)});
                return;
            }
            for (int a = 0; a <= left; ++a) {
                w[k] = a;
                self(self, k + 1, left - a);
            }
        };
        rec(rec, 0, R);
    }
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return samples[a].image[0] < samples[b].image[0] || (samples[a].image[0] == samples[b].image[0] && a < b);
    });
    double best = std::numeric_limits<double>::infinity();
    std::size_t collisions = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& a = samples[order[i]].image;
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const auto& b = samples[order[j]].image;
            const double dx = b[0] - a[0];
            if (dx > best && dx > collision_tol) break;
            double dist = 0;
            for (std::size_t r = 0; r < a.size(); ++r) dist += (a[r] - b[r]) * (a[r] - b[r]);
            dist = std::sqrt(dist);
            best = std::min(best, dist);
            if (dist <= collision_tol) {
                if (collisions++ < 3) rep.problems.push_back("sample points of distinct simplices collide in the image");
                rep.injective = false;
            }
        }
    }
    rep.min_separation = samples.size() > 1 ? best : 0;
    rep.ok = rep.faces_compatible && rep.injective;
    return rep;
}

Triangulation subdivide(const Triangulation& T) {
    const auto& K = T.complex();
    ComplexSubdivision sd = barycentric_subdivision(K);
    std::map<Simplex, int> id;
    for (std::size_t v = 0; v < sd.carriers.size(); ++v) id[sd.carriers[v]] = static_cast<int>(v);
    Triangulation out(sd.complex, T.ambient());
    for (const auto& f : K.facets()) {
        const int d = static_cast<int>(f.size()) - 1;
        Simplex perm = f;
        do {
            Simplex flag;
            Simplex prefix;
            for (int v : perm) {
                prefix.push_back(v);
                Simplex sorted = prefix;
                std::sort(sorted.begin(), sorted.end());
                flag.push_back(id.at(sorted));
            }
            std::sort(flag.begin(), flag.end());
            std::vector<RationalPoint> verts;
            for (int nv : flag) {
                std::vector<int> local;
                for (int v : sd.carriers[nv]) local.push_back(position_in(f, v));
                verts.push_back(barycenter(d, local));
            }
            AffineMap alpha(std::move(verts));
            if (T.has_evaluator(f)) out.set_evaluator(flag, compose(T.evaluators().at(f), alpha));
            out.set_orientation(flag, T.orientation(f) * alpha.orientation());
            if (!T.chart(f).empty()) out.set_chart(flag, T.chart(f));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    for (const auto& [name, closure] : T.marks()) {
        std::vector<Simplex> inside;
        for (int d = 0; d <= sd.complex.dimension(); ++d)
            for (const auto& s : sd.complex.simplices(d)) {
                bool all = true;
                for (int nv : s) all = all && closure.count(sd.carriers[nv]);
                if (all) inside.push_back(s);
            }
        out.set_mark(name, inside);
    }
    return out;
}

bool satisfies_B_condition(const Triangulation& T, const std::string& mark) {
    const auto& B = T.mark(mark);
    const auto& K = T.complex();
    for (int d = 1; d <= K.dimension(); ++d)
        for (const auto& s : K.simplices(d)) {
            if (B.count(s)) continue;
            bool all = true;
            for (int v : s) all = all && B.count(Simplex{v});
            if (all) return false;
        }
    return true;
}

Triangulation enforce_B_condition(const Triangulation& T, const std::string& mark, int max_rounds) {
    Triangulation cur = T;
    for (int round = 0;; ++round) {
        if (satisfies_B_condition(cur, mark)) return cur;
        if (round >= max_rounds)
            throw Error("enforce_B_condition: mark '" + mark + "' still violates the condition after " +
                        std::to_string(max_rounds) + " subdivisions; it is not supported on a subcomplex");
        cur = subdivide(cur);
    }
}

}  // namespace periodlab
