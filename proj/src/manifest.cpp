#include "periodlab/manifest.hpp"

#include "periodlab/glue.hpp"
#include "periodlab/snf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace periodlab {

namespace {

std::string child(const std::string& ptr, const std::string& key) {
    std::string k;
    for (char c : key) {
        if (c == '~') k += "~0";
        else if (c == '/') k += "~1";
        else k += c;
    }
    return ptr + "/" + k;
}
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const Json& field(const Json& obj, const std::string& ptr, const char* key) {
    if (!obj.is_object()) throw SchemaError(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(child(ptr, key), "missing");
    return *it;
}

const Json& array(const Json& j, const std::string& ptr) {
    if (!j.is_array()) throw SchemaError(ptr, "expected an array");
    return j;
}

int integer(const Json& j, const std::string& ptr) {
    if (!j.is_number_integer()) throw SchemaError(ptr, "expected an integer");
    return j.get<int>();
}

std::string text(const Json& j, const std::string& ptr) {
    if (!j.is_string()) throw SchemaError(ptr, "expected a string");
    return j.get<std::string>();
}

Expr expression(const Json& j, const std::string& ptr, int arity) {
    try {
        return parse(text(j, ptr), arity);
    } catch (const ParseError& e) {
        throw SchemaError(ptr, e.what());
    } catch (const InputError& e) {
        throw SchemaError(ptr, e.what());
    }
}

Rational rational(const Json& j, const std::string& ptr) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        try {
            auto slash = s.find('/');
            if (slash == std::string::npos) return Rational(BigInt(s));
            BigInt den(s.substr(slash + 1));
            if (den == 0) throw SchemaError(ptr, "zero denominator");
            return Rational(BigInt(s.substr(0, slash)), den);
        } catch (const SchemaError&) {
            throw;
        } catch (const std::exception&) {
            throw SchemaError(ptr, "not a rational: \"" + s + "\"");
        }
    }
    throw SchemaError(ptr, "expected an integer or a \"p/q\" string");
}

std::vector<RationalPoint> points(const Json& j, const std::string& ptr) {
    std::vector<RationalPoint> out;
    for (std::size_t i = 0; i < array(j, ptr).size(); ++i) {
        const std::string p = child(ptr, i);
        RationalPoint v;
        for (std::size_t k = 0; k < array(j[i], p).size(); ++k) v.push_back(rational(j[i][k], child(p, k)));
        if (!out.empty() && v.size() != out[0].size()) throw SchemaError(p, "vertices have different sizes");
        out.push_back(std::move(v));
    }
    if (out.empty()) throw SchemaError(ptr, "needs at least one vertex");
    return out;
}

Simplex vertex_tuple(const Json& j, const std::string& ptr) {
    Simplex s;
    for (std::size_t i = 0; i < array(j, ptr).size(); ++i) s.push_back(integer(j[i], child(ptr, i)));
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw SchemaError(ptr, "repeated vertex");
    if (s.empty()) throw SchemaError(ptr, "empty simplex");
    return s;
}

void check_keys(const Json& obj, const std::string& ptr, std::initializer_list<const char*> allowed) {
    for (const auto& [k, _] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
            throw SchemaError(child(ptr, k), "unknown key");
    }
}

class Loader {
public:
    explicit Loader(const Json& root) : root_(root) {}

    Manifest run() {
        check_keys(root_, "", {"schema", "ambient_dim", "simplices", "chains", "forms", "complexes", "triangulations"});
        const std::string version = text(field(root_, "", "schema"), "/schema");
        if (version != kSchemaVersion)
            throw SchemaError("/schema", "unsupported schema \"" + version + "\" (expected \"" + kSchemaVersion + "\")");
        m_.ambient_dim = integer(field(root_, "", "ambient_dim"), "/ambient_dim");
        if (m_.ambient_dim < 1) throw SchemaError("/ambient_dim", "must be positive");

        index("simplices", simplex_entries_);
        for (const auto& [name, where] : simplex_entries_) m_.simplices[name] = named_simplex(name);
        for_each("forms", [&](const Json& e, const std::string& p, const std::string& name) { m_.forms.insert_or_assign(name, form(e, p)); });
        for_each("chains", [&](const Json& e, const std::string& p, const std::string& name) { m_.chains[name] = chain(e, p); });
        for_each("complexes",
                 [&](const Json& e, const std::string& p, const std::string& name) { m_.complexes[name] = complex(e, p); });
        for_each("triangulations", [&](const Json& e, const std::string& p, const std::string& name) {
            m_.triangulations[name] = triangulation(e, p);
        });
        return std::move(m_);
    }

private:
    using Entries = std::map<std::string, std::pair<const Json*, std::string>>;

    void index(const char* section, Entries& out) {
        auto it = root_.find(section);
        if (it == root_.end()) return;
        const std::string ptr = std::string("/") + section;
        for (std::size_t i = 0; i < array(*it, ptr).size(); ++i) {
            const std::string p = child(ptr, i);
            const std::string name = text(field((*it)[i], p, "name"), child(p, "name"));
            if (!out.emplace(name, std::make_pair(&(*it)[i], p)).second)
                throw SchemaError(child(p, "name"), "duplicate name \"" + name + "\"");
        }
    }

    void for_each(const char* section, const std::function<void(const Json&, const std::string&, const std::string&)>& fn) {
        Entries entries;
        index(section, entries);
        auto it = root_.find(section);
        if (it == root_.end()) return;
        // keep file order
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string p = child(std::string("/") + section, i);
            fn((*it)[i], p, (*it)[i]["name"].get<std::string>());
        }
    }

    SingularSimplex named_simplex(const std::string& name) {
        if (auto it = done_.find(name); it != done_.end()) return it->second;
        auto e = simplex_entries_.find(name);
        if (e == simplex_entries_.end()) throw InputError("unknown simplex \"" + name + "\"");
        if (!active_.insert(name).second) throw SchemaError(e->second.second, "simplex \"" + name + "\" refers to itself");
        SingularSimplex s = simplex(*e->second.first, e->second.second, true);
        active_.erase(name);
        done_[name] = s;
        return s;
    }

    SingularSimplex simplex(const Json& j, const std::string& ptr, bool named = false) {
        if (j.is_string()) {
            const std::string name = j.get<std::string>();
            if (!simplex_entries_.count(name)) throw SchemaError(ptr, "unknown simplex \"" + name + "\"");
            return named_simplex(name);
        }
        if (!j.is_object()) throw SchemaError(ptr, "expected a simplex object or name");
        SingularSimplex s;
        try {
            s = build(j, ptr, named);
        } catch (const SchemaError&) {
            throw;
        } catch (const InputError& e) {
            throw SchemaError(ptr, e.what());
        }
        if (s.ambient() != m_.ambient_dim)
            throw SchemaError(ptr, "simplex lands in R^" + std::to_string(s.ambient()) + ", ambient_dim is " +
                                       std::to_string(m_.ambient_dim));
        return s;
    }

    SingularSimplex build(const Json& j, const std::string& ptr, bool named) {
        if (named) check_keys(j, ptr, {"name", "dim", "components", "affine", "cone", "face", "compose", "prism", "glued"});
        if (j.contains("components")) {
            const int d = integer(field(j, ptr, "dim"), child(ptr, "dim"));
            if (d < 0) throw SchemaError(child(ptr, "dim"), "negative dimension");
            const std::string p = child(ptr, "components");
            std::vector<Expr> comps;
            for (std::size_t i = 0; i < array(j["components"], p).size(); ++i)
                comps.push_back(expression(j["components"][i], child(p, i), d));
            return SingularSimplex::from_exprs(d, std::move(comps));
        }
        if (j.contains("affine")) {
            auto v = points(j["affine"], child(ptr, "affine"));
            if (j.contains("dim") && integer(j["dim"], child(ptr, "dim")) + 1 != static_cast<int>(v.size()))
                throw SchemaError(child(ptr, "dim"), "does not match the number of vertices");
            return SingularSimplex::affine(std::move(v));
        }
        if (j.contains("cone")) return cone(simplex(j["cone"], child(ptr, "cone")));
        if (j.contains("face")) {
            const std::string p = child(ptr, "face");
            SingularSimplex base = simplex(field(j["face"], p, "simplex"), child(p, "simplex"));
            const int i = integer(field(j["face"], p, "index"), child(p, "index"));
            if (i < 0 || i > base.dim()) throw SchemaError(child(p, "index"), "face index out of range");
            return face(base, i);
        }
        if (j.contains("compose")) {
            const std::string p = child(ptr, "compose");
            SingularSimplex base = simplex(field(j["compose"], p, "simplex"), child(p, "simplex"));
            AffineMap alpha(points(field(j["compose"], p, "map"), child(p, "map")));
            if (alpha.target_dim() != base.dim()) throw SchemaError(child(p, "map"), "map does not land in the simplex domain");
            return compose(base, alpha);
        }
        if (j.contains("prism")) {
            const std::string p = child(ptr, "prism");
            SingularSimplex base = simplex(field(j["prism"], p, "simplex"), child(p, "simplex"));
            Expr f = expression(field(j["prism"], p, "profile"), child(p, "profile"), 1);
            AffineMap alpha(points(field(j["prism"], p, "piece"), child(p, "piece")));
            if (alpha.target_dim() != base.dim() + 1) throw SchemaError(child(p, "piece"), "piece does not land in [0,1] x simplex");
            return Prism(base, f).piece(alpha);
        }
        if (j.contains("glued")) {
            const std::string p = child(ptr, "glued");
            const Json& g = j["glued"];
            SingularSimplex sigma = simplex(field(g, p, "sigma"), child(p, "sigma"));
            SingularSimplex tau = simplex(field(g, p, "tau"), child(p, "tau"));
            SingularSimplex beta = simplex(field(g, p, "beta"), child(p, "beta"));
            auto ints = [&](const char* key) {
                const std::string q = child(p, key);
                std::vector<int> out;
                for (std::size_t i = 0; i < array(field(g, p, key), q).size(); ++i) out.push_back(integer(g[key][i], child(q, i)));
                return out;
            };
            double tol = 1e-12;
            if (g.contains("tol")) {
                if (!g["tol"].is_number()) throw SchemaError(child(p, "tol"), "expected a number");
                tol = g["tol"].get<double>();
            }
            return glued_simplex(sigma, ints("v"), ints("b"), tau, std::make_shared<SimplexInverse>(beta, tol));
        }
        throw SchemaError(ptr, "unknown simplex kind (expected components, affine, cone, face, compose, prism or glued)");
    }

    Form form(const Json& e, const std::string& ptr) {
        check_keys(e, ptr, {"name", "degree", "terms"});
        const int degree = integer(field(e, ptr, "degree"), child(ptr, "degree"));
        if (degree < 0 || degree > m_.ambient_dim) throw SchemaError(child(ptr, "degree"), "degree out of range");
        Form w(degree, m_.ambient_dim);
        const std::string tp = child(ptr, "terms");
        const Json& terms = array(field(e, ptr, "terms"), tp);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string p = child(tp, i);
            std::vector<int> idx;
            const std::string ip = child(p, "indices");
            const Json& ij = degree == 0 && !terms[i].contains("indices") ? Json::array() : field(terms[i], p, "indices");
            for (std::size_t k = 0; k < array(ij, ip).size(); ++k) idx.push_back(integer(ij[k], child(ip, k)));
            if (static_cast<int>(idx.size()) != degree) throw SchemaError(ip, "expected " + std::to_string(degree) + " indices");
            try {
                w.add_term(idx, expression(field(terms[i], p, "coeff"), child(p, "coeff"), m_.ambient_dim));
            } catch (const SchemaError&) {
                throw;
            } catch (const InputError& err) {
                throw SchemaError(ip, err.what());
            }
        }
        return w;
    }

    Chain chain(const Json& e, const std::string& ptr) {
        check_keys(e, ptr, {"name", "degree", "terms"});
        const std::string tp = child(ptr, "terms");
        const Json& terms = array(field(e, ptr, "terms"), tp);
        int degree = -1;
        if (e.contains("degree")) degree = integer(e["degree"], child(ptr, "degree"));
        std::vector<std::pair<SingularSimplex, std::int64_t>> parsed;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string p = child(tp, i);
            SingularSimplex s = simplex(field(terms[i], p, "simplex"), child(p, "simplex"));
            std::int64_t k = 1;
            if (terms[i].contains("coeff")) {
                if (!terms[i]["coeff"].is_number_integer()) throw SchemaError(child(p, "coeff"), "expected an integer");
                k = terms[i]["coeff"].get<std::int64_t>();
            }
            if (degree < 0) degree = s.dim();
            if (s.dim() != degree) throw SchemaError(child(p, "simplex"), "simplex dimension differs from the chain degree");
            parsed.emplace_back(s, k);
        }
        if (degree < 0) throw SchemaError(ptr, "an empty chain needs a \"degree\"");
        Chain c(degree);
        for (const auto& [s, k] : parsed) c.add(s, k);
        return c;
    }

    SimplicialComplex complex(const Json& e, const std::string& ptr) {
        check_keys(e, ptr, {"name", "vertices", "simplices"});
        std::vector<Simplex> gens;
        std::set<int> declared;
        if (e.contains("vertices")) {
            const std::string vp = child(ptr, "vertices");
            for (std::size_t i = 0; i < array(e["vertices"], vp).size(); ++i) {
                declared.insert(integer(e["vertices"][i], child(vp, i)));
                gens.push_back({e["vertices"][i].get<int>()});
            }
        }
        const std::string sp = child(ptr, "simplices");
        const Json& s = array(field(e, ptr, "simplices"), sp);
        for (std::size_t i = 0; i < s.size(); ++i) {
            Simplex t = vertex_tuple(s[i], child(sp, i));
            if (!declared.empty())
                for (int v : t)
                    if (!declared.count(v)) throw SchemaError(child(sp, i), "vertex " + std::to_string(v) + " is not declared");
            gens.push_back(std::move(t));
        }
        return SimplicialComplex::from_simplices(gens);
    }

    Triangulation triangulation(const Json& e, const std::string& ptr) {
        check_keys(e, ptr, {"name", "complex", "positions", "evaluators", "orientation", "charts", "marks"});
        const std::string cp = child(ptr, "complex");
        const Json& cj = field(e, ptr, "complex");
        SimplicialComplex K;
        if (cj.is_string()) {
            auto it = m_.complexes.find(cj.get<std::string>());
            if (it == m_.complexes.end()) throw SchemaError(cp, "unknown complex \"" + cj.get<std::string>() + "\"");
            K = it->second;
        } else {
            K = complex(cj, cp);
        }
        auto facet_of = [&](const Json& j, const std::string& p) {
            Simplex f = vertex_tuple(j, p);
            if (!K.contains(f)) throw SchemaError(p, "not a simplex of the complex");
            return f;
        };
        Triangulation T;
        if (e.contains("positions")) {
            const std::string pp = child(ptr, "positions");
            if (!e["positions"].is_object()) throw SchemaError(pp, "expected an object from vertex to point");
            std::map<int, RationalPoint> pos;
            for (const auto& [k, v] : e["positions"].items()) {
                int vertex = 0;
                try {
                    std::size_t used = 0;
                    vertex = std::stoi(k, &used);
                    if (used != k.size()) throw std::invalid_argument(k);
                } catch (const std::exception&) {
                    throw SchemaError(child(pp, k), "vertex keys must be integers");
                }
                const std::string q = child(pp, k);
                RationalPoint p;
                for (std::size_t i = 0; i < array(v, q).size(); ++i) p.push_back(rational(v[i], child(q, i)));
                if (static_cast<int>(p.size()) != m_.ambient_dim) throw SchemaError(q, "point has the wrong dimension");
                pos[vertex] = std::move(p);
            }
            try {
                T = affine_triangulation(K, pos);
            } catch (const InputError& err) {
                throw SchemaError(pp, err.what());
            }
        } else {
            T = Triangulation(K, m_.ambient_dim);
        }
        if (e.contains("evaluators")) {
            const std::string ep = child(ptr, "evaluators");
            for (std::size_t i = 0; i < array(e["evaluators"], ep).size(); ++i) {
                const std::string p = child(ep, i);
                const Json& item = e["evaluators"][i];
                Simplex f = facet_of(field(item, p, "facet"), child(p, "facet"));
                SingularSimplex s = simplex(field(item, p, "simplex"), child(p, "simplex"));
                try {
                    T.set_evaluator(f, s);
                } catch (const InputError& err) {
                    throw SchemaError(p, err.what());
                }
            }
        }
        for (const auto& f : K.facets())
            if (!T.has_evaluator(f)) throw SchemaError(ptr, "facet " + chain_label(f) + " has no evaluator");
        if (e.contains("orientation")) {
            const std::string op = child(ptr, "orientation");
            for (std::size_t i = 0; i < array(e["orientation"], op).size(); ++i) {
                const std::string p = child(op, i);
                Simplex f = facet_of(field(e["orientation"][i], p, "facet"), child(p, "facet"));
                const int sign = integer(field(e["orientation"][i], p, "sign"), child(p, "sign"));
                if (sign != 1 && sign != -1) throw SchemaError(child(p, "sign"), "sign must be 1 or -1");
                T.set_orientation(f, sign);
            }
        }
        if (e.contains("charts")) {
            const std::string chp = child(ptr, "charts");
            for (std::size_t i = 0; i < array(e["charts"], chp).size(); ++i) {
                const std::string p = child(chp, i);
                Simplex f = facet_of(field(e["charts"][i], p, "facet"), child(p, "facet"));
                T.set_chart(f, text(field(e["charts"][i], p, "chart"), child(p, "chart")));
            }
        }
        if (e.contains("marks")) {
            const std::string mp = child(ptr, "marks");
            if (!e["marks"].is_object()) throw SchemaError(mp, "expected an object from mark name to simplices");
            for (const auto& [name, list] : e["marks"].items()) {
                const std::string q = child(mp, name);
                std::vector<Simplex> ss;
                for (std::size_t i = 0; i < array(list, q).size(); ++i) ss.push_back(facet_of(list[i], child(q, i)));
                T.set_mark(name, ss);
            }
        }
        return T;
    }

    static std::string chain_label(const Simplex& s) {
        std::string out = "[";
        for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
        return out + "]";
    }

    const Json& root_;
    Manifest m_;
    Entries simplex_entries_;
    std::map<std::string, SingularSimplex> done_;
    std::set<std::string> active_;
};

template <class T>
const T& lookup(const std::map<std::string, T>& m, const std::string& name, const char* what) {
    auto it = m.find(name);
    if (it == m.end()) throw InputError(std::string("unknown ") + what + " \"" + name + "\"");
    return it->second;
}

Json points_to_json(const std::vector<RationalPoint>& pts) {
    Json out = Json::array();
    for (const auto& p : pts) {
        Json v = Json::array();
        for (const auto& c : p) v.push_back(rational_to_json(c));
        out.push_back(std::move(v));
    }
    return out;
}

Json tuple_json(const Simplex& s) { return Json(s); }

void dump(const Json& j, std::string& out, int indent, int level) {
    auto newline = [&](int l) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * l), ' ');
    };
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first) out += ',';
            first = false;
            newline(level + 1);
            out += Json(k).dump();
            out += indent < 0 ? ":" : ": ";
            dump(v, out, indent, level + 1);
        }
        newline(level);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // short arrays of scalars stay on one line
        const bool flat = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); }) && j.size() <= 16;
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += flat && indent >= 0 ? ", " : ",";
            if (!flat) newline(level + 1);
            dump(j[i], out, indent, level + 1);
        }
        if (!flat) newline(level);
        out += ']';
        return;
    }
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        if (!std::isfinite(x)) {
            out += "null";
            return;
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out += buf;
        if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
        return;
    }
    default:
        out += j.dump();
    }
}

}  // namespace

const SingularSimplex& Manifest::simplex(const std::string& name) const { return lookup(simplices, name, "simplex"); }
const Chain& Manifest::chain(const std::string& name) const { return lookup(chains, name, "chain"); }
const Form& Manifest::form(const std::string& name) const { return lookup(forms, name, "form"); }
const SimplicialComplex& Manifest::complex(const std::string& name) const { return lookup(complexes, name, "complex"); }
const Triangulation& Manifest::triangulation(const std::string& name) const {
    return lookup(triangulations, name, "triangulation");
}

Manifest parse_manifest(const Json& j) {
    if (!j.is_object()) throw SchemaError("", "a manifest is a JSON object");
    return Loader(j).run();
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest \"" + path + "\"");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": invalid JSON (" + e.what() + ")");
    }
    return parse_manifest(j);
}

Json rational_to_json(const Rational& q) {
    if (denominator(q) == 1 && abs(numerator(q)) < BigInt(1) << 53) return Json(numerator(q).convert_to<long long>());
    return Json(q.str());
}

Json simplex_to_json(const SingularSimplex& s) {
    const SimplexParts p = parts(s);
    Json out = Json::object();
    switch (p.kind) {
    case SimplexKind::ExprMap: {
        out["dim"] = s.dim();
        Json comps = Json::array();
        for (const Expr& e : p.components) comps.push_back(to_string(e));
        out["components"] = std::move(comps);
        break;
    }
    case SimplexKind::Affine: out["affine"] = points_to_json(p.map.vertices()); break;
    case SimplexKind::Cone: out["cone"] = simplex_to_json(p.children[0]); break;
    case SimplexKind::Composed:
        out["compose"] = {{"simplex", simplex_to_json(p.children[0])}, {"map", points_to_json(p.map.vertices())}};
        break;
    case SimplexKind::Prism:
        out["prism"] = {{"simplex", simplex_to_json(p.children[0])},
                        {"profile", to_string(p.profile)},
                        {"piece", points_to_json(p.map.vertices())}};
        break;
    case SimplexKind::Glued:
        out["glued"] = {{"sigma", simplex_to_json(p.children[0])}, {"tau", simplex_to_json(p.children[1])},
                        {"beta", simplex_to_json(p.children[2])},  {"v", p.v_pos},
                        {"b", p.b_pos},                            {"tol", p.tol}};
        break;
    }
    return out;
}

Json chain_to_json(const std::string& name, const Chain& c) {
    Json terms = Json::array();
    for (const auto& t : c.terms()) terms.push_back({{"simplex", simplex_to_json(t.simplex)}, {"coeff", t.coeff}});
    return {{"name", name}, {"degree", c.degree()}, {"terms", std::move(terms)}};
}

Json form_to_json(const std::string& name, const Form& w) {
    Json terms = Json::array();
    for (const auto& [idx, coeff] : w.terms()) terms.push_back({{"indices", idx}, {"coeff", to_string(coeff)}});
    return {{"name", name}, {"degree", w.degree()}, {"terms", std::move(terms)}};
}

Json complex_to_json(const std::string& name, const SimplicialComplex& K) {
    Json facets = Json::array();
    for (const auto& f : K.facets()) facets.push_back(tuple_json(f));
    Json out = Json::object();
    if (!name.empty()) out["name"] = name;
    out["simplices"] = std::move(facets);
    return out;
}

Json triangulation_to_json(const std::string& name, const Triangulation& T) {
    Json out = {{"name", name}, {"complex", complex_to_json("", T.complex())}};
    Json evals = Json::array();
    for (const auto& [f, s] : T.evaluators()) evals.push_back({{"facet", tuple_json(f)}, {"simplex", simplex_to_json(s)}});
    out["evaluators"] = std::move(evals);
    Json orient = Json::array();
    for (const auto& f : T.complex().facets())
        if (T.orientation(f) != 1) orient.push_back({{"facet", tuple_json(f)}, {"sign", T.orientation(f)}});
    if (!orient.empty()) out["orientation"] = std::move(orient);
    if (!T.charts().empty()) {
        Json charts = Json::array();
        for (const auto& [f, c] : T.charts()) charts.push_back({{"facet", tuple_json(f)}, {"chart", c}});
        out["charts"] = std::move(charts);
    }
    if (!T.marks().empty()) {
        Json marks = Json::object();
        for (const auto& [mname, ss] : T.marks()) {
            Json list = Json::array();
            for (const auto& s : ss) {
                bool maximal = true;
                for (const auto& t : ss)
                    if (t.size() > s.size() && is_face(s, t)) {
                        maximal = false;
                        break;
                    }
                if (maximal) list.push_back(tuple_json(s));
            }
            marks[mname] = std::move(list);
        }
        out["marks"] = std::move(marks);
    }
    return out;
}

Json manifest_to_json(const Manifest& m) {
    Json out = {{"schema", kSchemaVersion}, {"ambient_dim", m.ambient_dim}};
    auto section = [&](const char* key, auto&& items) {
        if (!items.empty()) out[key] = std::move(items);
    };
    Json simplices = Json::array();
    for (const auto& [name, s] : m.simplices) {
        Json j = {{"name", name}};
        j.update(simplex_to_json(s));
        simplices.push_back(std::move(j));
    }
    section("simplices", simplices);
    Json chains = Json::array();
    for (const auto& [name, c] : m.chains) chains.push_back(chain_to_json(name, c));
    section("chains", chains);
    Json forms = Json::array();
    for (const auto& [name, w] : m.forms) forms.push_back(form_to_json(name, w));
    section("forms", forms);
    Json complexes = Json::array();
    for (const auto& [name, K] : m.complexes) complexes.push_back(complex_to_json(name, K));
    section("complexes", complexes);
    Json tris = Json::array();
    for (const auto& [name, T] : m.triangulations) tris.push_back(triangulation_to_json(name, T));
    section("triangulations", tris);
    return out;
}

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump(j, out, indent, 0);
    return out;
}

}  // namespace periodlab
