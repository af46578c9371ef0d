#include "periodlab/cli.hpp"

#include "periodlab/glue.hpp"
#include "periodlab/homology.hpp"
#include "periodlab/manifest.hpp"
#include "periodlab/parallel.hpp"
#include "periodlab/periods.hpp"
#include "periodlab/stokes.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace periodlab::cli {

namespace {

struct Config {
    double tol = 0;
    double abs_tol = 0;
    int max_depth = 40;
    int jobs = 0;
    bool deterministic = false;
    std::string output = "json";
    std::uint64_t seed = 0;

    QuadOptions quad() const {
        QuadOptions q;
        q.tol = tol;
        q.abs_tol = abs_tol;
        q.max_depth = max_depth;
        q.jobs = resolve_jobs(jobs);
        return q;
    }
};

// What a command produced: the JSON results, an optional CSV table and the exit code.
struct Outcome_ {
    Json results;
    std::optional<std::string> csv;
    int code = 0;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json quad_json(const QuadResult& r) {
    return {{"value", r.value},
            {"error_estimate", r.error_estimate},
            {"abs_integral_estimate", r.abs_integral_estimate},
            {"converged", r.converged},
            {"subdivisions", r.subdivisions},
            {"depth_reached", r.depth_reached},
            {"tolerance", r.tolerance}};
}

Json stokes_json(const StokesReport& r) {
    Json faces = Json::array();
    for (const auto& f : r.faces) faces.push_back({{"index", f.index}, {"sign", f.sign}, {"integral", quad_json(f.result)}});
    return {{"lhs", quad_json(r.lhs)}, {"faces", std::move(faces)}, {"rhs", r.rhs},           {"residual", r.residual},
            {"tolerance", r.tolerance}, {"converged", r.converged}, {"verdict", outcome_name(r.verdict)}};
}

int verdict_code(Outcome o) { return o == Outcome::Pass ? 0 : 1; }

Json tuple(const Simplex& s) { return Json(s); }

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void write_file(const std::string& path, const Json& j) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write \"" + path + "\"");
    f << dump_json(j) << "\n";
}

// A chain named by --chain or a single --simplex.
Chain target_chain(const Manifest& m, const std::string& chain, const std::string& simplex) {
    if (!chain.empty() && !simplex.empty()) throw InputError("give either --chain or --simplex, not both");
    if (!chain.empty()) return m.chain(chain);
    if (!simplex.empty()) return Chain::of(m.simplex(simplex));
    throw InputError("missing --chain or --simplex");
}

Outcome_ check_volume(const Manifest& m, const Config& cfg, const std::string& chain, const std::string& simplex) {
    Chain c = target_chain(m, chain, simplex);
    Outcome_ o;
    Json items = Json::array();
    std::string csv = "simplex,index,value,error_estimate,converged,verdict\n";
    bool all_yes = true;
    std::size_t n = 0;
    for (const auto& t : c.terms()) {
        VolumeReport r = finite_volume_check(t.simplex, cfg.quad());
        Json entries = Json::array();
        for (const auto& e : r.entries) {
            Json item = {{"index", e.index}, {"integral", quad_json(e.result)}, {"verdict", verdict_name(e.verdict)}};
            if (!e.shells.empty()) item["shells"] = e.shells;
            entries.push_back(std::move(item));
            std::string idx;
            for (int k : e.index) idx += (idx.empty() ? "" : " ") + std::to_string(k);
            csv += std::to_string(n) + "," + csv_field(idx) + "," + num(e.result.value) + "," + num(e.result.error_estimate) +
                   "," + (e.result.converged ? "true" : "false") + "," + verdict_name(e.verdict) + "\n";
        }
        items.push_back({{"term", n}, {"coeff", t.coeff}, {"simplex", simplex_to_json(t.simplex)}, {"verdict", verdict_name(r.verdict)},
                         {"entries", std::move(entries)}});
        all_yes = all_yes && r.verdict == Verdict::Yes;
        ++n;
    }
    o.results = {{"terms", std::move(items)}, {"finite_volume", all_yes}};
    o.csv = csv;
    o.code = all_yes ? 0 : 1;
    return o;
}

Outcome_ check_stokes(const Manifest& m, const Config& cfg, const std::string& chain, const std::string& simplex,
                      const std::string& tri, const std::string& form) {
    if (form.empty()) throw InputError("missing --form");
    const Form& w = m.form(form);
    StokesOptions so;
    so.quad = cfg.quad();
    so.quad.tol = 0;  // integration tolerances stay automatic; --tol is the residual threshold
    if (cfg.tol > 0) so.abs_tol = so.rel_tol = cfg.tol;
    if (cfg.abs_tol > 0) so.quad.abs_tol = cfg.abs_tol;
    Outcome_ o;
    if (!tri.empty()) {
        if (!chain.empty() || !simplex.empty()) throw InputError("give one of --triangulation, --chain, --simplex");
        auto r = triangulated_stokes(m.triangulation(tri), w, so);
        Json interior = Json::array();
        for (const auto& p : r.interior) {
            Json owners = Json::array();
            for (const auto& s : p.owners) owners.push_back(tuple(s));
            interior.push_back({{"face", tuple(p.face)}, {"owners", owners}, {"contributions", p.contributions}, {"mismatch", p.mismatch}});
        }
        Json boundary = Json::array();
        for (const auto& [f, sign] : r.boundary_faces) boundary.push_back({{"face", tuple(f)}, {"sign", sign}});
        Json nm = Json::array();
        for (const auto& s : r.non_manifold) nm.push_back(tuple(s));
        o.results = {{"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"interior_faces", std::move(interior)},
                     {"max_cancellation", r.max_cancellation},
                     {"boundary_faces", std::move(boundary)},
                     {"boundary_integral", r.boundary_integral},
                     {"non_manifold", std::move(nm)},
                     {"residual", r.residual},
                     {"tolerance", r.tolerance},
                     {"converged", r.converged},
                     {"verdict", outcome_name(r.verdict)}};
        o.code = verdict_code(r.verdict);
        return o;
    }
    Chain c = target_chain(m, chain, simplex);
    auto r = check_chain(c, w, so);
    Json terms = Json::array();
    for (std::size_t i = 0; i < r.terms.size(); ++i) {
        Json t = stokes_json(r.terms[i]);
        t["coeff"] = r.coefficients[i];
        terms.push_back(std::move(t));
    }
    o.results = {{"lhs", r.lhs},
                 {"rhs", r.rhs},
                 {"residual", r.residual},
                 {"residual_sum", r.residual_sum},
                 {"tolerance", r.tolerance},
                 {"converged", r.converged},
                 {"verdict", outcome_name(r.verdict)},
                 {"terms", std::move(terms)}};
    o.code = verdict_code(r.verdict);
    return o;
}

Outcome_ cone_command(const Manifest& m, const Config& cfg, const std::string& chain, const std::string& simplex,
                      const std::string& write) {
    Chain c = target_chain(m, chain, simplex);
    Chain hc = cone(c);
    // ∂ĥc = c − ĥ∂c (degree ≥ 1) or c − (Σk)[0] (degree 0)
    Chain expected = c;
    if (c.degree() >= 1) {
        expected = c - cone(boundary(c));
    } else {
        std::int64_t total = 0;
        for (const auto& t : c.terms()) total += t.coeff;
        expected.add(SingularSimplex::point(RationalPoint(m.ambient_dim, Rational(0))), -total);
    }
    const bool identity = chains_geometrically_equal(boundary(hc), expected, 1e-12);

    // ĥσ ∘ q = (1 − t) σ at random points
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int samples = 1000;
    double max_err = 0;
    for (const auto& t : c.terms()) {
        const int d = t.simplex.dim();
        SingularSimplex h = cone(t.simplex);
        std::vector<double> y(m.ambient_dim), z(m.ambient_dim);
        for (int s = 0; s < samples; ++s) {
            // uniform point of Δ_d by sorted spacings
            std::vector<double> cuts(d);
            for (double& v : cuts) v = U(rng);
            std::sort(cuts.begin(), cuts.end());
            std::vector<double> b(d);
            for (int k = 0; k < d; ++k) b[k] = cuts[k] - (k ? cuts[k - 1] : 0.0);
            const double tt = U(rng) * 0.999;
            auto a = prism_q(tt, b);
            t.simplex.eval(b, y);
            h.eval(a, z);
            for (int r = 0; r < m.ambient_dim; ++r)
                max_err = std::max(max_err, std::abs(z[r] - (1 - tt) * y[r]) / (1 + std::abs(y[r])));
        }
    }
    Manifest outm;
    outm.ambient_dim = m.ambient_dim;
    outm.chains["cone"] = hc;
    Json mj = manifest_to_json(outm);
    if (!write.empty()) write_file(write, mj);
    Outcome_ o;
    o.results = {{"chain", chain_to_json("cone", hc)},
                 {"boundary_identity", identity},
                 {"prism_check", {{"samples_per_term", samples}, {"seed", cfg.seed}, {"max_error", max_err}}}};
    o.code = identity && max_err <= 1e-12 ? 0 : 1;
    return o;
}

Json check_json(const TriangulationCheck& c) {
    return {{"ok", c.ok},
            {"faces_compatible", c.faces_compatible},
            {"injective", c.injective},
            {"max_face_gap", c.max_face_gap},
            {"min_separation", c.min_separation},
            {"problems", c.problems},
            {"note", "sampled, not certified"}};
}

Outcome_ subdivide_command(const Manifest& m, const Config&, const std::string& chain, const std::string& simplex,
                           const std::string& tri, int times, const std::string& write) {
    if (times < 1) throw InputError("--times must be at least 1");
    Manifest outm;
    outm.ambient_dim = m.ambient_dim;
    Outcome_ o;
    if (!tri.empty()) {
        if (!chain.empty() || !simplex.empty()) throw InputError("give one of --triangulation, --chain, --simplex");
        Triangulation T = m.triangulation(tri);
        for (int k = 0; k < times; ++k) T = subdivide(T);
        auto check = validate(T);
        outm.triangulations[tri] = T;
        o.results = {{"triangulation", triangulation_to_json(tri, T)}, {"validation", check_json(check)}};
        o.code = check.ok ? 0 : 1;
    } else {
        Chain c = target_chain(m, chain, simplex);
        for (int k = 0; k < times; ++k) c = barycentric_subdivide(c);
        const std::string name = chain.empty() ? simplex : chain;
        outm.chains[name] = c;
        o.results = {{"chain", chain_to_json(name, c)}};
    }
    if (!write.empty()) write_file(write, manifest_to_json(outm));
    return o;
}

std::string big(const BigInt& b) { return b.str(); }

Json generator_json(const SimplicialComplex& K, int d, const CombinatorialChain& c) {
    Json out = Json::array();
    const auto& simplices = K.simplices(d);
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) out.push_back({{"simplex", tuple(simplices[i])}, {"coeff", big(c[i])}});
    return out;
}

Outcome_ homology_command(const Manifest& m, const std::string& complex, const std::string& tri) {
    if (complex.empty() == tri.empty()) throw InputError("give exactly one of --complex, --triangulation");
    const SimplicialComplex& K = complex.empty() ? m.triangulation(tri).complex() : m.complex(complex);
    HomologyResult h = homology(K);
    Json groups = Json::array();
    std::string csv = "degree,betti,torsion\n";
    for (const auto& g : h.groups) {
        Json torsion = Json::array();
        std::string tcsv;
        for (const auto& t : g.torsion) {
            torsion.push_back(big(t));
            tcsv += (tcsv.empty() ? "" : " ") + big(t);
        }
        Json free = Json::array(), tors = Json::array();
        for (const auto& c : g.free_generators) free.push_back(generator_json(K, g.degree, c));
        for (const auto& c : g.torsion_generators) tors.push_back(generator_json(K, g.degree, c));
        groups.push_back({{"degree", g.degree},
                          {"betti", g.betti},
                          {"torsion", std::move(torsion)},
                          {"free_generators", std::move(free)},
                          {"torsion_generators", std::move(tors)}});
        csv += std::to_string(g.degree) + "," + std::to_string(g.betti) + "," + csv_field(tcsv) + "\n";
    }
    std::vector<std::size_t> counts;
    for (int d = 0; d <= K.dimension(); ++d) counts.push_back(K.count(d));
    Outcome_ o;
    o.results = {{"betti", h.betti()},
                 {"simplex_counts", counts},
                 {"euler_characteristic", K.euler_characteristic()},
                 {"groups", std::move(groups)}};
    o.csv = csv;
    return o;
}

Outcome_ periods_command(const Manifest& m, const Config& cfg, const std::string& cycles, const std::string& forms) {
    auto cn = split_names(cycles), fn = split_names(forms);
    if (cn.empty()) throw InputError("missing --cycles");
    if (fn.empty()) throw InputError("missing --forms");
    std::vector<GeometricCycle> cs;
    for (const auto& n : cn) cs.push_back({n, m.chain(n), "manifest chain " + n});
    std::vector<NamedForm> ws;
    for (const auto& n : fn) ws.push_back({n, m.form(n)});
    PeriodMatrix P = period_matrix(cs, ws, cfg.quad());
    Json values = Json::array(), errors = Json::array(), conv = Json::array();
    std::string csv = "cycle,form,value,error_estimate,converged\n";
    for (std::size_t i = 0; i < P.cycles.size(); ++i) {
        Json vr = Json::array(), er = Json::array(), cr = Json::array();
        for (std::size_t j = 0; j < P.forms.size(); ++j) {
            const auto& q = P.entries[i][j];
            vr.push_back(q.value);
            er.push_back(q.error_estimate);
            cr.push_back(q.converged);
            csv += csv_field(P.cycles[i]) + "," + csv_field(P.forms[j]) + "," + num(q.value) + "," + num(q.error_estimate) + "," +
                   (q.converged ? "true" : "false") + "\n";
        }
        values.push_back(std::move(vr));
        errors.push_back(std::move(er));
        conv.push_back(std::move(cr));
    }
    Outcome_ o;
    o.results = {{"cycles", P.cycles},        {"forms", P.forms},          {"values", std::move(values)},
                 {"errors", std::move(errors)}, {"converged", std::move(conv)}, {"all_converged", P.converged}};
    o.csv = csv;
    o.code = P.converged ? 0 : 1;
    return o;
}

const Triangulation& only_or_named(const Manifest& m, const std::string& name, const char* flag) {
    if (!name.empty()) return m.triangulation(name);
    if (m.triangulations.size() != 1)
        throw InputError(std::string("the manifest has ") + std::to_string(m.triangulations.size()) +
                         " triangulations; pick one with " + flag);
    return m.triangulations.begin()->second;
}

std::map<int, Simplex> load_identification(const std::string& path) {
    std::map<int, Simplex> out;
    if (path.empty()) return out;
    std::ifstream in(path);
    if (!in) throw InputError("cannot open identification table \"" + path + "\"");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": invalid JSON (" + e.what() + ")");
    }
    const Json* table = &j;
    std::string base;
    if (j.is_object() && j.contains("identification")) {
        table = &j["identification"];
        base = "/identification";
    }
    if (!table->is_object()) throw SchemaError(base, "expected an object from T2 vertex to T1 simplex");
    for (const auto& [k, v] : table->items()) {
        const std::string p = base + "/" + k;
        int w = 0;
        try {
            std::size_t used = 0;
            w = std::stoi(k, &used);
            if (used != k.size()) throw std::invalid_argument(k);
        } catch (const std::exception&) {
            throw SchemaError(p, "vertex keys must be integers");
        }
        if (!v.is_array() || v.empty()) throw SchemaError(p, "expected a non-empty vertex list");
        Simplex s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_integer()) throw SchemaError(p + "/" + std::to_string(i), "expected an integer");
            s.push_back(v[i].get<int>());
        }
        std::sort(s.begin(), s.end());
        out[w] = s;
    }
    return out;
}

Outcome_ glue_command(const std::string& path1, const std::string& path2, const Config& cfg, const std::string& t1,
                      const std::string& t2, const std::string& mark, const std::string& ident, const std::string& name,
                      const std::string& write) {
    Manifest m1 = load_manifest(path1);
    Manifest m2 = path2.empty() ? m1 : load_manifest(path2);
    if (m1.ambient_dim != m2.ambient_dim) throw InputError("the manifests have different ambient dimensions");
    GlueInput in{only_or_named(m1, t1, "--t1"), only_or_named(m2, t2, "--t2"), mark, load_identification(ident)};
    GlueOptions opts;
    opts.jobs = resolve_jobs(cfg.jobs);
    GlueResult g = glue(in, opts);

    Manifest outm;
    outm.ambient_dim = m1.ambient_dim;
    outm.triangulations[name] = g.triangulation;
    Json mj = manifest_to_json(outm);
    if (!write.empty()) write_file(write, mj);
    Json origin = Json::array();
    for (const auto& [v, o] : g.vertex_origin) origin.push_back({{"vertex", v}, {"piece", o.first}, {"source", o.second}});
    Json idj = Json::object();
    for (const auto& [w, s] : g.identification) idj[std::to_string(w)] = s;
    Outcome_ o;
    o.results = {{"manifest", std::move(mj)},
                 {"vertex_origin", std::move(origin)},
                 {"identification", std::move(idj)},
                 {"subdivided", {{"t1", g.subdivided_t1}, {"t2", g.subdivided_t2}}},
                 {"betti", homology(g.triangulation.complex()).betti()},
                 {"validation", check_json(g.check)}};
    o.code = g.check.ok ? 0 : 1;
    return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"periodlab: periods of singular chains, Stokes checks, homology and gluing"};
    app.require_subcommand(1);
    Config cfg;
    app.add_option("--tol", cfg.tol, "relative tolerance (check-stokes: residual threshold)")->check(CLI::PositiveNumber);
    app.add_option("--abs-tol", cfg.abs_tol, "absolute tolerance floor for integrals")->check(CLI::PositiveNumber);
    app.add_option("--max-depth", cfg.max_depth, "maximum refinement depth")->check(CLI::Range(1, 200));
    app.add_option("--jobs", cfg.jobs, "worker threads (default: PERIODLAB_JOBS or 1)")->check(CLI::NonNegativeNumber);
    app.add_flag("--deterministic", cfg.deterministic, "fixed reduction order, no wall time in the report");
    app.add_option("--output", cfg.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", cfg.seed, "seed for sampled checks");

    std::string manifest, manifest2, chain, simplex, tri, form, complex, cycles, forms, write, t1, t2, mark = "B", ident,
                                                                                                   name = "glued";
    int times = 1;
    auto sub = [&](const char* n, const char* help) {
        auto* s = app.add_subcommand(n, help);
        s->fallthrough();
        s->add_option("manifest", manifest, "manifest file")->required();
        return s;
    };
    auto* vol = sub("check-volume", "finite-volume check of a simplex or of each chain term");
    vol->add_option("--chain", chain);
    vol->add_option("--simplex", simplex);
    auto* stk = sub("check-stokes", "Stokes residual for a chain, simplex or triangulation");
    stk->add_option("--chain", chain);
    stk->add_option("--simplex", simplex);
    stk->add_option("--triangulation", tri);
    stk->add_option("--form", form)->required();
    auto* cn = sub("cone", "cone of a chain, with the boundary identity and a sampled prism check");
    cn->add_option("--chain", chain);
    cn->add_option("--simplex", simplex);
    cn->add_option("--write", write, "also write the cone as a manifest");
    auto* sd = sub("subdivide", "barycentric subdivision of a chain or triangulation");
    sd->add_option("--chain", chain);
    sd->add_option("--simplex", simplex);
    sd->add_option("--triangulation", tri);
    sd->add_option("--times", times);
    sd->add_option("--write", write, "also write the result as a manifest");
    auto* hom = sub("homology", "integral simplicial homology");
    hom->add_option("--complex", complex);
    hom->add_option("--triangulation", tri);
    auto* per = sub("periods", "period matrix of cycles against closed forms");
    per->add_option("--cycles", cycles, "comma-separated chain names")->required();
    per->add_option("--forms", forms, "comma-separated form names")->required();
    auto* gl = app.add_subcommand("glue", "glue the triangulation of the second manifest onto the first along a mark");
    gl->fallthrough();
    gl->add_option("manifest", manifest, "manifest with T1")->required();
    gl->add_option("manifest2", manifest2, "manifest with T2 (default: the first)");
    gl->add_option("--t1", t1);
    gl->add_option("--t2", t2);
    gl->add_option("--mark", mark, "name of the overlap mark");
    gl->add_option("--identification", ident, "JSON table: T2 vertex -> T1 simplex");
    gl->add_option("--name", name, "name of the glued triangulation");
    gl->add_option("--write", write, "also write the glued triangulation as a manifest");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const auto start = std::chrono::steady_clock::now();
    auto* cmd = app.get_subcommands().front();
    const std::string command = cmd->get_name();
    Outcome_ result;
    try {
        if (cfg.output == "csv" && command != "periods" && command != "homology" && command != "check-volume")
            throw InputError("csv output is available for periods, homology and check-volume");
        if (command == "glue") {
            result = glue_command(manifest, manifest2, cfg, t1, t2, mark, ident, name, write);
        } else {
            Manifest m = load_manifest(manifest);
            if (command == "check-volume") result = check_volume(m, cfg, chain, simplex);
            else if (command == "check-stokes") result = check_stokes(m, cfg, chain, simplex, tri, form);
            else if (command == "cone") result = cone_command(m, cfg, chain, simplex, write);
            else if (command == "subdivide") result = subdivide_command(m, cfg, chain, simplex, tri, times, write);
            else if (command == "homology") result = homology_command(m, complex, tri);
            else result = periods_command(m, cfg, cycles, forms);
        }
    } catch (const Error& e) {
        err << "periodlab " << command << ": " << e.what() << "\n";
        return 2;
    }

    if (cfg.output == "csv") {
        out << *result.csv;
        return result.code;
    }
    Json report = {{"schema", kSchemaVersion}, {"command", command}, {"argv", args}};
    report["config"] = {{"tol", cfg.tol},
                        {"abs_tol", cfg.abs_tol},
                        {"max_depth", cfg.max_depth},
                        {"jobs", resolve_jobs(cfg.jobs)},
                        {"deterministic", cfg.deterministic},
                        {"output", cfg.output},
                        {"seed", cfg.seed}};
    report["results"] = std::move(result.results);
    report["exit_code"] = result.code;
    if (!cfg.deterministic)
        report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << dump_json(report) << "\n";
    return result.code;
}

}  // namespace periodlab::cli
