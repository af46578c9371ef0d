#include "doctest.h"
#include "generators.hpp"

#include "periodlab/glue.hpp"
#include "periodlab/manifest.hpp"

#include <cmath>
#include <numbers>

using namespace periodlab;

namespace {

Json circle_manifest() {
    return Json::parse(R"json({
      "schema": "periodlab/1",
      "ambient_dim": 2,
      "simplices": [
        {"name": "upper", "dim": 1, "components": ["cos(pi*a1)", "sin(pi*a1)"]},
        {"name": "lower", "dim": 1, "components": ["cos(pi*(1 + a1))", "sin(pi*(1 + a1))"]},
        {"name": "tri", "affine": [[0, 0], [1, 0], ["1/2", 1]]},
        {"name": "coned", "cone": "upper"},
        {"name": "edge", "face": {"simplex": "tri", "index": 0}},
        {"name": "half", "compose": {"simplex": "upper", "map": [["1/2"], [1]]}},
        {"name": "slab", "prism": {"simplex": "upper", "profile": "1 - a1", "piece": [[0, 0], [1, 0], [1, 1]]}}
      ],
      "chains": [
        {"name": "gamma", "terms": [{"simplex": "upper", "coeff": 1}, {"simplex": "lower"}]},
        {"name": "none", "degree": 1, "terms": []}
      ],
      "forms": [
        {"name": "dtheta", "degree": 1, "terms": [
          {"indices": [1], "coeff": "-x2/(x1^2 + x2^2)"}, {"indices": [2], "coeff": "x1/(x1^2 + x2^2)"}]},
        {"name": "f", "degree": 0, "terms": [{"coeff": "x1*x2"}]}
      ],
      "complexes": [{"name": "K", "vertices": [0, 1, 2, 3], "simplices": [[0, 1], [1, 2], [0, 2]]}],
      "triangulations": [
        {"name": "square", "complex": {"simplices": [[0, 1, 2], [0, 2, 3]]},
         "positions": {"0": [0, 0], "1": [1, 0], "2": [1, 1], "3": [0, 1]},
         "orientation": [{"facet": [0, 2, 3], "sign": -1}],
         "charts": [{"facet": [0, 1, 2], "chart": "lower"}],
         "marks": {"B": [[0, 1]]}}
      ]
    })json");
}

std::string pointer_of(const Json& j) {
    try {
        parse_manifest(j);
    } catch (const SchemaError& e) {
        return e.pointer();
    }
    return "<none>";
}

}  // namespace

TEST_CASE("manifest ingestion") {
    Manifest m = parse_manifest(circle_manifest());
    CHECK(m.ambient_dim == 2);
    CHECK(m.simplices.size() == 7);
    CHECK(m.simplex("coned").kind() == SimplexKind::Cone);
    CHECK(m.simplex("coned").dim() == 2);
    CHECK(m.simplex("edge").dim() == 1);
    CHECK(m.simplex("slab").kind() == SimplexKind::Prism);
    CHECK(m.chain("gamma").size() == 2);
    CHECK(m.chain("none").empty());
    CHECK(m.form("dtheta").degree() == 1);
    CHECK(m.form("f").degree() == 0);
    CHECK(m.complex("K").count(0) == 4);
    const auto& T = m.triangulation("square");
    CHECK(T.orientation({0, 2, 3}) == -1);
    CHECK(T.chart({0, 1, 2}) == "lower");
    CHECK(T.mark("B").size() == 3);
    // x_k and a_k are the same variable
    CHECK(m.form("f").terms().begin()->second == parse("a1*a2", 2));
    CHECK_THROWS_AS(m.chain("missing"), InputError);
}

TEST_CASE("schema errors carry JSON pointers") {
    Json j = circle_manifest();
    j.erase("schema");
    CHECK(pointer_of(j) == "/schema");

    j = circle_manifest();
    j["schema"] = "periodlab/0";
    CHECK(pointer_of(j) == "/schema");

    j = circle_manifest();
    j["simplices"][1]["components"][1] = "sin(pi*(1 + a1)";
    CHECK(pointer_of(j) == "/simplices/1/components/1");

    j = circle_manifest();
    j["simplices"][0]["components"][0] = "cos(pi*a2)";
    CHECK(pointer_of(j) == "/simplices/0/components/0");

    j = circle_manifest();
    j["chains"][0]["terms"][1]["simplex"] = "nowhere";
    CHECK(pointer_of(j) == "/chains/0/terms/1/simplex");

    j = circle_manifest();
    j["chains"][0]["terms"][1]["simplex"] = "tri";
    CHECK(pointer_of(j) == "/chains/0/terms/1/simplex");

    j = circle_manifest();
    j["simplices"][2]["name"] = "upper";
    CHECK(pointer_of(j) == "/simplices/2/name");

    j = circle_manifest();
    j["simplices"][3]["cone"] = "coned";
    CHECK(pointer_of(j) == "/simplices/3");

    j = circle_manifest();
    j["simplices"][0]["components"] = {"a1"};
    CHECK(pointer_of(j) == "/simplices/0");

    j = circle_manifest();
    j["forms"][0]["terms"][0]["indices"] = {1, 2};
    CHECK(pointer_of(j) == "/forms/0/terms/0/indices");

    j = circle_manifest();
    j["complexes"][0]["simplices"][1] = {1, 5};
    CHECK(pointer_of(j) == "/complexes/0/simplices/1");

    j = circle_manifest();
    j["triangulations"][0]["marks"]["B"][0] = {0, 4};
    CHECK(pointer_of(j) == "/triangulations/0/marks/B/0");

    j = circle_manifest();
    j["triangulations"][0]["positions"].erase("3");
    CHECK(pointer_of(j) == "/triangulations/0/positions");

    j = circle_manifest();
    j["simplices"][2]["affine"][2][0] = 0.5;
    CHECK(pointer_of(j) == "/simplices/2/affine/2/0");

    j = circle_manifest();
    j["extra"] = 1;
    CHECK(pointer_of(j) == "/extra");
}

TEST_CASE("manifests round-trip") {
    Manifest m = parse_manifest(circle_manifest());
    Manifest back = parse_manifest(Json::parse(dump_json(manifest_to_json(m))));
    REQUIRE(back.simplices.size() == m.simplices.size());
    for (const auto& [name, s] : m.simplices) CHECK(back.simplex(name).key() == s.key());
    CHECK(back.chain("gamma") == m.chain("gamma"));
    CHECK(back.chain("none").degree() == 1);
    for (const auto& [name, w] : m.forms) CHECK(back.form(name).terms() == w.terms());
    CHECK(back.complex("K") == m.complex("K"));
    const auto& T = m.triangulation("square");
    const auto& U = back.triangulation("square");
    CHECK(U.complex() == T.complex());
    for (const auto& [f, s] : T.evaluators()) CHECK(U.evaluator(f).key() == s.key());
    CHECK(U.orientation({0, 2, 3}) == -1);
    CHECK(U.charts() == T.charts());
    CHECK(U.marks() == T.marks());
}

TEST_CASE("glued triangulations round-trip") {
    Triangulation upper(SimplicialComplex::from_simplices({{0, 1}}), 2);
    upper.set_evaluator({0, 1}, SingularSimplex::from_exprs(1, {parse("cos(pi*a1)", 1), parse("sin(pi*a1)", 1)}));
    Triangulation lower(SimplicialComplex::from_simplices({{0, 1}}), 2);
    lower.set_evaluator({0, 1}, SingularSimplex::from_exprs(1, {parse("cos(pi*(1 + a1))", 1), parse("sin(pi*(1 + a1))", 1)}));
    upper.set_mark("B", {{0}, {1}});
    lower.set_mark("B", {{0}, {1}});
    auto g = glue({upper, lower, "B", {}});
    Manifest m;
    m.ambient_dim = 2;
    m.triangulations["circle"] = g.triangulation;
    auto text = dump_json(manifest_to_json(m));
    Manifest back = parse_manifest(Json::parse(text));
    const auto& T = back.triangulation("circle");
    CHECK(T.complex() == g.triangulation.complex());
    for (const auto& [f, s] : g.triangulation.evaluators()) {
        CHECK(T.evaluator(f).key() == s.key());
        for (double x : {0.0, 0.25, 0.5, 1.0}) {
            std::vector<double> p{x};
            auto a = s(p), b = T.evaluator(f)(p);
            CHECK(a[0] == b[0]);
            CHECK(a[1] == b[1]);
        }
    }
    CHECK(dump_json(manifest_to_json(back)) == text);

    // a 2-dimensional glued simplex with a nontrivial inverse
    Triangulation t1(SimplicialComplex::from_simplices({{0, 1, 2}}), 2);
    t1.set_evaluator({0, 1, 2}, SingularSimplex::from_exprs(2, {parse("a1 + a1*a2/2", 2), parse("a2 - a1*a2/2", 2)}));
    t1.set_mark("B", {{1, 2}});
    Rational h(1, 2);
    auto t2 = affine_triangulation(SimplicialComplex::from_simplices({{0, 1, 3}, {1, 2, 3}}),
                                   {{0, {1, 0}}, {1, {h, h}}, {2, {0, 1}}, {3, {1, 1}}});
    t2.set_mark("B", {{0, 1}, {1, 2}});
    auto g2 = glue({t1, t2, "B", {}});
    Manifest m2;
    m2.ambient_dim = 2;
    m2.triangulations["square"] = g2.triangulation;
    Manifest back2 = parse_manifest(Json::parse(dump_json(manifest_to_json(m2))));
    for (const auto& [f, s] : g2.triangulation.evaluators()) {
        auto r = back2.triangulation("square").evaluator(f);
        CHECK(r.key() == s.key());
        std::vector<double> p{0.2, 0.3};
        CHECK(r(p)[0] == s(p)[0]);
        CHECK(r(p)[1] == s(p)[1]);
    }
}

TEST_CASE("random expression simplices round-trip") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const int d = 1 + static_cast<int>(seed % 3);
        testing::ExprGen gen(seed, d);
        std::vector<Expr> comps{gen.gen(3), gen.gen(3)};
        SingularSimplex s = SingularSimplex::from_exprs(d, comps);
        Json j = {{"schema", kSchemaVersion}, {"ambient_dim", 2}, {"simplices", Json::array({simplex_to_json(s)})}};
        j["simplices"][0]["name"] = "s";
        Manifest m = parse_manifest(Json::parse(dump_json(j)));
        CHECK(m.simplex("s").key() == s.key());
    }
}

TEST_CASE("floats are written with 17 significant digits") {
    CHECK(dump_json(Json(0.1), -1) == "0.10000000000000001");
    CHECK(dump_json(Json(1.0), -1) == "1.0");
    CHECK(dump_json(Json(1.0 / 3), -1) == "0.33333333333333331");
    CHECK(dump_json(Json(-2.5e-300), -1) == "-2.5e-300");
    CHECK(dump_json(Json(3), -1) == "3");
    CHECK(dump_json(Json(std::nan("")), -1) == "null");
    for (double x : {std::numbers::pi, 1e-17, 123456.789, -0.3}) CHECK(Json::parse(dump_json(Json(x))).get<double>() == x);
    CHECK(dump_json(Json::parse(R"({"a": [1, 2.5], "b": {}})"), -1) == R"({"a":[1,2.5],"b":{}})");
}
