#pragma once

// Manifest files (schema "periodlab/1"): simplices, chains, forms,
// complexes and triangulations by name, in one ambient R^N.
//
// Simplex entries are one of
//   {"dim": d, "components": ["expr in a1..ad", ...]}
//   {"affine": [vertex, ...]}            vertices of rationals (ints or "p/q")
//   {"cone": S}   {"face": {"simplex": S, "index": i}}
//   {"compose": {"simplex": S, "map": [vertex, ...]}}
//   {"prism": {"simplex": S, "profile": "expr in a1", "piece": [vertex, ...]}}
//   {"glued": {"sigma": S, "tau": S, "beta": S, "v": [...], "b": [...], "tol": x}}
// where S is a simplex entry or the name of one.

#include "periodlab/chain.hpp"
#include "periodlab/complex.hpp"
#include "periodlab/error.hpp"
#include "periodlab/form.hpp"
#include "periodlab/triangulation.hpp"

#include "json.hpp"

#include <map>
#include <string>
#include <vector>

namespace periodlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "periodlab/1";

/// Schema violation; `pointer()` is the JSON pointer of the offending value.
class SchemaError : public InputError {
public:
    SchemaError(const std::string& pointer, const std::string& what)
        : InputError((pointer.empty() ? std::string("/") : pointer) + ": " + what), pointer_(pointer) {}
    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

struct Manifest {
    int ambient_dim = 0;
    std::map<std::string, SingularSimplex> simplices;
    std::map<std::string, Chain> chains;
    std::map<std::string, Form> forms;
    std::map<std::string, SimplicialComplex> complexes;
    std::map<std::string, Triangulation> triangulations;

    /// Lookups; unknown names are InputErrors.
    const SingularSimplex& simplex(const std::string& name) const;
    const Chain& chain(const std::string& name) const;
    const Form& form(const std::string& name) const;
    const SimplicialComplex& complex(const std::string& name) const;
    const Triangulation& triangulation(const std::string& name) const;
};

Manifest parse_manifest(const Json& j);
Manifest load_manifest(const std::string& path);

/// Emission. Every simplex is written inline, so the output re-ingests to
/// structurally equal simplices.
Json rational_to_json(const Rational& q);
Json simplex_to_json(const SingularSimplex& s);
Json chain_to_json(const std::string& name, const Chain& c);
Json form_to_json(const std::string& name, const Form& w);
Json complex_to_json(const std::string& name, const SimplicialComplex& K);
Json triangulation_to_json(const std::string& name, const Triangulation& T);
Json manifest_to_json(const Manifest& m);

/// JSON text with every float written with 17 significant digits.
std::string dump_json(const Json& j, int indent = 2);

}  // namespace periodlab
