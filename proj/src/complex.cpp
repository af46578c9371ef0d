#include "periodlab/complex.hpp"

#include "periodlab/error.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace periodlab {

namespace {

std::string tuple_string(const Simplex& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + ")";
}

const std::vector<Simplex> kNone;

}  // namespace

bool is_face(const Simplex& face, const Simplex& s) { return std::includes(s.begin(), s.end(), face.begin(), face.end()); }

Simplex drop_vertex(const Simplex& s, std::size_t i) {
    Simplex out;
    out.reserve(s.size() - 1);
    for (std::size_t k = 0; k < s.size(); ++k)
        if (k != i) out.push_back(s[k]);
    return out;
}

SimplicialComplex SimplicialComplex::from_simplices(const std::vector<Simplex>& generators) {
    std::set<Simplex> all;
    for (Simplex g : generators) {
        if (g.empty()) continue;
        std::sort(g.begin(), g.end());
        if (std::adjacent_find(g.begin(), g.end()) != g.end())
            throw InputError("simplex " + tuple_string(g) + " repeats a vertex");
        if (g.size() > 30) throw InputError("simplex " + tuple_string(g) + " is too large");
        if (all.count(g)) continue;
        // all nonempty subsets
        const std::size_t n = g.size();
        for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
            Simplex f;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1ul << i)) f.push_back(g[i]);
            all.insert(std::move(f));
        }
    }
    SimplicialComplex K;
    for (const auto& s : all) {
        const std::size_t d = s.size() - 1;
        if (K.by_dim_.size() <= d) K.by_dim_.resize(d + 1);
        K.by_dim_[d].push_back(s);
    }
    for (auto& level : K.by_dim_)
        for (std::size_t i = 0; i < level.size(); ++i) K.index_[level[i]] = i;
    std::set<Simplex> covered;
    for (int d = 1; d <= K.dimension(); ++d)
        for (const auto& s : K.by_dim_[d])
            for (std::size_t i = 0; i < s.size(); ++i) covered.insert(drop_vertex(s, i));
    for (int d = 0; d <= K.dimension(); ++d)
        for (const auto& s : K.by_dim_[d])
            if (!covered.count(s)) K.facets_.push_back(s);
    return K;
}

std::size_t SimplicialComplex::count(int d) const {
    if (d < 0 || d > dimension()) return 0;
    return by_dim_[d].size();
}

const std::vector<Simplex>& SimplicialComplex::simplices(int d) const {
    if (d < 0 || d > dimension()) return kNone;
    return by_dim_[d];
}

bool SimplicialComplex::contains(const Simplex& s) const { return index_.count(s) > 0; }

std::size_t SimplicialComplex::index_of(const Simplex& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) throw InputError("simplex " + tuple_string(s) + " is not in the complex");
    return it->second;
}

std::vector<Simplex> SimplicialComplex::cofacets_of(const Simplex& s) const {
    std::vector<Simplex> out;
    for (const auto& f : facets())
        if (is_face(s, f)) out.push_back(f);
    return out;
}

long long SimplicialComplex::euler_characteristic() const {
    long long chi = 0;
    for (int d = 0; d <= dimension(); ++d) chi += (d % 2 ? -1 : 1) * static_cast<long long>(by_dim_[d].size());
    return chi;
}

ComplexSubdivision barycentric_subdivision(const SimplicialComplex& K) {
    ComplexSubdivision out;
    std::map<Simplex, int> id;
    for (int d = 0; d <= K.dimension(); ++d) {
        for (const auto& s : K.simplices(d)) {
            id[s] = static_cast<int>(out.carriers.size());
            out.carriers.push_back(s);
        }
    }
    // Maximal flags of each facet generate the subdivision.
    std::vector<Simplex> gens;
    for (const auto& f : K.facets()) {
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
            gens.push_back(std::move(flag));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    out.complex = SimplicialComplex::from_simplices(gens);
    return out;
}

}  // namespace periodlab
