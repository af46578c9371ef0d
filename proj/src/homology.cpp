#include "periodlab/homology.hpp"

#include "periodlab/error.hpp"
#include "periodlab/parallel.hpp"

namespace periodlab {

IntMatrix boundary_matrix(const SimplicialComplex& K, int d) {
    if (d < 1) throw InputError("boundary_matrix: degree must be at least 1");
    const auto& cols = K.simplices(d);
    IntMatrix M(K.count(d - 1), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < cols[j].size(); ++i)
            M(K.index_of(drop_vertex(cols[j], i)), j) = (i % 2 ? -1 : 1);
    return M;
}

std::vector<std::size_t> HomologyResult::betti() const {
    std::vector<std::size_t> out;
    for (const auto& g : groups) out.push_back(g.betti);
    return out;
}

CombinatorialChain boundary_of(const SimplicialComplex& K, int d, const CombinatorialChain& c) {
    if (c.size() != K.count(d)) throw InputError("chain length does not match the number of simplices");
    if (d == 0) return {};
    CombinatorialChain out(K.count(d - 1));
    const auto& s = K.simplices(d);
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (c[j] == 0) continue;
        for (std::size_t i = 0; i < s[j].size(); ++i) {
            auto& slot = out[K.index_of(drop_vertex(s[j], i))];
            if (i % 2) slot -= c[j];
            else slot += c[j];
        }
    }
    return out;
}

bool is_cycle(const SimplicialComplex& K, int d, const CombinatorialChain& c) {
    for (const auto& x : boundary_of(K, d, c))
        if (x != 0) return false;
    return true;
}

std::string chain_string(const SimplicialComplex& K, int d, const CombinatorialChain& c) {
    std::string out;
    const auto& s = K.simplices(d);
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        BigInt a = c[j] < 0 ? BigInt(-c[j]) : c[j];
        if (out.empty()) out += c[j] < 0 ? "-" : "";
        else out += c[j] < 0 ? " - " : " + ";
        if (a != 1) out += a.str() + "*";
        out += "(";
        for (std::size_t i = 0; i < s[j].size(); ++i) out += (i ? "," : "") + std::to_string(s[j][i]);
        out += ")";
    }
    return out.empty() ? "0" : out;
}

namespace {

HomologyGroup compute_degree(const SimplicialComplex& K, int d) {
    HomologyGroup g;
    g.degree = d;
    const std::size_t nd = K.count(d);
    // Kernel basis Z (columns) of ∂_d and the coordinate map onto it.
    std::size_t rank_d = 0;
    IntMatrix V = IntMatrix::identity(nd), V_inv = IntMatrix::identity(nd);
    if (d > 0) {
        SNFResult s = smith_normal_form(boundary_matrix(K, d));
        rank_d = s.rank;
        V = std::move(s.V);
        V_inv = std::move(s.V_inv);
    }
    const std::size_t k = nd - rank_d;
    // ∂_{d+1} = Z C with C the last k rows of V_inv ∂_{d+1}.
    IntMatrix C(k, K.count(d + 1));
    if (K.count(d + 1) > 0) {
        IntMatrix coords = V_inv * boundary_matrix(K, d + 1);
        for (std::size_t r = 0; r < rank_d; ++r)
            for (std::size_t c = 0; c < coords.cols(); ++c)
                if (coords(r, c) != 0) throw Error("homology: boundary of a boundary is not zero");
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < coords.cols(); ++c) C(r, c) = coords(rank_d + r, c);
    }
    SNFResult s2 = smith_normal_form(C);
    // Generators are the columns of Z U'^{-1}.
    auto generator = [&](std::size_t col) {
        CombinatorialChain z(nd);
        for (std::size_t r = 0; r < k; ++r) {
            const BigInt& w = s2.U_inv(r, col);
            if (w == 0) continue;
            for (std::size_t i = 0; i < nd; ++i) z[i] += w * V(i, rank_d + r);
        }
        return z;
    };
    for (std::size_t i = 0; i < s2.rank; ++i) {
        if (s2.diagonal[i] > 1) {
            g.torsion.push_back(s2.diagonal[i]);
            g.torsion_generators.push_back(generator(i));
        }
    }
    g.betti = k - s2.rank;
    for (std::size_t i = s2.rank; i < k; ++i) g.free_generators.push_back(generator(i));
    return g;
}

}  // namespace

HomologyResult homology(const SimplicialComplex& K) {
    HomologyResult res;
    const int top = K.dimension();
    if (top < 0) return res;
    res.groups.resize(top + 1);
    parallel_for(static_cast<std::size_t>(top + 1), resolve_jobs(0),
                 [&](std::size_t d) { res.groups[d] = compute_degree(K, static_cast<int>(d)); });
    return res;
}

}  // namespace periodlab
