#include "periodlab/cubature.hpp"

#include "periodlab/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>

namespace periodlab {

GaussRule gauss_jacobi(int n, double alpha) {
    if (n < 1) throw InputError("gauss_jacobi: need at least one point");
    // Golub–Welsch on [-1, 1] with weight (1 − x)^alpha (1 + x)^beta, beta = 0.
    const double a = alpha, b = 0.0;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        double s = 2.0 * k + a + b;
        T(k, k) = (s == 0) ? (b - a) / (a + b + 2) : (b * b - a * a) / (s * (s + 2));
        if (k > 0) {
            double kk = k;
            double num = 4 * kk * (kk + a) * (kk + b) * (kk + a + b);
            double den = s * s * (s + 1) * (s - 1);
            T(k, k - 1) = T(k - 1, k) = std::sqrt(num / den);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double mu0 = std::pow(2.0, a + b + 1) * std::tgamma(a + 1) * std::tgamma(b + 1) / std::tgamma(a + b + 2);
    GaussRule r;
    for (int k = 0; k < n; ++k) {
        double x = es.eigenvalues()(k);
        double v = es.eigenvectors()(0, k);
        r.nodes.push_back((x + 1) / 2);
        r.weights.push_back(mu0 * v * v * std::pow(2.0, -a - 1));
    }
    return r;
}

namespace {

SimplexRule build_rule(int d, int n) {
    SimplexRule rule;
    rule.dim = d;
    rule.degree = 2 * n - 1;
    if (d == 0) {
        rule.weights = {1.0};
        return rule;
    }
    // Direction k (0-based) carries the Duffy Jacobian factor (1 − u_k)^(d−1−k).
    std::vector<GaussRule> dirs;
    for (int k = 0; k < d; ++k) dirs.push_back(gauss_jacobi(n, d - 1 - k));
    std::vector<int> idx(d, 0);
    for (;;) {
        double w = 1.0;
        double rest = 1.0;
        for (int k = 0; k < d; ++k) {
            double u = dirs[k].nodes[idx[k]];
            w *= dirs[k].weights[idx[k]];
            rule.nodes.push_back(rest * u);
            rest *= (1 - u);
        }
        rule.weights.push_back(w);
        int k = d - 1;
        while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
        if (k < 0) break;
    }
    return rule;
}

}  // namespace

const SimplexRule& conical_product_rule(int d, int n) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, SimplexRule> cache;
    std::lock_guard lock(mu);
    auto key = std::make_pair(d, n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_rule(d, n)).first;
    return it->second;
}

}  // namespace periodlab
