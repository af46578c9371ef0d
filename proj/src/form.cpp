#include "periodlab/form.hpp"

#include "periodlab/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace periodlab {

Form::Form(int degree, int ambient) : degree_(degree), ambient_(ambient) {
    if (degree < 0 || ambient < 0) {
        throw InputError("form of degree " + std::to_string(degree) + " on R^" + std::to_string(ambient));
    }
}

Form Form::function(int ambient, Expr f) {
    Form w(0, ambient);
    w.add_term({}, f);
    return w;
}

Form Form::monomial(int ambient, std::vector<int> indices, Expr coeff) {
    Form w(static_cast<int>(indices.size()), ambient);
    w.add_term(std::move(indices), coeff);
    return w;
}

void Form::add_term(std::vector<int> indices, const Expr& coeff) {
    if (static_cast<int>(indices.size()) != degree_) {
        throw InputError("form term has " + std::to_string(indices.size()) + " indices, expected " +
                         std::to_string(degree_));
    }
    for (int i : indices) {
        if (i < 1 || i > ambient_) {
            throw InputError("form index " + std::to_string(i) + " out of range 1.." + std::to_string(ambient_));
        }
    }
    if (coeff.max_var() > ambient_) throw InputError("form coefficient uses a variable beyond the ambient dimension");
    // Insertion sort tracking the permutation sign.
    int sign = 1;
    for (std::size_t i = 1; i < indices.size(); ++i) {
        for (std::size_t j = i; j > 0 && indices[j - 1] > indices[j]; --j) {
            std::swap(indices[j - 1], indices[j]);
            sign = -sign;
        }
    }
    for (std::size_t i = 1; i < indices.size(); ++i)
        if (indices[i] == indices[i - 1]) return;
    if (coeff.is_zero()) return;
    Expr c = sign > 0 ? coeff : -coeff;
    auto it = terms_.find(indices);
    if (it == terms_.end()) {
        terms_.emplace(std::move(indices), c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Form Form::operator-() const {
    Form w(degree_, ambient_);
    for (const auto& [I, c] : terms_) w.terms_.emplace(I, -c);
    return w;
}

Form operator+(Form a, const Form& b) {
    if (a.degree_ != b.degree_ || a.ambient_ != b.ambient_) throw InputError("adding forms of different type");
    for (const auto& [I, c] : b.terms_) a.add_term(I, c);
    return a;
}

Form operator*(const Expr& f, const Form& w) {
    Form out(w.degree_, w.ambient_);
    for (const auto& [I, c] : w.terms_) out.add_term(I, f * c);
    return out;
}

bool operator==(const Form& a, const Form& b) {
    return a.degree_ == b.degree_ && a.ambient_ == b.ambient_ && a.terms_ == b.terms_;
}

Form Form::canonicalized() const {
    Form out(degree_, ambient_);
    for (const auto& [I, c] : terms_) {
        Expr k = canonical(c);
        if (!k.is_zero()) out.terms_.emplace(I, k);
    }
    return out;
}

std::string Form::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [I, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += "(" + periodlab::to_string(c) + ")";
        for (std::size_t k = 0; k < I.size(); ++k) s += (k ? "^dx" : " dx") + std::to_string(I[k]);
    }
    return s;
}

Form exterior_derivative(const Form& w) {
    Form out(w.degree() + 1, w.ambient());
    for (const auto& [I, c] : w.terms()) {
        for (int j = 1; j <= w.ambient(); ++j) {
            if (std::find(I.begin(), I.end(), j) != I.end()) continue;
            Expr dj = diff(c, j);
            if (dj.is_zero()) continue;
            std::vector<int> idx{j};
            idx.insert(idx.end(), I.begin(), I.end());
            out.add_term(std::move(idx), dj);
        }
    }
    return out.canonicalized();
}

std::string closedness_name(Closedness c) {
    switch (c) {
    case Closedness::Symbolic: return "symbolic";
    case Closedness::Numeric: return "numeric";
    case Closedness::NotClosed: return "not-closed";
    }
    return "?";
}

Closedness check_closed(const Form& w, std::uint64_t seed, double lo, double hi) {
    Form dw = exterior_derivative(w);
    if (dw.is_zero()) return Closedness::Symbolic;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> x(w.ambient());
    int checked = 0;
    for (int attempt = 0; attempt < 1000 && checked < 100; ++attempt) {
        for (double& v : x) v = u(rng);
        bool defined = true;
        double worst = 0;
        for (const auto& [I, c] : dw.terms()) {
            try {
                double v = eval(c, x);
                if (!std::isfinite(v)) defined = false;
                worst = std::max(worst, std::abs(v));
            } catch (const DomainError&) {
                defined = false;
            }
        }
        if (!defined) continue;
        double scale = 0;
        for (const auto& [I, c] : w.terms()) {
            try {
                scale = std::max(scale, std::abs(eval(c, x)));
            } catch (const DomainError&) {
            }
        }
        if (worst > 1e-9 * (1 + scale)) return Closedness::NotClosed;
        ++checked;
    }
    return checked > 0 ? Closedness::Numeric : Closedness::NotClosed;
}

CompiledForm::CompiledForm(const Form& w) : source_(w), degree_(w.degree()), ambient_(w.ambient()) {
    for (const auto& [I, c] : w.terms()) terms_.push_back({I, CompiledExpr(c)});
}

double det(std::span<const double> M, int p) {
    switch (p) {
    case 0: return 1.0;
    case 1: return M[0];
    case 2: return M[0] * M[3] - M[2] * M[1];
    case 3:
        return M[0] * (M[4] * M[8] - M[7] * M[5]) - M[3] * (M[1] * M[8] - M[7] * M[2]) +
               M[6] * (M[1] * M[5] - M[4] * M[2]);
    default: {
        Eigen::Map<const Eigen::MatrixXd> m(M.data(), p, p);
        return m.partialPivLu().determinant();
    }
    }
}

double minor_det(std::span<const double> J, int n, std::span<const int> rows, int p) {
    double buf[16];
    std::vector<double> heap;
    double* m = buf;
    if (p * p > 16) {
        heap.resize(static_cast<std::size_t>(p) * p);
        m = heap.data();
    }
    for (int c = 0; c < p; ++c)
        for (int r = 0; r < p; ++r) m[c * p + r] = J[static_cast<std::size_t>(c) * n + rows[r] - 1];
    return det(std::span<const double>(m, static_cast<std::size_t>(p) * p), p);
}

double pullback_density(const CompiledForm& w, std::span<const double> image, std::span<const double> J, int d) {
    if (w.degree() != d) throw InputError("pullback: form degree does not match simplex dimension");
    const int n = static_cast<int>(image.size());
    double acc = 0;
    for (const auto& t : w.terms()) {
        double c = t.coeff(image);
        if (c == 0) continue;
        acc += c * minor_det(J, n, t.index, d);
    }
    return acc;
}

double pullback_density(const SingularSimplex& sigma, const CompiledForm& w, std::span<const double> b) {
    if (w.ambient() != sigma.ambient()) throw InputError("pullback: form and simplex live in different ambient spaces");
    std::vector<double> image = sigma(b);
    std::vector<double> J = sigma.jacobian(b);
    return pullback_density(w, image, J, sigma.dim());
}

double pullback_density(const SingularSimplex& sigma, const Form& w, std::span<const double> b) {
    return pullback_density(sigma, CompiledForm(w), b);
}

DecompAB::DecompAB(SingularSimplex sigma, Expr f, Form eta)
    : sigma_(sigma), prism_(sigma, f), eta_(std::move(eta)), C_(std::max(sigma.dim() - 1, 0), sigma.ambient()) {
    const int d = sigma_.dim();
    if (d < 1) throw InputError("decomposition needs a simplex of dimension >= 1");
    if (eta_.degree() != d || eta_.ambient() != sigma_.ambient()) {
        throw InputError("decomposition: form must have degree " + std::to_string(d) + " on R^" +
                         std::to_string(sigma_.ambient()));
    }
    MultiIndex first(d);
    for (int i = 0; i < d; ++i) first[i] = i + 1;
    if (eta_.terms().size() > 1 || (!eta_.terms().empty() && eta_.terms().begin()->first != first)) {
        throw InputError("decomposition: form must be a single term h dx_1^...^dx_d");
    }
    Expr h = eta_.terms().empty() ? constant(0) : eta_.terms().begin()->second;
    h_ = CompiledExpr(h);
    for (int i = 1; i <= d; ++i) {
        std::vector<int> idx;
        for (int k = 1; k <= d; ++k)
            if (k != i) idx.push_back(k);
        Expr c = h * var(i);
        C_.add_term(idx, (i % 2 == 1) ? c : -c);
    }
}

DecompAB::Frame DecompAB::frame(double t, std::span<const double> b) const {
    Frame fr;
    const int n = sigma_.ambient();
    fr.s = sigma_(b);
    fr.J = sigma_.jacobian(b);
    fr.f = prism_.f(t);
    fr.df = prism_.df(t);
    fr.image.resize(n);
    for (int r = 0; r < n; ++r) fr.image[r] = fr.f * fr.s[r];
    fr.h = h_(fr.image);
    return fr;
}

std::vector<double> DecompAB::A(double t, std::span<const double> b) const {
    const int d = dim();
    const int n = sigma_.ambient();
    Frame fr = frame(t, b);
    std::vector<double> out(d + 1, 0.0);
    std::vector<int> rows(d);
    for (int i = 0; i < d; ++i) rows[i] = i + 1;
    out[0] = fr.h * std::pow(fr.f, d) * minor_det(fr.J, n, rows, d);
    return out;
}

std::vector<double> DecompAB::B(double t, std::span<const double> b) const {
    // B = (h∘τ) f' f^{d-1} Σ_i (−1)^{i−1} σ_i dt ∧ dσ_1 ∧ .. (omit i) .. ∧ dσ_d.
    const int d = dim();
    const int n = sigma_.ambient();
    Frame fr = frame(t, b);
    std::vector<double> out(d + 1, 0.0);
    const double scale = fr.h * fr.df * std::pow(fr.f, d - 1);
    std::vector<double> M(static_cast<std::size_t>(d - 1) * (d - 1));
    for (int i = 1; i <= d; ++i) {
        for (int k = 1; k <= d; ++k) {
            // Minor of Dσ (rows 1..d) without row i and column k.
            int cc = 0;
            for (int c = 1; c <= d; ++c) {
                if (c == k) continue;
                int rr = 0;
                for (int r = 1; r <= d; ++r) {
                    if (r == i) continue;
                    M[static_cast<std::size_t>(cc) * (d - 1) + rr] = fr.J[static_cast<std::size_t>(c - 1) * n + (r - 1)];
                    ++rr;
                }
                ++cc;
            }
            double sgn = (i % 2 == 1) ? 1.0 : -1.0;
            out[k] += scale * sgn * fr.s[i - 1] * det(M, d - 1);
        }
    }
    return out;
}

std::vector<double> DecompAB::direct(double t, std::span<const double> b) const {
    const int d = dim();
    const int n = sigma_.ambient();
    std::vector<double> x(d + 1);
    x[0] = t;
    std::copy(b.begin(), b.end(), x.begin() + 1);
    std::vector<double> J(static_cast<std::size_t>(n) * (d + 1)), image(n);
    prism_.eval(x, image);
    prism_.jacobian(x, J);
    const double h = h_(image);
    std::vector<double> out(d + 1);
    std::vector<double> M(static_cast<std::size_t>(d) * d);
    for (int k = 0; k <= d; ++k) {
        int cc = 0;
        for (int c = 0; c <= d; ++c) {
            if (c == k) continue;
            for (int r = 0; r < d; ++r) M[static_cast<std::size_t>(cc) * d + r] = J[static_cast<std::size_t>(c) * n + r];
            ++cc;
        }
        out[k] = h * det(M, d);
    }
    return out;
}

double restrict_form(std::span<const double> components, std::span<const double> L, int d) {
    double acc = 0;
    std::vector<double> M(static_cast<std::size_t>(d) * d);
    for (int k = 0; k <= d; ++k) {
        if (components[k] == 0) continue;
        for (int c = 0; c < d; ++c) {
            int rr = 0;
            for (int r = 0; r <= d; ++r) {
                if (r == k) continue;
                M[static_cast<std::size_t>(c) * d + rr] = L[static_cast<std::size_t>(c) * (d + 1) + r];
                ++rr;
            }
        }
        acc += components[k] * det(M, d);
    }
    return acc;
}

}  // namespace periodlab
