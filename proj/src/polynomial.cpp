#include "shadownet/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "shadownet/hermite.hpp"
#include "shadownet/numeric.hpp"

namespace shadownet {

bool GradedLexLess::operator()(const std::vector<int>& a, const std::vector<int>& b) const {
    const int deg_a = std::accumulate(a.begin(), a.end(), 0);
    const int deg_b = std::accumulate(b.begin(), b.end(), 0);
    if (deg_a != deg_b) return deg_a < deg_b;
    return a < b;
}

MonomialPolynomial::MonomialPolynomial(int num_vars) : num_vars_(num_vars) {
    if (num_vars < 1) throw std::invalid_argument("MonomialPolynomial: num_vars must be >= 1");
}

MonomialPolynomial MonomialPolynomial::constant(int num_vars, double c) {
    MonomialPolynomial p(num_vars);
    if (c != 0.0) p.terms_[std::vector<int>(static_cast<std::size_t>(num_vars), 0)] = c;
    return p;
}

MonomialPolynomial MonomialPolynomial::variable(int num_vars, int index) {
    MonomialPolynomial p(num_vars);
    if (index < 0 || index >= num_vars) {
        throw std::invalid_argument("MonomialPolynomial::variable: index out of range");
    }
    std::vector<int> e(static_cast<std::size_t>(num_vars), 0);
    e[static_cast<std::size_t>(index)] = 1;
    p.terms_[std::move(e)] = 1.0;
    return p;
}

int MonomialPolynomial::total_degree() const {
    // Terms are graded, so the last one has maximal total degree.
    if (terms_.empty()) return 0;
    const auto& e = terms_.rbegin()->first;
    return std::accumulate(e.begin(), e.end(), 0);
}

void MonomialPolynomial::add_term(const std::vector<int>& exponents, double coeff) {
    if (static_cast<int>(exponents.size()) != num_vars_) {
        throw std::invalid_argument("add_term: exponent vector size mismatch");
    }
    for (int e : exponents) {
        if (e < 0) throw std::invalid_argument("add_term: negative exponent");
    }
    terms_[exponents] += coeff;
}

void MonomialPolynomial::prune(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < tol) {
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
}

double MonomialPolynomial::evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != num_vars_) {
        throw std::invalid_argument("evaluate: point dimension mismatch");
    }
    CompensatedSum acc;
    for (const auto& [exps, coeff] : terms_) {
        double term = coeff;
        for (std::size_t k = 0; k < exps.size(); ++k) {
            for (int e = 0; e < exps[k]; ++e) term *= x[k];
        }
        acc.add(term);
    }
    return acc.value();
}

double MonomialPolynomial::coeff_abs_sum() const {
    CompensatedSum acc;
    for (const auto& [exps, coeff] : terms_) acc.add(std::abs(coeff));
    return acc.value();
}

void add_scaled_inplace(MonomialPolynomial& a, const MonomialPolynomial& b, double scale) {
    if (a.num_vars() != b.num_vars()) {
        throw std::invalid_argument("add_scaled: variable count mismatch");
    }
    for (const auto& [exps, coeff] : b.terms()) a.add_term(exps, scale * coeff);
}

MonomialPolynomial add_scaled(const MonomialPolynomial& a, const MonomialPolynomial& b, double scale) {
    MonomialPolynomial out = a;
    add_scaled_inplace(out, b, scale);
    return out;
}

MonomialPolynomial multiply(const MonomialPolynomial& a, const MonomialPolynomial& b) {
    if (a.num_vars() != b.num_vars()) {
        throw std::invalid_argument("multiply: variable count mismatch");
    }
    MonomialPolynomial out(a.num_vars());
    std::vector<int> exps(static_cast<std::size_t>(a.num_vars()));
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            for (std::size_t k = 0; k < exps.size(); ++k) exps[k] = ea[k] + eb[k];
            out.add_term(exps, ca * cb);
        }
    }
    return out;
}

std::vector<double> sigma_n_monomial_coeffs(const HermiteExpansion& exp, int n) {
    const double eps_n = exp.truncation_error(n);
    if (eps_n > 0.5) {
        throw TruncationTooCoarse("sigma_n_monomial_coeffs: eps(" + std::to_string(n) + ") > 1/2");
    }
    const double scale = 1.0 / std::sqrt(1.0 - eps_n);
    std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i <= n; ++i) {
        const std::vector<double> mono = hermite_monomial_coeffs(i);
        const double a_i = scale * exp.coeffs[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < mono.size(); ++k) b[k] += a_i * mono[k];
    }
    return b;
}

namespace {

// log C(d0 + deg, d0); the number of monomials in d0 variables of total
// degree <= deg.
double log_monomial_count(int d0, double deg) {
    return std::lgamma(static_cast<double>(d0) + deg + 1.0) -
           std::lgamma(static_cast<double>(d0) + 1.0) - std::lgamma(deg + 1.0);
}

// sigma_n applied symbolically via Horner: sum_k b_k q^k.
MonomialPolynomial apply_poly_activation(const std::vector<double>& b, const MonomialPolynomial& q) {
    MonomialPolynomial acc = MonomialPolynomial::constant(q.num_vars(), b.back());
    for (std::size_t k = b.size() - 1; k-- > 0;) {
        acc = multiply(acc, q);
        acc.add_term(std::vector<int>(static_cast<std::size_t>(q.num_vars()), 0), b[k]);
        acc.prune();
    }
    return acc;
}

}  // namespace

ShadowExpansion expand_shadow(const NetworkWeights& w, const HermiteExpansion& exp, int n,
                              double max_monomials) {
    w.arch.validate();
    if (n < 1) throw std::invalid_argument("expand_shadow: n must be >= 1");
    const int depth = w.arch.depth();
    const int d0 = w.arch.input_dim();

    const double max_degree = std::pow(static_cast<double>(n), static_cast<double>(depth - 1));
    if (log_monomial_count(d0, max_degree) > std::log(max_monomials)) {
        throw CombinatorialBlowup(
            "expand_shadow: monomial budget exceeded (d0 = " + std::to_string(d0) +
            ", degree n^(i-1) = " + format_double(max_degree) + ")");
    }

    const std::vector<double> b = sigma_n_monomial_coeffs(exp, n);

    ShadowExpansion result;
    std::vector<MonomialPolynomial> current;
    current.reserve(static_cast<std::size_t>(d0));
    for (int k = 0; k < d0; ++k) current.push_back(MonomialPolynomial::variable(d0, k));
    result.layer_coeff_sums.push_back(1.0);

    for (int j = 0; j < depth; ++j) {
        const int d_in = w.arch.dims[static_cast<std::size_t>(j)];
        const int d_out = w.arch.dims[static_cast<std::size_t>(j) + 1];
        const auto& layer = w.layers[static_cast<std::size_t>(j)];
        std::vector<MonomialPolynomial> next;
        next.reserve(static_cast<std::size_t>(d_out));
        for (int r = 0; r < d_out; ++r) {
            MonomialPolynomial q(d0);
            for (int c = 0; c < d_in; ++c) {
                add_scaled_inplace(q, current[static_cast<std::size_t>(c)],
                                   layer[static_cast<std::size_t>(r) * d_in + c]);
            }
            q.prune();
            if (j + 1 < depth) {
                next.push_back(apply_poly_activation(b, q));
            } else {
                next.push_back(std::move(q));  // final layer stays linear
            }
        }
        current = std::move(next);
        if (j + 1 < depth) {
            double m = 0.0;
            for (const auto& p : current) m = std::max(m, p.coeff_abs_sum());
            result.layer_coeff_sums.push_back(m);
        }
    }

    result.outputs = std::move(current);
    return result;
}

BoundReport coefficient_sum_check(const NetworkWeights& w, const HermiteExpansion& exp, int n) {
    const int depth = w.arch.depth();
    const int d_bar = w.arch.width_sum();
    std::map<std::string, std::string> meta;
    meta["n"] = std::to_string(n);
    meta["i"] = std::to_string(depth);
    meta["d_bar"] = std::to_string(d_bar);
    meta["seed"] = std::to_string(w.seed);
    {
        std::string dims;
        for (std::size_t k = 0; k < w.arch.dims.size(); ++k) {
            if (k) dims += "x";
            dims += std::to_string(w.arch.dims[k]);
        }
        meta["widths"] = dims;
    }

    const double bound = log_coeff_sum_bound(n, depth, d_bar);

    if (w.max_entry() > static_cast<double>(d_bar)) {
        // The clipped network is identically zero; nothing to measure.
        meta["vacuous"] = "true";
        return make_report("coefficient_sum", 0.0, 0.0, bound, 1, std::move(meta));
    }

    const ShadowExpansion se = expand_shadow(w, exp, n);
    double max_sum = 0.0;
    for (const auto& p : se.outputs) max_sum = std::max(max_sum, p.coeff_abs_sum());
    meta["coeff_abs_sum"] = format_double(max_sum);
    const double measured = std::log(std::max(max_sum, std::numeric_limits<double>::min()));
    return make_report("coefficient_sum", measured, 0.0, bound, 1, std::move(meta));
}

nlohmann::ordered_json polynomial_to_json(const MonomialPolynomial& p) {
    nlohmann::ordered_json j;
    j["num_vars"] = p.num_vars();
    j["total_degree"] = p.total_degree();
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& [exps, coeff] : p.terms()) {
        nlohmann::ordered_json t;
        t["exponents"] = exps;
        t["coefficient"] = coeff;
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

}  // namespace shadownet
