#include "shadownet/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "shadownet/hermite.hpp"
#include "shadownet/numeric.hpp"

namespace shadownet {

BoundReport make_report(std::string name, double measured, double std_error, double bound,
                        long samples, std::map<std::string, std::string> metadata) {
    BoundReport r;
    r.name = std::move(name);
    r.measured = measured;
    r.std_error = std_error;
    r.bound = bound;
    r.samples = samples;
    r.passed = measured <= bound + 3.0 * std_error;
    r.metadata = std::move(metadata);
    return r;
}

std::string format_double(double v) {
    char buf[64];
    // 17 significant digits round-trip any double.
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double log_odd_double_factorial(int m) {
    if (m < 1 || m % 2 == 0) {
        throw std::invalid_argument("log_odd_double_factorial: m must be odd and >= 1");
    }
    CompensatedSum s;
    for (int k = m; k >= 3; k -= 2) s.add(std::log(static_cast<double>(k)));
    return s.value();
}

double lambda_n(int n) {
    if (n < 1) throw std::invalid_argument("lambda_n: n must be >= 1");
    const double log_val = (2.0 * n + 1.0) * std::log(2.0) +
                           0.25 * (std::log(9.0) + log_odd_double_factorial(4 * n - 1));
    return std::exp(log_val);
}

namespace {

void check_eps_n(double eps_n, const char* where) {
    if (!(eps_n >= 0.0 && eps_n <= 0.5)) {
        throw std::invalid_argument(std::string(where) + ": eps_n must lie in [0, 1/2]");
    }
}

}  // namespace

double delta_admissible(int n, double L, double eps_n) {
    check_eps_n(eps_n, "delta_admissible");
    if (!(L > 0.0)) throw std::invalid_argument("delta_admissible: L must be positive");
    return std::sqrt(eps_n) / (2.0 * L + 2.0 * lambda_n(n));
}

double single_layer_error_sq(double eps_n) {
    check_eps_n(eps_n, "single_layer_error_sq");
    return 2.0 * (1.0 - std::sqrt(1.0 - eps_n));
}

double bound_main_lemma(int n, double L, double eps, double delta, double eps_n) {
    check_eps_n(eps_n, "bound_main_lemma");
    if (!(eps >= 0.0)) throw std::invalid_argument("bound_main_lemma: eps must be >= 0");
    if (!(delta >= 0.0 && delta <= 0.5)) {
        throw std::invalid_argument("bound_main_lemma: delta must lie in [0, 1/2]");
    }
    return 2.0 * L * delta + std::sqrt(2.0 * eps_n) +
           std::sqrt(6.0 * L * L * eps / (1.0 - eps_n)) + 2.0 * lambda_n(n) * delta;
}

double bound_adding_layer(int n, double L, double eps, double eps_n) {
    (void)n;
    check_eps_n(eps_n, "bound_adding_layer");
    if (!(eps >= 0.0)) throw std::invalid_argument("bound_adding_layer: eps must be >= 0");
    return std::sqrt(2.0 * eps_n) + std::sqrt(2.0 * L * L * eps / (1.0 - eps_n));
}

double bound_contraction(int i, double L, double eps_n) {
    if (i < 0) throw std::invalid_argument("bound_contraction: i must be >= 0");
    check_eps_n(eps_n, "bound_contraction");
    const double exponent = std::pow(2.0, -static_cast<double>(i));
    return 12.0 * (L + 1.0) * (L + 1.0) * std::pow(eps_n, exponent);
}

namespace {

double theorem_bound(double constant, int i, double L, double eps_n) {
    if (i < 1) throw std::invalid_argument("theorem bound: depth must be >= 1");
    check_eps_n(eps_n, "theorem bound");
    const double exponent = 1.0 / std::pow(2.0, static_cast<double>(i - 1));
    return constant * (L + 1.0) * (L + 1.0) * std::pow(eps_n, exponent);
}

}  // namespace

double bound_theorem_main(int i, double L, double eps_n) {
    return theorem_bound(13.0, i, L, eps_n);
}

double bound_theorem_intro(int i, double L, double eps_n) {
    return theorem_bound(14.0, i, L, eps_n);
}

double bound_theorem_intro_chained(int i, double L, int n) {
    if (i < 1) throw std::invalid_argument("bound_theorem_intro_chained: depth must be >= 1");
    if (n < 1) throw std::invalid_argument("bound_theorem_intro_chained: n must be >= 1");
    const double exponent = 1.0 / std::pow(2.0, static_cast<double>(i - 1));
    return 14.0 * std::pow(L + 1.0, 3.0) / std::pow(static_cast<double>(n), exponent);
}

double eps_bound_lipschitz(int n, double L) {
    if (n < 1) throw std::invalid_argument("eps_bound_lipschitz: n must be >= 1");
    return L * L / static_cast<double>(n);
}

double eps_bound_sigmoid(int n) {
    if (n < 1) throw std::invalid_argument("eps_bound_sigmoid: n must be >= 1");
    return std::pow(2.0, -static_cast<double>(n));
}

double eps_bound_sigmoid_binom(int n) {
    if (n < 1) throw std::invalid_argument("eps_bound_sigmoid_binom: n must be >= 1");
    const int k = (n + 2) / 2;  // ceil((n+1)/2)
    // C(n+1, k) by the multiplicative formula; exact in double for n <= 40.
    double binom = 1.0;
    for (int j = 1; j <= k; ++j) {
        binom *= static_cast<double>(n + 2 - j) / static_cast<double>(j);
    }
    return 1.0 / (static_cast<double>(k) * binom);
}

double eps_bound_derivative(int n, int k, double deriv_sq_norm) {
    if (n < 0) throw std::invalid_argument("eps_bound_derivative: n must be >= 0");
    if (k < 1 || k > n + 1) {
        throw std::invalid_argument("eps_bound_derivative: k must lie in [1, n+1]");
    }
    if (!(deriv_sq_norm >= 0.0)) {
        throw std::invalid_argument("eps_bound_derivative: negative norm");
    }
    // (n+1-k)! / (n+1)! = 1 / prod_{j=n+2-k}^{n+1} j
    double denom = 1.0;
    for (int j = n + 2 - k; j <= n + 1; ++j) denom *= static_cast<double>(j);
    return deriv_sq_norm / denom;
}

double erf_sigmoid_derivative_sq_norm(int k) {
    if (k < 1) throw std::invalid_argument("erf_sigmoid_derivative_sq_norm: k must be >= 1");
    // (k-1)! * E[h_{k-1}(X)^2 exp(-X^2)]
    double factorial = 1.0;
    for (int j = 2; j <= k - 1; ++j) factorial *= static_cast<double>(j);
    // The integrand is entire and decays like exp(-3x^2/2); 160 nodes give
    // well beyond the accuracy the tail-bound comparisons need.
    const double expectation = expect_gauss_hermite(
        [k](double x) {
            const double h = hermite_eval(k - 1, x);
            return h * h * std::exp(-x * x);
        },
        160);
    return factorial * expectation;
}

double log_coeff_sum_bound(int n, int depth, int width_sum) {
    if (n < 1 || depth < 1 || width_sum < 1) {
        throw std::invalid_argument("log_coeff_sum_bound: arguments must be >= 1");
    }
    return 4.0 * std::pow(static_cast<double>(n), static_cast<double>(depth - 1)) *
           std::log(2.0 * static_cast<double>(width_sum));
}

}  // namespace shadownet
