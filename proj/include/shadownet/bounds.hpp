#pragma once

// Closed-form quantities from the approximation theory: the polynomial
// growth constant lambda(n), the per-lemma error bounds, truncation-tail
// bounds, and the BoundReport record produced by every verification run.

#include <cstdint>
#include <map>
#include <string>

namespace shadownet {

struct BoundReport {
    std::string name;
    double measured = 0.0;
    double std_error = 0.0;
    double bound = 0.0;
    long samples = 0;
    bool passed = false;
    // Auxiliary values (dims, seeds, term decompositions) as strings; keys
    // iterate in sorted order so serialized output is deterministic.
    std::map<std::string, std::string> metadata;
};

// passed <=> measured <= bound + 3 * std_error.
BoundReport make_report(std::string name, double measured, double std_error, double bound,
                        long samples, std::map<std::string, std::string> metadata = {});

// Shortest decimal form that round-trips a double; used for metadata and CSV.
std::string format_double(double v);

// log(m!!) for odd m >= 1.
double log_odd_double_factorial(int m);

// lambda(n) = 2^{2n+1} (9 (4n-1)!!)^{1/4}, the uniform growth constant of
// sigma_n against max(|x|, 1)^n. Evaluated in log space; n >= 1.
double lambda_n(int n);

// Largest delta admissible for the contraction argument at degree n:
// sqrt(eps_n) / (2L + 2 lambda(n)).
double delta_admissible(int n, double L, double eps_n);

// Single-layer approximation: E||sigma(Wx) - sigma_n(Wx)||^2 equals
// 2 (1 - sqrt(1 - eps_n)) on the sphere; this returns that value.
double single_layer_error_sq(double eps_n);

// One activated layer on perturbed inputs (||x|| = 1, ||x - y|| <= eps,
// ||y|| arbitrary within delta of 1):
//   2 L delta + sqrt(2 eps_n) + sqrt(6 L^2 eps / (1 - eps_n)) + 2 lambda(n) delta.
double bound_main_lemma(int n, double L, double eps, double delta, double eps_n);

// One activated layer on sphere inputs at distance <= eps:
//   sqrt(2 eps_n) + sqrt(2 L^2 eps / (1 - eps_n)).
double bound_adding_layer(int n, double L, double eps, double eps_n);

// Truncated-pass contraction after i activated layers:
//   12 (L+1)^2 eps_n^{2^{-i}}; i >= 0.
double bound_contraction(int i, double L, double eps_n);

// Depth-i network, linear final layer: E||Phi^i - Phi^{i,n}|| bounds.
//   main:  13 (L+1)^2 eps_n^{1 / 2^{i-1}}
//   intro: 14 (L+1)^2 eps_n^{1 / 2^{i-1}}
//   intro chained through eps_n <= L^2/n: 14 (L+1)^3 / n^{1 / 2^{i-1}}
double bound_theorem_main(int i, double L, double eps_n);
double bound_theorem_intro(int i, double L, double eps_n);
double bound_theorem_intro_chained(int i, double L, int n);

// Truncation-tail bounds.
double eps_bound_lipschitz(int n, double L);  // L^2 / n
double eps_bound_sigmoid(int n);              // 2^{-n}
double eps_bound_sigmoid_binom(int n);        // 1 / (k C(n+1, k)), k = ceil((n+1)/2)
// ((n+1-k)! / (n+1)!) * ||sigma^{(k)}||^2 for 1 <= k <= n+1.
double eps_bound_derivative(int n, int k, double deriv_sq_norm);

// E[(d^k/dx^k erf_sigmoid_raw)^2] under N(0,1): the k-th derivative of the
// raw erf sigmoid is (-1)^{k-1} sqrt((k-1)!) h_{k-1}(x) exp(-x^2/2).
double erf_sigmoid_derivative_sq_norm(int k);

// Symbolic-expansion coefficient bound, in log space:
// log of (2 d_bar)^{4 n^{i-1}} = 4 n^{i-1} log(2 d_bar).
double log_coeff_sum_bound(int n, int depth, int width_sum);

}  // namespace shadownet
