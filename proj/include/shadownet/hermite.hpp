#pragma once

// Normalized probabilists' Hermite polynomials h_n and Gaussian quadrature.
//
// h_0 = 1, h_1 = x, and
//   h_{n+1}(x) = x h_n(x) / sqrt(n+1) - sqrt(n/(n+1)) h_{n-1}(x),
// which makes {h_n} orthonormal under the standard Gaussian measure:
//   E[h_i(X) h_j(X)] = delta_ij. For rho-correlated standard Gaussians
//   E[h_i(X) h_j(Y)] = delta_ij rho^i.

#include <functional>
#include <vector>

namespace shadownet {

// h_n(x) via the three-term recursion.
double hermite_eval(int n, double x);

// h_0(x), ..., h_n(x) in one pass.
std::vector<double> hermite_all(int n, double x);

// d/dx h_n(x) = sqrt(n) h_{n-1}(x); requires n >= 1.
double hermite_derivative(int n, double x);

// E[X^n] for X ~ N(0,1): (n-1)!! for even n, 0 for odd n.
double gaussian_moment(int n);

// Monomial coefficients of h_n: result[k] multiplies x^k, size n+1.
// Coefficients satisfy |c_k| <= 2^{n/2}; throws std::overflow_error if a
// coefficient stops being representable (does not happen for n <= 40).
std::vector<double> hermite_monomial_coeffs(int n);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// m-node Gauss-Hermite rule for the standard Gaussian weight: integrates
// polynomials of degree <= 2m-1 exactly against N(0,1). 1 <= m <= 300.
QuadratureRule gauss_hermite(int m);

// m-node Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int m);

// Node count used for expectations of integrands of the given polynomial
// degree: max(2*degree + 10, 64).
int default_node_count(int degree);

// E[f(X)], X ~ N(0,1), via Gauss-Hermite quadrature with `nodes` nodes.
double expect_gauss_hermite(const std::function<double(double)>& f, int nodes);

// E[f(X)] for an f with a kink at 0: composite Gauss-Legendre panels over
// [-half_range, 0] and [0, half_range] against the Gaussian density.
double expect_split_at_zero(const std::function<double(double)>& f,
                            double half_range = 14.0, int panels_per_side = 28,
                            int nodes_per_panel = 16);

}  // namespace shadownet
