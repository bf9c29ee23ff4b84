#pragma once

// Activations normalized to unit Gaussian second moment, their Hermite
// expansions sigma = sum_i a_i h_i, truncation tails eps_sigma(n), and the
// renormalized truncated activation
//   sigma_n = (1 - eps_sigma(n))^{-1/2} sum_{i<=n} a_i h_i,
// defined whenever eps_sigma(n) <= 1/2.

#include <functional>
#include <string>
#include <vector>

#include "shadownet/errors.hpp"

namespace shadownet {

enum class ActivationKind { identity, erf_sigmoid, relu_like, relu, custom };

struct ActivationSpec {
    std::string name;
    ActivationKind kind = ActivationKind::custom;
    // Normalized activation: E[eval(X)^2] = 1 for X ~ N(0,1).
    std::function<double(double)> eval;
    // Lipschitz constant of the normalized activation.
    double lipschitz = 1.0;
    // sqrt(E[raw(X)^2]); eval = raw / normalization_factor.
    double normalization_factor = 1.0;
    // Kinked activations use split quadrature instead of Gauss-Hermite.
    bool kink_at_zero = false;
};

// Built-in activations:
//   identity     raw(x) = x
//   erf_sigmoid  raw(x) = integral_0^x exp(-t^2/2) dt, a bounded odd sigmoid
//   relu_like    raw(x) = x + x erf(x) + (exp(-x^2) - 1) / sqrt(pi),
//                a smooth 2-Lipschitz relu analogue
//   relu         raw(x) = max(0, x)
ActivationSpec make_activation(ActivationKind kind);
ActivationSpec make_activation(const std::string& name);

// Wrap a user-supplied raw activation: computes the normalization factor by
// quadrature and rejects it when E[raw^2] is non-finite or exceeds 1e12.
// raw_lipschitz is the Lipschitz constant of `raw`.
ActivationSpec make_custom_activation(const std::string& name,
                                      std::function<double(double)> raw,
                                      double raw_lipschitz,
                                      bool kink_at_zero = false);

struct HermiteExpansion {
    ActivationSpec activation;
    int max_degree = 0;
    std::vector<double> coeffs;  // a_0 .. a_N of the normalized activation
    std::vector<double> eps;     // eps[n] = max(0, 1 - sum_{i<=n} a_i^2)
    // Set when even the full expansion leaves eps(N) > 1/2.
    bool truncation_warning = false;

    double truncation_error(int n) const;  // eps[n] with bounds check
};

// Hermite coefficients a_0..a_N and tails of the normalized activation.
// max_degree must lie in [0, 40]. Smooth activations integrate with
// Gauss-Hermite on 4*max_degree + 64 nodes; kinked ones with composite
// panels split at the kink.
HermiteExpansion expand(const ActivationSpec& act, int max_degree);

// Reusable evaluator for sigma_n. Construction throws TruncationTooCoarse
// when eps(n) > 1/2.
class TruncatedActivation {
public:
    TruncatedActivation(const HermiteExpansion& exp, int n);
    double operator()(double x) const;
    int degree() const { return static_cast<int>(scaled_.size()) - 1; }

private:
    std::vector<double> scaled_;  // a_i / sqrt(1 - eps_n)
};

// sigma_n(x); convenience wrapper over TruncatedActivation.
double sigma_n_eval(const HermiteExpansion& exp, int n, double x);

// Dual activation restricted to the expansion: sum_{i<=N} a_i^2 rho^i.
// Requires |rho| <= 1.
double dual_activation(const HermiteExpansion& exp, double rho);

}  // namespace shadownet
