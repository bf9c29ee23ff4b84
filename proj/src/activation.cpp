#include "shadownet/activation.hpp"

#include <cmath>
#include <stdexcept>

#include "shadownet/hermite.hpp"
#include "shadownet/numeric.hpp"

namespace shadownet {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrtHalfPi = 1.2533141373155002512;

double erf_sigmoid_raw(double x) {
    // integral_0^x exp(-t^2/2) dt = sqrt(pi/2) erf(x / sqrt(2))
    return kSqrtHalfPi * std::erf(x * 0.70710678118654752440);
}

double relu_like_raw(double x) {
    return x + x * std::erf(x) + (std::exp(-x * x) - 1.0) / kSqrtPi;
}

double raw_second_moment(const std::function<double(double)>& raw, bool kink_at_zero) {
    const auto sq = [&raw](double x) {
        const double v = raw(x);
        return v * v;
    };
    return kink_at_zero ? expect_split_at_zero(sq) : expect_gauss_hermite(sq, 128);
}

}  // namespace

ActivationSpec make_activation(ActivationKind kind) {
    ActivationSpec spec;
    spec.kind = kind;
    switch (kind) {
        case ActivationKind::identity: {
            spec.name = "identity";
            spec.normalization_factor = 1.0;  // E[X^2] = 1 exactly
            spec.lipschitz = 1.0;
            spec.eval = [](double x) { return x; };
            return spec;
        }
        case ActivationKind::erf_sigmoid: {
            spec.name = "erf_sigmoid";
            const double nf = std::sqrt(raw_second_moment(erf_sigmoid_raw, false));
            spec.normalization_factor = nf;
            spec.lipschitz = 1.0 / nf;  // |raw'| = exp(-x^2/2) <= 1
            spec.eval = [nf](double x) { return erf_sigmoid_raw(x) / nf; };
            return spec;
        }
        case ActivationKind::relu_like: {
            spec.name = "relu_like";
            const double nf = std::sqrt(raw_second_moment(relu_like_raw, false));
            spec.normalization_factor = nf;
            spec.lipschitz = 2.0 / nf;  // raw' = 1 + erf(x) lies in (0, 2)
            spec.eval = [nf](double x) { return relu_like_raw(x) / nf; };
            return spec;
        }
        case ActivationKind::relu: {
            spec.name = "relu";
            // E[max(0,X)^2] = 1/2 analytically; normalized relu is sqrt(2) max(0,x).
            const double nf = std::sqrt(0.5);
            spec.normalization_factor = nf;
            spec.lipschitz = 1.0 / nf;
            spec.kink_at_zero = true;
            spec.eval = [nf](double x) { return x > 0.0 ? x / nf : 0.0; };
            return spec;
        }
        case ActivationKind::custom:
            throw std::invalid_argument("make_activation: custom requires make_custom_activation");
    }
    throw std::invalid_argument("make_activation: unknown kind");
}

ActivationSpec make_activation(const std::string& name) {
    if (name == "identity") return make_activation(ActivationKind::identity);
    if (name == "erf_sigmoid") return make_activation(ActivationKind::erf_sigmoid);
    if (name == "relu_like") return make_activation(ActivationKind::relu_like);
    if (name == "relu") return make_activation(ActivationKind::relu);
    throw std::invalid_argument("make_activation: unknown activation '" + name + "'");
}

ActivationSpec make_custom_activation(const std::string& name,
                                      std::function<double(double)> raw,
                                      double raw_lipschitz,
                                      bool kink_at_zero) {
    if (!raw) throw std::invalid_argument("make_custom_activation: null activation");
    if (!(raw_lipschitz > 0.0)) {
        throw std::invalid_argument("make_custom_activation: Lipschitz constant must be positive");
    }
    const double m2 = raw_second_moment(raw, kink_at_zero);
    if (!std::isfinite(m2) || m2 > 1e12) {
        throw std::invalid_argument("make_custom_activation: E[raw^2] quadrature diverges");
    }
    if (m2 <= 0.0) {
        throw std::invalid_argument("make_custom_activation: raw activation is null in L2");
    }
    ActivationSpec spec;
    spec.name = name;
    spec.kind = ActivationKind::custom;
    spec.kink_at_zero = kink_at_zero;
    const double nf = std::sqrt(m2);
    spec.normalization_factor = nf;
    spec.lipschitz = raw_lipschitz / nf;
    spec.eval = [nf, raw = std::move(raw)](double x) { return raw(x) / nf; };
    return spec;
}

double HermiteExpansion::truncation_error(int n) const {
    if (n < 0 || n > max_degree) {
        throw std::invalid_argument("truncation_error: degree outside expansion range");
    }
    return eps[static_cast<std::size_t>(n)];
}

HermiteExpansion expand(const ActivationSpec& act, int max_degree) {
    if (max_degree < 0 || max_degree > 40) {
        throw std::invalid_argument("expand: max_degree must lie in [0, 40]");
    }
    if (!act.eval) throw std::invalid_argument("expand: activation has no evaluator");

    HermiteExpansion result;
    result.activation = act;
    result.max_degree = max_degree;
    result.coeffs.resize(static_cast<std::size_t>(max_degree) + 1);

    if (act.kink_at_zero) {
        for (int i = 0; i <= max_degree; ++i) {
            result.coeffs[static_cast<std::size_t>(i)] = expect_split_at_zero(
                [&act, i](double x) { return act.eval(x) * hermite_eval(i, x); });
        }
    } else {
        const int nodes = 4 * max_degree + 64;
        const QuadratureRule rule = gauss_hermite(nodes);
        for (int i = 0; i <= max_degree; ++i) {
            CompensatedSum s;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                s.add(rule.weights[k] * act.eval(rule.nodes[k]) * hermite_eval(i, rule.nodes[k]));
            }
            result.coeffs[static_cast<std::size_t>(i)] = s.value();
        }
    }

    result.eps.resize(static_cast<std::size_t>(max_degree) + 1);
    CompensatedSum mass;
    for (int n = 0; n <= max_degree; ++n) {
        const double a = result.coeffs[static_cast<std::size_t>(n)];
        mass.add(a * a);
        const double tail = 1.0 - mass.value();
        result.eps[static_cast<std::size_t>(n)] = tail > 0.0 ? tail : 0.0;
    }
    result.truncation_warning = result.eps[static_cast<std::size_t>(max_degree)] > 0.5;
    return result;
}

TruncatedActivation::TruncatedActivation(const HermiteExpansion& exp, int n) {
    const double eps_n = exp.truncation_error(n);
    if (eps_n > 0.5) {
        throw TruncationTooCoarse("sigma_n undefined: eps(" + std::to_string(n) +
                                  ") = " + std::to_string(eps_n) + " > 1/2 for " +
                                  exp.activation.name);
    }
    const double scale = 1.0 / std::sqrt(1.0 - eps_n);
    scaled_.resize(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        scaled_[static_cast<std::size_t>(i)] = scale * exp.coeffs[static_cast<std::size_t>(i)];
    }
}

double TruncatedActivation::operator()(double x) const {
    // Fused Hermite recursion and coefficient dot product; no allocation.
    double acc = scaled_[0];
    if (scaled_.size() == 1) return acc;
    double prev = 1.0;
    double cur = x;
    acc += scaled_[1] * cur;
    for (std::size_t k = 1; k + 1 < scaled_.size(); ++k) {
        const double dk = static_cast<double>(k);
        const double next = x * cur / std::sqrt(dk + 1.0) - std::sqrt(dk / (dk + 1.0)) * prev;
        prev = cur;
        cur = next;
        acc += scaled_[k + 1] * cur;
    }
    return acc;
}

double sigma_n_eval(const HermiteExpansion& exp, int n, double x) {
    return TruncatedActivation(exp, n)(x);
}

double dual_activation(const HermiteExpansion& exp, double rho) {
    if (std::abs(rho) > 1.0) {
        throw std::domain_error("dual_activation: |rho| must be <= 1");
    }
    CompensatedSum s;
    double power = 1.0;
    for (std::size_t i = 0; i < exp.coeffs.size(); ++i) {
        s.add(exp.coeffs[i] * exp.coeffs[i] * power);
        power *= rho;
    }
    return s.value();
}

}  // namespace shadownet
