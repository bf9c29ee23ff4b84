#include "shadownet/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shadownet/numeric.hpp"

namespace shadownet {

double hermite_eval(int n, double x) {
    if (n < 0) throw std::invalid_argument("hermite_eval: negative degree");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int k = 1; k < n; ++k) {
        const double dk = static_cast<double>(k);
        const double next = x * cur / std::sqrt(dk + 1.0) - std::sqrt(dk / (dk + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> hermite_all(int n, double x) {
    if (n < 0) throw std::invalid_argument("hermite_all: negative degree");
    std::vector<double> h(static_cast<std::size_t>(n) + 1);
    h[0] = 1.0;
    if (n >= 1) h[1] = x;
    for (int k = 1; k < n; ++k) {
        const double dk = static_cast<double>(k);
        h[k + 1] = x * h[k] / std::sqrt(dk + 1.0) - std::sqrt(dk / (dk + 1.0)) * h[k - 1];
    }
    return h;
}

double hermite_derivative(int n, double x) {
    if (n < 1) throw std::invalid_argument("hermite_derivative: degree must be >= 1");
    return std::sqrt(static_cast<double>(n)) * hermite_eval(n - 1, x);
}

double gaussian_moment(int n) {
    if (n < 0) throw std::invalid_argument("gaussian_moment: negative moment");
    if (n % 2 == 1) return 0.0;
    double prod = 1.0;
    for (int k = n - 1; k >= 1; k -= 2) prod *= static_cast<double>(k);
    return prod;
}

std::vector<double> hermite_monomial_coeffs(int n) {
    if (n < 0) throw std::invalid_argument("hermite_monomial_coeffs: negative degree");
    std::vector<double> prev = {1.0};
    if (n == 0) return prev;
    std::vector<double> cur = {0.0, 1.0};
    for (int k = 1; k < n; ++k) {
        const double dk = static_cast<double>(k);
        const double inv = 1.0 / std::sqrt(dk + 1.0);
        const double back = std::sqrt(dk / (dk + 1.0));
        std::vector<double> next(static_cast<std::size_t>(k) + 2, 0.0);
        for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] += inv * cur[j];
        for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= back * prev[j];
        prev = std::move(cur);
        cur = std::move(next);
    }
    for (double c : cur) {
        if (!std::isfinite(c)) throw std::overflow_error("hermite_monomial_coeffs: coefficient overflow");
    }
    return cur;
}

namespace {

// Eigenvalues of a symmetric tridiagonal matrix by the implicit QL method.
// d holds the diagonal in, the eigenvalues out; e holds the off-diagonal
// in e[0..n-2].
void tridiagonal_eigenvalues(std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return;
    e.resize(static_cast<std::size_t>(n), 0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-15 * dd) break;
            }
            if (m != l) {
                if (++iter > 60) throw std::runtime_error("tridiagonal_eigenvalues: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (i == l) {
                        d[l] -= p;
                        e[l] = g;
                        e[m] = 0.0;
                    }
                }
            }
        } while (m != l);
    }
}

}  // namespace

QuadratureRule gauss_hermite(int m) {
    if (m < 1 || m > 300) throw std::invalid_argument("gauss_hermite: node count out of range");
    // Jacobi matrix of the normalized Hermite recursion: zero diagonal,
    // off-diagonal sqrt(k).
    std::vector<double> d(static_cast<std::size_t>(m), 0.0);
    std::vector<double> e(static_cast<std::size_t>(m), 0.0);
    for (int k = 1; k < m; ++k) e[k - 1] = std::sqrt(static_cast<double>(k));
    tridiagonal_eigenvalues(d, e);
    std::sort(d.begin(), d.end());

    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double x = d[static_cast<std::size_t>(i)];
        // Two Newton polish steps on h_m; h_m'(x) = sqrt(m) h_{m-1}(x).
        for (int it = 0; it < 2; ++it) {
            const std::vector<double> h = hermite_all(m, x);
            const double deriv = std::sqrt(static_cast<double>(m)) * h[static_cast<std::size_t>(m - 1)];
            if (deriv != 0.0) x -= h[static_cast<std::size_t>(m)] / deriv;
        }
        // Christoffel weight: w = 1 / sum_{k<m} h_k(x)^2.
        const std::vector<double> h = hermite_all(m - 1, x);
        CompensatedSum s;
        for (double v : h) s.add(v * v);
        rule.nodes[static_cast<std::size_t>(i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = 1.0 / s.value();
    }
    return rule;
}

QuadratureRule gauss_legendre(int m) {
    if (m < 1 || m > 300) throw std::invalid_argument("gauss_legendre: node count out of range");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));
    const double pi = 3.14159265358979323846;
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-like initial guess, then Newton on the Legendre recursion.
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(m) + 0.5));
        double deriv = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double dk = static_cast<double>(k);
                const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
                p0 = p1;
                p1 = p2;
            }
            deriv = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / deriv;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        {
            // Recompute p0/p1 at the converged node for the weight.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double dk = static_cast<double>(k);
                const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
                p0 = p1;
                p1 = p2;
            }
            deriv = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(m - 1 - i)] = w;
    }
    if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
    return rule;
}

int default_node_count(int degree) {
    return std::max(2 * degree + 10, 64);
}

double expect_gauss_hermite(const std::function<double(double)>& f, int nodes) {
    const QuadratureRule rule = gauss_hermite(nodes);
    CompensatedSum s;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        s.add(rule.weights[i] * f(rule.nodes[i]));
    }
    return s.value();
}

double expect_split_at_zero(const std::function<double(double)>& f,
                            double half_range, int panels_per_side, int nodes_per_panel) {
    if (half_range <= 0.0 || panels_per_side < 1) {
        throw std::invalid_argument("expect_split_at_zero: bad panel layout");
    }
    const QuadratureRule gl = gauss_legendre(nodes_per_panel);
    const double width = half_range / static_cast<double>(panels_per_side);
    const double inv_sqrt_2pi = 0.39894228040143267794;
    CompensatedSum s;
    for (int side = -1; side <= 1; side += 2) {
        for (int p = 0; p < panels_per_side; ++p) {
            const double lo = (side < 0) ? -width * static_cast<double>(p + 1)
                                         : width * static_cast<double>(p);
            const double hi = lo + width;
            const double mid = 0.5 * (lo + hi);
            const double halfw = 0.5 * (hi - lo);
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                const double x = mid + halfw * gl.nodes[i];
                const double density = inv_sqrt_2pi * std::exp(-0.5 * x * x);
                s.add(gl.weights[i] * halfw * f(x) * density);
            }
        }
    }
    return s.value();
}

}  // namespace shadownet
