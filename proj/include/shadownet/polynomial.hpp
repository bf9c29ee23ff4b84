#pragma once

// Sparse multivariate polynomials over the input variables and the symbolic
// expansion of shadow networks into them. Terms live in a map ordered by
// graded lexicographic order, so iteration (and any serialization) is
// deterministic.

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "shadownet/activation.hpp"
#include "shadownet/bounds.hpp"
#include "shadownet/network.hpp"

#include "json.hpp"

namespace shadownet {

// Total degree first, then lexicographic on the exponent vector.
struct GradedLexLess {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const;
};

class MonomialPolynomial {
public:
    using TermMap = std::map<std::vector<int>, double, GradedLexLess>;

    MonomialPolynomial() = default;
    explicit MonomialPolynomial(int num_vars);
    static MonomialPolynomial constant(int num_vars, double c);
    static MonomialPolynomial variable(int num_vars, int index);

    int num_vars() const { return num_vars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    int total_degree() const;

    // Accumulates onto an existing term; exponent vector size must match.
    void add_term(const std::vector<int>& exponents, double coeff);
    // Drop terms with |coeff| < tol.
    void prune(double tol = 1e-14);

    double evaluate(std::span<const double> x) const;
    double coeff_abs_sum() const;

private:
    int num_vars_ = 0;
    TermMap terms_;
};

// a + scale * b
MonomialPolynomial add_scaled(const MonomialPolynomial& a, const MonomialPolynomial& b, double scale);
void add_scaled_inplace(MonomialPolynomial& a, const MonomialPolynomial& b, double scale);
MonomialPolynomial multiply(const MonomialPolynomial& a, const MonomialPolynomial& b);

// Monomial-basis coefficients b_0..b_n of sigma_n (combines the Hermite
// coefficients with hermite_monomial_coeffs); |b_k| <= 2^{(n+1)/2}.
std::vector<double> sigma_n_monomial_coeffs(const HermiteExpansion& exp, int n);

struct ShadowExpansion {
    // One polynomial in the d_0 input variables per output coordinate.
    std::vector<MonomialPolynomial> outputs;
    // layer_coeff_sums[j] = max over neurons of sum|coefficients| of the
    // degree-n^j polynomials computing Psi^{j,n}; index 0 is the input layer
    // (always 1). Activated layers only, j = 0..depth-1.
    std::vector<double> layer_coeff_sums;
};

// Expand Phi^{i,n} symbolically. Throws CombinatorialBlowup when the
// monomial budget C(d_0 + n^{i-1}, d_0) exceeds max_monomials.
ShadowExpansion expand_shadow(const NetworkWeights& w, const HermiteExpansion& exp, int n,
                              double max_monomials = 1e6);

// Compare log(max over outputs of sum|coefficients|) of the clipped shadow
// network against 4 n^{i-1} log(2 d_bar). When the clip fires (some weight
// entry exceeds d_bar) the polynomial is identically zero and the report is
// a vacuous pass with metadata["vacuous"] = "true".
BoundReport coefficient_sum_check(const NetworkWeights& w, const HermiteExpansion& exp, int n);

nlohmann::ordered_json polynomial_to_json(const MonomialPolynomial& p);

}  // namespace shadownet
