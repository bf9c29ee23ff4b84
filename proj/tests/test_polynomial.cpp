#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "shadownet/errors.hpp"
#include "shadownet/hermite.hpp"
#include "shadownet/network.hpp"
#include "shadownet/polynomial.hpp"
#include "shadownet/rng.hpp"

using namespace shadownet;

TEST_CASE("graded lexicographic order") {
    GradedLexLess less;
    const std::vector<std::vector<int>> sorted = {
        {0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}, {0, 3},
    };
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        CHECK(less(sorted[i], sorted[i + 1]));
        CHECK(!less(sorted[i + 1], sorted[i]));
    }
    CHECK(!less(sorted[2], sorted[2]));
}

TEST_CASE("polynomial arithmetic") {
    // (x0 + 2)(x0 - 2) = x0^2 - 4
    MonomialPolynomial a = add_scaled(MonomialPolynomial::variable(1, 0),
                                      MonomialPolynomial::constant(1, 2.0), 1.0);
    MonomialPolynomial b = add_scaled(MonomialPolynomial::variable(1, 0),
                                      MonomialPolynomial::constant(1, 2.0), -1.0);
    MonomialPolynomial p = multiply(a, b);
    p.prune();
    CHECK(p.term_count() == 2);
    CHECK(p.total_degree() == 2);
    CHECK(p.evaluate(std::vector<double>{3.0}) == doctest::Approx(5.0).epsilon(1e-15));

    // (x0 + x1)^2 has the full cross term.
    MonomialPolynomial s = add_scaled(MonomialPolynomial::variable(2, 0),
                                      MonomialPolynomial::variable(2, 1), 1.0);
    const MonomialPolynomial sq = multiply(s, s);
    CHECK(sq.term_count() == 3);
    CHECK(sq.terms().at({1, 1}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sq.coeff_abs_sum() == doctest::Approx(4.0).epsilon(1e-15));

    // Accumulation and cancellation.
    MonomialPolynomial acc(2);
    acc.add_term({1, 0}, 0.5);
    acc.add_term({1, 0}, -0.5);
    acc.prune();
    CHECK(acc.term_count() == 0);
    CHECK(acc.total_degree() == 0);
    CHECK(acc.evaluate(std::vector<double>{1.0, 1.0}) == 0.0);

    CHECK_THROWS_AS(acc.add_term({1}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(acc.add_term({-1, 0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(multiply(MonomialPolynomial::constant(1, 1.0),
                             MonomialPolynomial::constant(2, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("sigma_n monomial coefficients match the truncated activation") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const HermiteExpansion exp = expand(act, 8);
    const int n = 5;
    const std::vector<double> b = sigma_n_monomial_coeffs(exp, n);
    REQUIRE(b.size() == static_cast<std::size_t>(n) + 1);

    // Independent reconstruction from the Hermite-to-monomial table.
    const double scale = 1.0 / std::sqrt(1.0 - exp.truncation_error(n));
    std::vector<double> expect(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i <= n; ++i) {
        const std::vector<double> c = hermite_monomial_coeffs(i);
        for (int k = 0; k <= i; ++k) {
            expect[static_cast<std::size_t>(k)] +=
                scale * exp.coeffs[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(k)];
        }
    }
    for (int k = 0; k <= n; ++k) {
        CHECK(b[static_cast<std::size_t>(k)] ==
              doctest::Approx(expect[static_cast<std::size_t>(k)]).epsilon(1e-13));
    }

    // Pointwise equality with the renormalized truncation.
    const TruncatedActivation sig(exp, n);
    for (double x : {-1.8, -0.2, 0.0, 0.9, 2.4}) {
        double horner = 0.0;
        for (int k = n; k >= 0; --k) horner = horner * x + b[static_cast<std::size_t>(k)];
        CHECK(horner == doctest::Approx(sig(x)).epsilon(1e-12));
    }
}

TEST_CASE("sigma_n monomial coefficients respect the 2^{(n+1)/2} cap") {
    for (ActivationKind kind :
         {ActivationKind::erf_sigmoid, ActivationKind::relu_like, ActivationKind::relu}) {
        const HermiteExpansion exp = expand(make_activation(kind), 12);
        for (int n = 1; n <= 12; ++n) {
            const std::vector<double> b = sigma_n_monomial_coeffs(exp, n);
            const double cap = std::pow(2.0, 0.5 * (n + 1));
            for (double v : b) CHECK(std::abs(v) <= cap);
        }
    }
    const HermiteExpansion relu = expand(make_activation(ActivationKind::relu), 2);
    CHECK_THROWS_AS(sigma_n_monomial_coeffs(relu, 0), TruncationTooCoarse);
}

TEST_CASE("linear shadow expansion is the weight product") {
    const ActivationSpec id = make_activation(ActivationKind::identity);
    const HermiteExpansion exp = expand(id, 1);
    const Architecture arch{{3, 2, 1}};
    const NetworkWeights w = sample_weights(arch, 6);

    const ShadowExpansion se = expand_shadow(w, exp, 1);
    REQUIRE(se.outputs.size() == 1);
    const MonomialPolynomial& p = se.outputs[0];
    CHECK(p.total_degree() == 1);

    // Coefficient of x_c must equal (W^2 W^1)_{0c}.
    for (int c = 0; c < 3; ++c) {
        double prod = 0.0;
        for (int r = 0; r < 2; ++r) {
            prod += w.layers[1][static_cast<std::size_t>(r)] *
                    w.layers[0][static_cast<std::size_t>(r * 3 + c)];
        }
        std::vector<int> mono(3, 0);
        mono[static_cast<std::size_t>(c)] = 1;
        CHECK(p.terms().at(mono) == doctest::Approx(prod).epsilon(1e-13));
    }
}

TEST_CASE("shadow expansion agrees with the numeric shadow pass") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const HermiteExpansion exp = expand(act, 6);
    const Architecture arch{{3, 4, 2}};
    const NetworkWeights w = sample_weights(arch, 42);
    const int n = 3;

    const ShadowExpansion se = expand_shadow(w, exp, n);
    REQUIRE(se.outputs.size() == 2);
    CHECK(se.layer_coeff_sums.size() == 2);
    CHECK(se.layer_coeff_sums[0] == 1.0);

    GaussianSampler gen(5);
    for (int t = 0; t < 50; ++t) {
        const Vec x = sphere_point(3, gen);
        const ForwardPass numeric = shadow_forward(w, exp, n, x);
        for (std::size_t k = 0; k < 2; ++k) {
            const double sym = se.outputs[k].evaluate(x);
            const double num = numeric.output()[k];
            CHECK(std::abs(sym - num) <= 1e-10 * std::max(1.0, std::abs(num)));
        }
    }

    // Degree cap n^{i-1} and the per-layer coefficient mass cap.
    const double d_bar = static_cast<double>(arch.width_sum());
    for (const MonomialPolynomial& p : se.outputs) CHECK(p.total_degree() <= 3);
    double running = 0.0;
    for (std::size_t j = 1; j < se.layer_coeff_sums.size(); ++j) {
        running += std::pow(static_cast<double>(n), static_cast<double>(j));
        CHECK(std::log(se.layer_coeff_sums[j]) <= 2.0 * running * std::log(2.0 * d_bar) + 1e-9);
    }
}

TEST_CASE("deeper expansion keeps the degree cap") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const HermiteExpansion exp = expand(act, 4);
    const Architecture arch{{2, 3, 3, 1}};
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        const NetworkWeights w = sample_weights(arch, seed);
        const ShadowExpansion se = expand_shadow(w, exp, 2);
        CHECK(se.outputs[0].total_degree() <= 4);  // n^{i-1} = 2^2
        GaussianSampler gen(seed);
        const Vec x = sphere_point(2, gen);
        const double sym = se.outputs[0].evaluate(x);
        const double num = shadow_forward(w, exp, 2, x).output()[0];
        CHECK(std::abs(sym - num) <= 1e-10 * std::max(1.0, std::abs(num)));
    }
}

TEST_CASE("combinatorial budget guard") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const HermiteExpansion exp = expand(act, 12);
    const Architecture arch{{30, 2, 2, 1}};
    const NetworkWeights w = sample_weights(arch, 1);
    // C(30 + 144, 30) is astronomically over budget; must throw fast.
    CHECK_THROWS_AS(expand_shadow(w, exp, 12), CombinatorialBlowup);
    // A generous budget on a small net is fine.
    const NetworkWeights small = sample_weights(Architecture{{3, 4, 1}}, 1);
    CHECK_NOTHROW(expand_shadow(small, exp, 3, 1e6));
    CHECK_THROWS_AS(expand_shadow(small, exp, 3, 10.0), CombinatorialBlowup);
}

TEST_CASE("coefficient sum check") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const HermiteExpansion exp = expand(act, 6);
    const Architecture arch{{3, 4, 1}};
    NetworkWeights w = sample_weights(arch, 42);

    const BoundReport normal = coefficient_sum_check(w, exp, 3);
    CHECK(normal.passed);
    CHECK(normal.metadata.count("vacuous") == 0);
    CHECK(normal.bound == doctest::Approx(4.0 * 3.0 * std::log(16.0)).epsilon(1e-12));

    // Oversized entry: the clipped network is identically zero, so the claim
    // holds vacuously and the report says so.
    w.layers[0][0] = static_cast<double>(arch.width_sum()) + 2.0;
    const BoundReport vac = coefficient_sum_check(w, exp, 3);
    CHECK(vac.passed);
    CHECK(vac.measured == 0.0);
    CHECK(vac.metadata.at("vacuous") == "true");
}

TEST_CASE("polynomial json is deterministic and graded") {
    MonomialPolynomial p(2);
    p.add_term({0, 0}, 1.5);
    p.add_term({2, 0}, -0.25);
    p.add_term({0, 1}, 3.0);
    const nlohmann::ordered_json j = polynomial_to_json(p);
    CHECK(j.at("num_vars") == 2);
    CHECK(j.at("total_degree") == 2);
    REQUIRE(j.at("terms").size() == 3);
    // Graded order: constant, degree-1, degree-2.
    CHECK(j.at("terms")[0].at("exponents") == std::vector<int>{0, 0});
    CHECK(j.at("terms")[1].at("exponents") == std::vector<int>{0, 1});
    CHECK(j.at("terms")[2].at("exponents") == std::vector<int>{2, 0});
    CHECK(j.dump() == polynomial_to_json(p).dump());
}
