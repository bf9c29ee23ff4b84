#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "shadownet/errors.hpp"
#include "shadownet/learners.hpp"
#include "shadownet/network.hpp"
#include "shadownet/polynomial.hpp"

using namespace shadownet;

TEST_CASE("monomial feature enumeration") {
    const auto feats = monomial_exponents(2, 2);
    const std::vector<std::vector<int>> expected = {
        {0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0},
    };
    CHECK(feats == expected);

    // Count is C(d + N, d); lower-degree lists are prefixes of higher ones.
    CHECK(monomial_exponents(8, 5).size() == 1287);
    const auto deg2 = monomial_exponents(3, 2);
    const auto deg4 = monomial_exponents(3, 4);
    REQUIRE(deg4.size() > deg2.size());
    for (std::size_t k = 0; k < deg2.size(); ++k) CHECK(deg4[k] == deg2[k]);

    // The order matches the polynomial term order.
    GradedLexLess less;
    for (std::size_t k = 0; k + 1 < feats.size(); ++k) CHECK(less(feats[k], feats[k + 1]));

    CHECK_THROWS_AS(monomial_exponents(30, 10, 1e5), FeatureBlowup);
    CHECK_THROWS_AS(monomial_exponents(0, 2), std::invalid_argument);
    CHECK_THROWS_AS(monomial_exponents(2, -1), std::invalid_argument);
}

TEST_CASE("datasets are deterministic and labeled by the teacher") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const Architecture arch{{6, 12, 2}};
    const NetworkWeights w = sample_weights(arch, 42);

    const Dataset a = generate_dataset(w, act, 50, 7);
    const Dataset b = generate_dataset(w, act, 50, 7);
    const Dataset c = generate_dataset(w, act, 50, 8);
    CHECK(a.inputs == b.inputs);
    CHECK(a.targets == b.targets);
    CHECK(a.inputs != c.inputs);
    CHECK(a.teacher.dims == std::vector<int>{6, 12, 2});
    CHECK(a.teacher.seed == 42);
    CHECK(a.teacher.activation == "erf_sigmoid");
    REQUIRE(a.inputs.size() == 50);
    REQUIRE(a.targets.size() == 50);

    // Targets are the linear final-layer outputs.
    const ForwardPass pass = forward(w, act, a.inputs[0]);
    CHECK(a.targets[0] == pass.phi.back());

    const HermiteExpansion exp = expand(act, 4);
    const Dataset s = generate_shadow_dataset(w, exp, 2, 20, 7);
    CHECK(s.teacher.activation == "erf_sigmoid_shadow");
    CHECK(s.targets[0] == shadow_forward(w, exp, 2, s.inputs[0]).phi.back());
}

TEST_CASE("ridge-free regression recovers a linear teacher exactly") {
    const ActivationSpec id = make_activation(ActivationKind::identity);
    const Architecture arch{{6, 3, 1}};
    const NetworkWeights w = sample_weights(arch, 5);
    const Dataset train = generate_dataset(w, id, 100, 11);
    const Dataset test = generate_dataset(w, id, 40, 12);

    const PolyRegressionModel model = fit_poly_regression(train, 1, 0.0);
    CHECK(!model.underdetermined);
    CHECK(model.degree == 1);
    REQUIRE(model.coefficients.size() == 1);
    REQUIRE(model.coefficients[0].size() == 7);  // constant + 6 slopes

    const EvalResult res = evaluate(model, test);
    CHECK(res.mean_err <= 1e-10);
    CHECK(res.rmse <= 1e-10);
}

TEST_CASE("shadow teachers are realizable at their own degree") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const HermiteExpansion exp = expand(act, 4);
    const Architecture arch{{4, 8, 1}};
    const NetworkWeights w = sample_weights(arch, 3);

    const Dataset train = generate_shadow_dataset(w, exp, 2, 300, 21);
    const Dataset test = generate_shadow_dataset(w, exp, 2, 100, 22);
    const PolyRegressionModel model = fit_poly_regression(train, 2, 1e-8);
    const EvalResult on_train = evaluate(model, train);
    const EvalResult on_test = evaluate(model, test);
    CHECK(on_train.rmse <= 1e-6);
    CHECK(on_test.rmse <= 1e-6);
}

TEST_CASE("rank and sample-count guards") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const Architecture arch{{4, 8, 1}};
    const NetworkWeights w = sample_weights(arch, 3);

    // 5 samples cannot span the 35 degree-3 features.
    const Dataset tiny = generate_dataset(w, act, 5, 9);
    CHECK_THROWS_AS(fit_poly_regression(tiny, 3, 0.0), SingularSystem);

    // With ridge the same system solves but is flagged.
    const Dataset small = generate_dataset(w, act, 20, 9);
    const PolyRegressionModel flagged = fit_poly_regression(small, 3, 1e-8);
    CHECK(flagged.underdetermined);
    // Interpolation regime: train error collapses.
    CHECK(evaluate(flagged, small).rmse <= 1e-4);

    CHECK_THROWS_AS(fit_poly_regression(tiny, 3, -1.0), std::invalid_argument);
    const Dataset empty;
    CHECK_THROWS_AS(fit_poly_regression(empty, 1, 1e-8), std::invalid_argument);
}

TEST_CASE("higher degree tracks the teacher more closely") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const Architecture arch{{6, 24, 1}};
    const NetworkWeights w = sample_weights(arch, 17);
    const Dataset train = generate_dataset(w, act, 1500, 31);
    const Dataset test = generate_dataset(w, act, 400, 32);

    const EvalResult deg1 = evaluate(fit_poly_regression(train, 1, 1e-8), test);
    const EvalResult deg3 = evaluate(fit_poly_regression(train, 3, 1e-8), test);
    CHECK(deg3.mean_err < deg1.mean_err);
    CHECK(deg1.mean_err < 0.5);
    CHECK(deg3.mean_err < 0.15);
}

TEST_CASE("sgd fits a shallow teacher") {
    const ActivationSpec id = make_activation(ActivationKind::identity);
    const Architecture arch{{4, 2, 1}};
    const NetworkWeights w = sample_weights(arch, 2);
    const Dataset train = generate_dataset(w, id, 600, 41);
    const Dataset test = generate_dataset(w, id, 200, 42);

    SgdConfig cfg;
    cfg.hidden_width = 64;
    cfg.steps = 5000;
    cfg.learning_rate = 0.02;
    cfg.batch_size = 16;
    const SgdReluModel model = fit_sgd_relu(train, cfg);
    CHECK(model.final_train_loss < 0.01);
    const EvalResult res = evaluate(LearnedModel{model}, test);
    CHECK(res.mean_err < 0.1);

    // Deterministic in the seed.
    const SgdReluModel again = fit_sgd_relu(train, cfg);
    CHECK(model.w1 == again.w1);
    CHECK(model.w2 == again.w2);
    CHECK(model.final_train_loss == again.final_train_loss);

    SgdConfig hot = cfg;
    hot.learning_rate = 50.0;
    CHECK_THROWS_AS(fit_sgd_relu(train, hot), SgdDiverged);

    SgdConfig bad = cfg;
    bad.hidden_width = 0;
    CHECK_THROWS_AS(fit_sgd_relu(train, bad), std::invalid_argument);
}

TEST_CASE("prediction validates dimensions") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const Architecture arch{{4, 8, 2}};
    const NetworkWeights w = sample_weights(arch, 3);
    const Dataset train = generate_dataset(w, act, 60, 9);
    const PolyRegressionModel model = fit_poly_regression(train, 1, 1e-8);

    const Vec good(4, 0.1);
    CHECK(predict(LearnedModel{model}, good).size() == 2);
    const Vec bad(5, 0.1);
    CHECK_THROWS_AS(predict(LearnedModel{model}, bad), std::invalid_argument);
}

TEST_CASE("model serialization carries the fit") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const Architecture arch{{3, 6, 1}};
    const NetworkWeights w = sample_weights(arch, 4);
    const Dataset train = generate_dataset(w, act, 80, 13);

    const PolyRegressionModel poly = fit_poly_regression(train, 2, 1e-8);
    const nlohmann::ordered_json pj = model_to_json(LearnedModel{poly});
    CHECK(pj.at("type") == "poly_regression");
    CHECK(pj.at("num_vars") == 3);
    CHECK(pj.at("degree") == 2);
    CHECK(pj.at("exponents").size() == 10);
    CHECK(pj.at("coefficients")[0].size() == 10);

    SgdConfig cfg;
    cfg.hidden_width = 8;
    cfg.steps = 200;
    const SgdReluModel sgd = fit_sgd_relu(train, cfg);
    const nlohmann::ordered_json sj = model_to_json(LearnedModel{sgd});
    CHECK(sj.at("type") == "sgd_relu");
    CHECK(sj.at("hidden_width") == 8);
    CHECK(sj.at("w1").size() == 8u * 3u);
    CHECK(sj.at("w2").size() == 1u * 8u);
    CHECK(sj.at("final_train_loss").get<double>() == sgd.final_train_loss);
}
