#pragma once

// Learners for random-teacher regression: ridge regression over low-degree
// monomial features (the polynomial-time scheme suggested by the
// approximation theorem) and plain minibatch SGD on a one-hidden-layer relu
// student. Both are deterministic given their seeds.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "shadownet/activation.hpp"
#include "shadownet/network.hpp"
#include "shadownet/verify.hpp"

#include "json.hpp"

namespace shadownet {

struct TeacherMeta {
    std::vector<int> dims;
    std::uint64_t seed = 0;
    std::string activation;
};

struct Dataset {
    std::vector<Vec> inputs;
    std::vector<Vec> targets;
    TeacherMeta teacher;
};

// Teacher targets are the linear final-layer outputs Phi^i(x).
Dataset generate_dataset(const NetworkWeights& w, const ActivationSpec& act, int num_samples,
                         std::uint64_t seed,
                         const InputDistribution& dist = InputDistribution::uniform_sphere());

// Same, but the teacher is the shadow network Phi^{i,n}(x): a polynomial
// teacher, exactly realizable by degree-n^{i-1} monomial features.
Dataset generate_shadow_dataset(const NetworkWeights& w, const HermiteExpansion& exp, int n,
                                int num_samples, std::uint64_t seed,
                                const InputDistribution& dist = InputDistribution::uniform_sphere());

// All exponent vectors with total degree <= max_degree in graded-lex order
// (degree 0 first). Throws FeatureBlowup when the count exceeds max_features.
std::vector<std::vector<int>> monomial_exponents(int num_vars, int max_degree,
                                                 double max_features = 1e5);

struct PolyRegressionModel {
    int num_vars = 0;
    int degree = 0;
    double ridge_lambda = 0.0;
    std::vector<std::vector<int>> exponents;        // feature order
    std::vector<std::vector<double>> coefficients;  // [output][feature]
    bool underdetermined = false;                   // fewer samples than features
};

// Least squares on raw monomial features (no standardization): minimizes
// ||A beta - y||^2 + lambda ||beta||^2 per output coordinate. lambda = 0
// demands full column rank and throws SingularSystem otherwise.
PolyRegressionModel fit_poly_regression(const Dataset& data, int degree,
                                        double ridge_lambda = 1e-8);

struct SgdReluModel {
    int input_dim = 0;
    int hidden_width = 0;
    int output_dim = 0;
    std::vector<double> w1;  // hidden_width x input_dim, row-major
    std::vector<double> w2;  // output_dim x hidden_width, row-major
    long steps = 0;
    double learning_rate = 0.0;
    int batch_size = 0;
    std::uint64_t seed = 0;
    double final_train_loss = 0.0;
};

struct SgdConfig {
    int hidden_width = 512;
    long steps = 20000;
    double learning_rate = 0.01;
    int batch_size = 32;
    std::uint64_t seed = 7;
};

// Minibatch SGD on f(x) = W2 relu(W1 x), squared loss averaged over output
// coordinates. W1 ~ N(0, 1/d), W2 ~ N(0, 1/H). Throws SgdDiverged when a
// minibatch loss exceeds 1e6.
SgdReluModel fit_sgd_relu(const Dataset& data, const SgdConfig& cfg);

using LearnedModel = std::variant<PolyRegressionModel, SgdReluModel>;

Vec predict(const LearnedModel& model, const Vec& x);

struct EvalResult {
    double mean_err = 0.0;  // E ||y - prediction|| (normalized norm)
    double rmse = 0.0;      // sqrt(E ||y - prediction||^2)
};
EvalResult evaluate(const LearnedModel& model, const Dataset& test);

nlohmann::ordered_json model_to_json(const LearnedModel& model);

}  // namespace shadownet
