#include "shadownet/learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "shadownet/numeric.hpp"
#include "shadownet/rng.hpp"

namespace shadownet {

namespace {

Dataset make_dataset(const NetworkWeights& w, int num_samples, std::uint64_t seed,
                     const InputDistribution& dist, const std::string& activation_name,
                     const std::function<Vec(const Vec&)>& teacher_fn) {
    if (num_samples < 1) throw std::invalid_argument("generate_dataset: need >= 1 sample");
    Dataset data;
    data.teacher.dims = w.arch.dims;
    data.teacher.seed = w.seed;
    data.teacher.activation = activation_name;
    data.inputs.reserve(static_cast<std::size_t>(num_samples));
    data.targets.reserve(static_cast<std::size_t>(num_samples));
    GaussianSampler g(derive_seed(seed, 0));
    for (int s = 0; s < num_samples; ++s) {
        Vec x;
        switch (dist.kind) {
            case InputDistribution::Kind::uniform_sphere:
                x = sphere_point(w.arch.input_dim(), g);
                break;
            case InputDistribution::Kind::fixed_point:
                x = dist.points[0];
                break;
            case InputDistribution::Kind::custom_list:
                x = dist.points[static_cast<std::size_t>(s) % dist.points.size()];
                break;
        }
        if (static_cast<int>(x.size()) != w.arch.input_dim()) {
            throw std::invalid_argument("generate_dataset: input dimension mismatch");
        }
        data.targets.push_back(teacher_fn(x));
        data.inputs.push_back(std::move(x));
    }
    return data;
}

}  // namespace

Dataset generate_dataset(const NetworkWeights& w, const ActivationSpec& act, int num_samples,
                         std::uint64_t seed, const InputDistribution& dist) {
    return make_dataset(w, num_samples, seed, dist, act.name,
                        [&](const Vec& x) { return forward(w, act, x).phi.back(); });
}

Dataset generate_shadow_dataset(const NetworkWeights& w, const HermiteExpansion& exp, int n,
                                int num_samples, std::uint64_t seed,
                                const InputDistribution& dist) {
    return make_dataset(w, num_samples, seed, dist, exp.activation.name + "_shadow",
                        [&](const Vec& x) { return shadow_forward(w, exp, n, x).phi.back(); });
}

std::vector<std::vector<int>> monomial_exponents(int num_vars, int max_degree,
                                                 double max_features) {
    if (num_vars < 1) throw std::invalid_argument("monomial_exponents: num_vars must be >= 1");
    if (max_degree < 0) throw std::invalid_argument("monomial_exponents: negative degree");
    // C(num_vars + max_degree, num_vars) features, checked in log space.
    const double log_count = std::lgamma(static_cast<double>(num_vars + max_degree) + 1.0) -
                             std::lgamma(static_cast<double>(num_vars) + 1.0) -
                             std::lgamma(static_cast<double>(max_degree) + 1.0);
    if (log_count > std::log(max_features)) {
        throw FeatureBlowup("monomial_exponents: feature count exceeds budget (" +
                            std::to_string(num_vars) + " vars, degree " +
                            std::to_string(max_degree) + ")");
    }

    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(num_vars), 0);
    // Ascending lexicographic within each grade, matching the term order of
    // MonomialPolynomial.
    const std::function<void(int, int)> emit = [&](int var, int remaining) {
        if (var == num_vars - 1) {
            current[static_cast<std::size_t>(var)] = remaining;
            out.push_back(current);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            current[static_cast<std::size_t>(var)] = e;
            emit(var + 1, remaining - e);
        }
    };
    for (int degree = 0; degree <= max_degree; ++degree) emit(0, degree);
    return out;
}

namespace {

Eigen::MatrixXd design_matrix(const std::vector<Vec>& inputs,
                              const std::vector<std::vector<int>>& exponents, int num_vars,
                              int max_degree) {
    const std::size_t S = inputs.size();
    const std::size_t P = exponents.size();
    Eigen::MatrixXd A(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(P));
    std::vector<double> pows(static_cast<std::size_t>(num_vars) *
                             (static_cast<std::size_t>(max_degree) + 1));
    for (std::size_t s = 0; s < S; ++s) {
        const Vec& x = inputs[s];
        for (int k = 0; k < num_vars; ++k) {
            double p = 1.0;
            for (int e = 0; e <= max_degree; ++e) {
                pows[static_cast<std::size_t>(k) * (max_degree + 1) + e] = p;
                p *= x[static_cast<std::size_t>(k)];
            }
        }
        for (std::size_t j = 0; j < P; ++j) {
            double v = 1.0;
            const std::vector<int>& e = exponents[j];
            for (int k = 0; k < num_vars; ++k) {
                v *= pows[static_cast<std::size_t>(k) * (max_degree + 1) + e[static_cast<std::size_t>(k)]];
            }
            A(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = v;
        }
    }
    return A;
}

}  // namespace

PolyRegressionModel fit_poly_regression(const Dataset& data, int degree, double ridge_lambda) {
    if (data.inputs.empty()) throw std::invalid_argument("fit_poly_regression: empty dataset");
    if (!(ridge_lambda >= 0.0)) {
        throw std::invalid_argument("fit_poly_regression: ridge_lambda must be >= 0");
    }
    const int num_vars = static_cast<int>(data.inputs[0].size());
    const int out_dim = static_cast<int>(data.targets[0].size());
    const std::size_t S = data.inputs.size();

    PolyRegressionModel model;
    model.num_vars = num_vars;
    model.degree = degree;
    model.ridge_lambda = ridge_lambda;
    model.exponents = monomial_exponents(num_vars, degree);
    const std::size_t P = model.exponents.size();
    model.underdetermined = S < P;

    const Eigen::MatrixXd A = design_matrix(data.inputs, model.exponents, num_vars, degree);
    Eigen::MatrixXd Y(static_cast<Eigen::Index>(S), out_dim);
    for (std::size_t s = 0; s < S; ++s) {
        for (int o = 0; o < out_dim; ++o) {
            Y(static_cast<Eigen::Index>(s), o) = data.targets[s][static_cast<std::size_t>(o)];
        }
    }

    Eigen::MatrixXd beta;
    if (ridge_lambda > 0.0) {
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(P),
                                                     static_cast<Eigen::Index>(P));
        gram.selfadjointView<Eigen::Lower>().rankUpdate(A.transpose());
        gram.diagonal().array() += ridge_lambda;
        beta = Eigen::LDLT<Eigen::MatrixXd>(gram.selfadjointView<Eigen::Lower>())
                   .solve(A.transpose() * Y);
    } else {
        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        if (qr.rank() < static_cast<Eigen::Index>(P)) {
            throw SingularSystem("fit_poly_regression: rank " + std::to_string(qr.rank()) +
                                 " < " + std::to_string(P) + " features and ridge_lambda = 0");
        }
        beta = qr.solve(Y);
    }

    model.coefficients.resize(static_cast<std::size_t>(out_dim));
    for (int o = 0; o < out_dim; ++o) {
        auto& row = model.coefficients[static_cast<std::size_t>(o)];
        row.resize(P);
        for (std::size_t j = 0; j < P; ++j) {
            row[j] = beta(static_cast<Eigen::Index>(j), o);
        }
    }
    return model;
}

SgdReluModel fit_sgd_relu(const Dataset& data, const SgdConfig& cfg) {
    if (data.inputs.empty()) throw std::invalid_argument("fit_sgd_relu: empty dataset");
    if (cfg.hidden_width < 1 || cfg.steps < 1 || cfg.batch_size < 1 || !(cfg.learning_rate > 0.0)) {
        throw std::invalid_argument("fit_sgd_relu: bad hyperparameters");
    }
    const int d = static_cast<int>(data.inputs[0].size());
    const int H = cfg.hidden_width;
    const int out = static_cast<int>(data.targets[0].size());
    const std::size_t S = data.inputs.size();

    SgdReluModel m;
    m.input_dim = d;
    m.hidden_width = H;
    m.output_dim = out;
    m.steps = cfg.steps;
    m.learning_rate = cfg.learning_rate;
    m.batch_size = cfg.batch_size;
    m.seed = cfg.seed;
    m.w1.resize(static_cast<std::size_t>(H) * d);
    m.w2.resize(static_cast<std::size_t>(out) * H);

    GaussianSampler init(derive_seed(cfg.seed, 0));
    const double s1 = 1.0 / std::sqrt(static_cast<double>(d));
    for (auto& v : m.w1) v = s1 * init.next();
    const double s2 = 1.0 / std::sqrt(static_cast<double>(H));
    for (auto& v : m.w2) v = s2 * init.next();

    Xoshiro256pp batch_rng(derive_seed(cfg.seed, 1));
    std::vector<double> hidden(static_cast<std::size_t>(H));
    std::vector<double> pre(static_cast<std::size_t>(H));
    std::vector<double> err(static_cast<std::size_t>(out));
    std::vector<double> g1(m.w1.size());
    std::vector<double> g2(m.w2.size());
    std::vector<double> hidden_err(static_cast<std::size_t>(H));

    double last_loss = 0.0;
    for (long step = 0; step < cfg.steps; ++step) {
        std::fill(g1.begin(), g1.end(), 0.0);
        std::fill(g2.begin(), g2.end(), 0.0);
        double batch_loss = 0.0;
        for (int b = 0; b < cfg.batch_size; ++b) {
            const std::size_t idx = static_cast<std::size_t>(batch_rng.next() % S);
            const Vec& x = data.inputs[idx];
            const Vec& y = data.targets[idx];

            for (int h = 0; h < H; ++h) {
                const double* row = m.w1.data() + static_cast<std::size_t>(h) * d;
                double acc = 0.0;
                for (int k = 0; k < d; ++k) acc += row[k] * x[static_cast<std::size_t>(k)];
                pre[static_cast<std::size_t>(h)] = acc;
                hidden[static_cast<std::size_t>(h)] = acc > 0.0 ? acc : 0.0;
            }
            for (int o = 0; o < out; ++o) {
                const double* row = m.w2.data() + static_cast<std::size_t>(o) * H;
                double acc = 0.0;
                for (int h = 0; h < H; ++h) acc += row[h] * hidden[static_cast<std::size_t>(h)];
                const double e = acc - y[static_cast<std::size_t>(o)];
                err[static_cast<std::size_t>(o)] = e;
                batch_loss += e * e / static_cast<double>(out);
            }

            // d loss / d w2 = (2/out) err * hidden^T
            for (int o = 0; o < out; ++o) {
                const double scale = 2.0 * err[static_cast<std::size_t>(o)] / static_cast<double>(out);
                double* grow = g2.data() + static_cast<std::size_t>(o) * H;
                for (int h = 0; h < H; ++h) grow[h] += scale * hidden[static_cast<std::size_t>(h)];
            }
            // backprop through relu
            for (int h = 0; h < H; ++h) {
                double acc = 0.0;
                for (int o = 0; o < out; ++o) {
                    acc += m.w2[static_cast<std::size_t>(o) * H + h] * err[static_cast<std::size_t>(o)];
                }
                hidden_err[static_cast<std::size_t>(h)] =
                    pre[static_cast<std::size_t>(h)] > 0.0 ? 2.0 * acc / static_cast<double>(out) : 0.0;
            }
            for (int h = 0; h < H; ++h) {
                const double he = hidden_err[static_cast<std::size_t>(h)];
                if (he == 0.0) continue;
                double* grow = g1.data() + static_cast<std::size_t>(h) * d;
                for (int k = 0; k < d; ++k) grow[k] += he * x[static_cast<std::size_t>(k)];
            }
        }

        last_loss = batch_loss / static_cast<double>(cfg.batch_size);
        if (!(last_loss <= 1e6)) {
            throw SgdDiverged("fit_sgd_relu: minibatch loss " + format_double(last_loss) +
                              " at step " + std::to_string(step));
        }
        const double scale = cfg.learning_rate / static_cast<double>(cfg.batch_size);
        for (std::size_t k = 0; k < m.w1.size(); ++k) m.w1[k] -= scale * g1[k];
        for (std::size_t k = 0; k < m.w2.size(); ++k) m.w2[k] -= scale * g2[k];
    }
    m.final_train_loss = last_loss;
    return m;
}

namespace {

Vec predict_poly(const PolyRegressionModel& m, const Vec& x) {
    if (static_cast<int>(x.size()) != m.num_vars) {
        throw std::invalid_argument("predict: input dimension mismatch");
    }
    std::vector<double> features(m.exponents.size());
    for (std::size_t j = 0; j < m.exponents.size(); ++j) {
        double v = 1.0;
        const auto& e = m.exponents[j];
        for (std::size_t k = 0; k < e.size(); ++k) {
            for (int p = 0; p < e[k]; ++p) v *= x[k];
        }
        features[j] = v;
    }
    Vec out(m.coefficients.size());
    for (std::size_t o = 0; o < m.coefficients.size(); ++o) {
        CompensatedSum s;
        for (std::size_t j = 0; j < features.size(); ++j) {
            s.add(m.coefficients[o][j] * features[j]);
        }
        out[o] = s.value();
    }
    return out;
}

Vec predict_sgd(const SgdReluModel& m, const Vec& x) {
    if (static_cast<int>(x.size()) != m.input_dim) {
        throw std::invalid_argument("predict: input dimension mismatch");
    }
    std::vector<double> hidden(static_cast<std::size_t>(m.hidden_width));
    for (int h = 0; h < m.hidden_width; ++h) {
        const double* row = m.w1.data() + static_cast<std::size_t>(h) * m.input_dim;
        double acc = 0.0;
        for (int k = 0; k < m.input_dim; ++k) acc += row[k] * x[static_cast<std::size_t>(k)];
        hidden[static_cast<std::size_t>(h)] = acc > 0.0 ? acc : 0.0;
    }
    Vec out(static_cast<std::size_t>(m.output_dim));
    for (int o = 0; o < m.output_dim; ++o) {
        const double* row = m.w2.data() + static_cast<std::size_t>(o) * m.hidden_width;
        double acc = 0.0;
        for (int h = 0; h < m.hidden_width; ++h) acc += row[h] * hidden[static_cast<std::size_t>(h)];
        out[static_cast<std::size_t>(o)] = acc;
    }
    return out;
}

}  // namespace

Vec predict(const LearnedModel& model, const Vec& x) {
    if (const auto* poly = std::get_if<PolyRegressionModel>(&model)) return predict_poly(*poly, x);
    return predict_sgd(std::get<SgdReluModel>(model), x);
}

EvalResult evaluate(const LearnedModel& model, const Dataset& test) {
    if (test.inputs.empty()) throw std::invalid_argument("evaluate: empty dataset");
    RunningStats err, sq;
    for (std::size_t s = 0; s < test.inputs.size(); ++s) {
        const Vec pred = predict(model, test.inputs[s]);
        const double e = normalized_dist(pred, test.targets[s]);
        err.add(e);
        sq.add(e * e);
    }
    EvalResult r;
    r.mean_err = err.mean();
    r.rmse = std::sqrt(sq.mean());
    return r;
}

nlohmann::ordered_json model_to_json(const LearnedModel& model) {
    nlohmann::ordered_json j;
    if (const auto* poly = std::get_if<PolyRegressionModel>(&model)) {
        j["type"] = "poly_regression";
        j["num_vars"] = poly->num_vars;
        j["degree"] = poly->degree;
        j["ridge_lambda"] = poly->ridge_lambda;
        j["underdetermined"] = poly->underdetermined;
        nlohmann::ordered_json exps = nlohmann::ordered_json::array();
        for (const auto& e : poly->exponents) exps.push_back(e);
        j["exponents"] = std::move(exps);
        nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
        for (const auto& c : poly->coefficients) coeffs.push_back(c);
        j["coefficients"] = std::move(coeffs);
    } else {
        const auto& sgd = std::get<SgdReluModel>(model);
        j["type"] = "sgd_relu";
        j["input_dim"] = sgd.input_dim;
        j["hidden_width"] = sgd.hidden_width;
        j["output_dim"] = sgd.output_dim;
        j["steps"] = sgd.steps;
        j["learning_rate"] = sgd.learning_rate;
        j["batch_size"] = sgd.batch_size;
        j["seed"] = sgd.seed;
        j["final_train_loss"] = sgd.final_train_loss;
        j["w1"] = sgd.w1;
        j["w2"] = sgd.w2;
    }
    return j;
}

}  // namespace shadownet
