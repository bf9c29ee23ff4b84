// Command-line front end: Hermite expansions, Monte Carlo lemma
// verification, teacher-student learning runs, symbolic shadow expansion,
// and the closed-form bound calculators.
//
// Exit codes: 0 success, 1 bound violation or training failure, 2 usage
// error, 3 resource guard tripped.

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "shadownet/activation.hpp"
#include "shadownet/bounds.hpp"
#include "shadownet/errors.hpp"
#include "shadownet/hermite.hpp"
#include "shadownet/learners.hpp"
#include "shadownet/network.hpp"
#include "shadownet/polynomial.hpp"
#include "shadownet/rng.hpp"
#include "shadownet/verify.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace shadownet;

// Applies JSON config values to options the command line left untouched and
// rejects keys that match no option.
class ConfigBinder {
public:
    void bind(CLI::Option* opt, std::string key, std::function<void(const json&)> setter) {
        entries_.push_back({std::move(key), opt, std::move(setter)});
    }

    template <typename T>
    void bind_value(CLI::Option* opt, std::string key, T& var) {
        bind(opt, std::move(key), [&var](const json& v) { var = v.get<T>(); });
    }

    void apply(const json& cfg) const {
        if (!cfg.is_object()) throw CLI::ValidationError("config", "config file must hold a JSON object");
        for (const auto& [key, value] : cfg.items()) {
            const auto it = std::find_if(entries_.begin(), entries_.end(),
                                         [&key](const Entry& e) { return e.key == key; });
            if (it == entries_.end()) {
                throw CLI::ValidationError("config", "unknown config key '" + key + "'");
            }
            if (it->opt->count() == 0) it->setter(value);
        }
    }

private:
    struct Entry {
        std::string key;
        CLI::Option* opt;
        std::function<void(const json&)> setter;
    };
    std::vector<Entry> entries_;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("config", "cannot open config file '" + path + "'");
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw CLI::ValidationError("config", std::string("config parse error: ") + e.what());
    }
    return cfg;
}

void write_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
    out << text;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

// ---------------------------------------------------------------- expand --

struct ExpandArgs {
    std::string activation = "erf_sigmoid";
    int n = 12;
    std::string out;
    std::string config;
    bool no_timestamp = false;
};

int run_expand(const ExpandArgs& a) {
    const ActivationSpec act = make_activation(a.activation);
    const HermiteExpansion exp = expand(act, a.n);

    ordered_json j;
    if (!a.no_timestamp) j["generated_at"] = utc_timestamp();
    j["activation"] = act.name;
    j["normalization_factor"] = act.normalization_factor;
    j["lipschitz"] = act.lipschitz;
    j["max_degree"] = exp.max_degree;
    j["coefficients"] = exp.coeffs;
    j["eps"] = exp.eps;
    j["truncation_warning"] = exp.truncation_warning;
    write_text(a.out, j.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------- verify --

struct VerifyArgs {
    std::string activation = "erf_sigmoid";
    int n = 4;
    int depth = 2;
    std::vector<int> dims;
    std::vector<int> poly_dims = {3, 4, 1};
    int seeds = 0;    // 0: depth-dependent default
    int samples = 0;  // 0: depth-dependent default
    std::uint64_t seed = 1;
    double eps = 0.1;
    double delta = 0.05;
    std::string lemma = "all";
    std::string out;
    std::string config;
    bool quick = false;
    bool no_timestamp = false;
};

int run_verify(const VerifyArgs& a) {
    const ActivationSpec act = make_activation(a.activation);
    const HermiteExpansion exp = expand(act, std::max(a.n, 1));

    std::vector<int> dims = a.dims;
    if (dims.empty()) {
        if (a.depth == 2) {
            dims = {64, 256, 1};
        } else if (a.depth == 3) {
            dims = {64, 256, 256, 1};
        } else {
            throw std::invalid_argument("verify: pass --dims for depths other than 2 and 3");
        }
    }
    Architecture arch{dims};
    arch.validate();
    const int depth = arch.depth();
    const int d = dims[0];
    const int d2 = dims[1];

    McConfig cfg;
    cfg.num_weight_samples = a.seeds > 0 ? a.seeds : (depth >= 3 ? 200 : 500);
    cfg.num_input_samples = a.samples > 0 ? a.samples : (depth >= 3 ? 10 : 20);
    cfg.base_seed = a.seed;
    if (a.quick) cfg = cfg.shrunk(10);

    const bool all = a.lemma == "all";
    std::vector<BoundReport> reports;

    if (all || a.lemma == "vec_to_scalar") {
        // Fixed generic pair: a sphere point and an off-sphere companion.
        const Vec x = sphere_point(d, derive_seed(a.seed, 9001));
        Vec y = sphere_point(d, derive_seed(a.seed, 9002));
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = 0.6 * x[k] + 0.5 * y[k];
        const TruncatedActivation sn(exp, a.n);
        reports.push_back(verify_vec_to_scalar(act.eval, [sn](double t) { return sn(t); }, x, y,
                                               d2, cfg));
    }
    if (all || a.lemma == "single_layer") {
        reports.push_back(verify_single_layer(exp, a.n, d, d2, cfg));
    }
    if (all || a.lemma == "adding_layer") {
        reports.push_back(verify_adding_layer(exp, a.n, a.eps, d, d2, cfg));
    }
    if (all || a.lemma == "projection") {
        auto [lip, trunc] = verify_projecting_dont_hurt(exp, a.n, std::min(a.eps, 0.5), d, d2, cfg);
        reports.push_back(std::move(lip));
        reports.push_back(std::move(trunc));
    }
    if (all || a.lemma == "main_lemma") {
        reports.push_back(verify_main_lemma(exp, a.n, a.eps, a.delta, d, d2, cfg));
    }
    if (all || a.lemma == "theorem") {
        reports.push_back(verify_theorem_main(exp, a.n, arch, cfg));
    }
    if (all || a.lemma == "contraction") {
        reports.push_back(verify_contraction(exp, a.n, arch, 0.0, cfg));
    }
    if (all || a.lemma == "clip") {
        // Clip frequency at the requested delta across a 1x / 2x / 4x sweep
        // of the hidden widths.
        for (int mult : {1, 2, 4}) {
            Architecture sweep = arch;
            for (int j = 1; j < depth; ++j) sweep.dims[static_cast<std::size_t>(j)] *= mult;
            reports.push_back(estimate_clip_probability(exp, a.n, sweep, a.delta, cfg));
        }
    }
    if (all || a.lemma == "coeff_sum") {
        Architecture small{a.poly_dims};
        small.validate();
        const NetworkWeights w = sample_weights(small, derive_seed(a.seed, 7001));
        reports.push_back(coefficient_sum_check(w, exp, a.n));
    }
    if (reports.empty()) {
        throw std::invalid_argument("verify: unknown lemma '" + a.lemma + "'");
    }

    int failures = 0;
    std::ostringstream summary;
    for (const auto& r : reports) {
        if (!r.passed) ++failures;
        summary << (r.passed ? "[PASS] " : "[FAIL] ") << r.name
                << " measured=" << format_double(r.measured)
                << " bound=" << format_double(r.bound)
                << " se=" << format_double(r.std_error) << "\n";
    }
    summary << "verification: " << (reports.size() - static_cast<std::size_t>(failures)) << "/"
            << reports.size() << " passed\n";
    std::cout << summary.str();

    if (!a.out.empty()) {
        std::ofstream jsonl(a.out + ".jsonl", std::ios::binary);
        std::ofstream csv(a.out + ".csv", std::ios::binary);
        if (!jsonl || !csv) throw std::runtime_error("cannot open output files at '" + a.out + "'");
        write_reports_jsonl(jsonl, reports, !a.no_timestamp);
        write_reports_csv(csv, reports, !a.no_timestamp);
    } else {
        std::ostringstream jsonl;
        write_reports_jsonl(jsonl, reports, !a.no_timestamp);
        std::cout << jsonl.str();
    }
    return failures == 0 ? 0 : 1;
}

// ----------------------------------------------------------------- learn --

struct LearnArgs {
    std::string learner = "poly";
    std::string activation = "erf_sigmoid";
    std::vector<int> dims = {8, 32, 1};
    int degree = 3;
    double ridge_lambda = 1e-8;
    int train = 2000;
    int test = 500;
    std::uint64_t seed = 1;
    std::uint64_t teacher_seed = 42;
    int hidden = 512;
    long steps = 20000;
    double lr = 0.01;
    int batch = 32;
    bool quick = false;
    bool emit_model = false;
    std::string out;
    std::string config;
    bool no_timestamp = false;
};

int run_learn(const LearnArgs& a) {
    Architecture arch{a.dims};
    arch.validate();
    const ActivationSpec act = make_activation(a.activation);
    const NetworkWeights teacher = sample_weights(arch, a.teacher_seed);

    int train_n = a.train;
    int test_n = a.test;
    long steps = a.steps;
    if (a.quick) {
        train_n = std::max(10, train_n / 10);
        test_n = std::max(10, test_n / 10);
        steps = std::max<long>(100, steps / 10);
    }

    const Dataset train = generate_dataset(teacher, act, train_n, derive_seed(a.seed, 1));
    const Dataset test = generate_dataset(teacher, act, test_n, derive_seed(a.seed, 2));

    LearnedModel model;
    if (a.learner == "poly") {
        model = fit_poly_regression(train, a.degree, a.ridge_lambda);
    } else if (a.learner == "sgd") {
        SgdConfig cfg;
        cfg.hidden_width = a.hidden;
        cfg.steps = steps;
        cfg.learning_rate = a.lr;
        cfg.batch_size = a.batch;
        cfg.seed = derive_seed(a.seed, 3);
        model = fit_sgd_relu(train, cfg);
    } else {
        throw std::invalid_argument("learn: unknown learner '" + a.learner + "'");
    }

    const EvalResult train_err = evaluate(model, train);
    const EvalResult test_err = evaluate(model, test);

    ordered_json j;
    if (!a.no_timestamp) j["generated_at"] = utc_timestamp();
    j["learner"] = a.learner;
    j["teacher"] = weights_to_json(teacher);
    j["teacher"]["activation"] = act.name;
    j["train_samples"] = train_n;
    j["test_samples"] = test_n;
    j["seed"] = a.seed;
    j["train_mean_err"] = train_err.mean_err;
    j["train_rmse"] = train_err.rmse;
    j["test_mean_err"] = test_err.mean_err;
    j["test_rmse"] = test_err.rmse;
    if (const auto* poly = std::get_if<PolyRegressionModel>(&model)) {
        j["degree"] = poly->degree;
        j["ridge_lambda"] = poly->ridge_lambda;
        j["feature_count"] = poly->exponents.size();
        j["underdetermined"] = poly->underdetermined;
    } else {
        const auto& sgd = std::get<SgdReluModel>(model);
        j["hidden_width"] = sgd.hidden_width;
        j["steps"] = sgd.steps;
        j["learning_rate"] = sgd.learning_rate;
        j["batch_size"] = sgd.batch_size;
        j["final_train_loss"] = sgd.final_train_loss;
    }
    if (a.emit_model) j["model"] = model_to_json(model);
    write_text(a.out, j.dump(2) + "\n");
    return 0;
}

// ----------------------------------------------------------- expand-poly --

struct ExpandPolyArgs {
    std::string activation = "erf_sigmoid";
    int n = 3;
    std::vector<int> dims = {3, 4, 1};
    std::uint64_t seed = 42;
    int check_points = 25;
    std::string out;
    std::string config;
    bool no_timestamp = false;
};

int run_expand_poly(const ExpandPolyArgs& a) {
    Architecture arch{a.dims};
    arch.validate();
    const ActivationSpec act = make_activation(a.activation);
    const HermiteExpansion exp = expand(act, a.n);
    const NetworkWeights w = sample_weights(arch, a.seed);

    const ShadowExpansion se = expand_shadow(w, exp, a.n);
    const BoundReport coeff_report = coefficient_sum_check(w, exp, a.n);

    // Agreement between the symbolic polynomials and the numeric pass.
    double max_rel_err = 0.0;
    GaussianSampler g(derive_seed(a.seed, 99));
    for (int p = 0; p < a.check_points; ++p) {
        const Vec x = sphere_point(arch.input_dim(), g);
        const Vec numeric = shadow_forward(w, exp, a.n, x).phi.back();
        for (std::size_t o = 0; o < se.outputs.size(); ++o) {
            const double sym = se.outputs[o].evaluate(x);
            const double rel = std::abs(sym - numeric[o]) / std::max(1.0, std::abs(numeric[o]));
            max_rel_err = std::max(max_rel_err, rel);
        }
    }

    ordered_json j;
    if (!a.no_timestamp) j["generated_at"] = utc_timestamp();
    j["activation"] = act.name;
    j["n"] = a.n;
    j["dims"] = arch.dims;
    j["seed"] = a.seed;
    j["max_total_degree"] = [&se] {
        int deg = 0;
        for (const auto& p : se.outputs) deg = std::max(deg, p.total_degree());
        return deg;
    }();
    j["layer_coeff_sums"] = se.layer_coeff_sums;
    j["agreement_max_rel_err"] = max_rel_err;
    {
        ordered_json cr;
        cr["name"] = coeff_report.name;
        cr["measured_log"] = coeff_report.measured;
        cr["bound_log"] = coeff_report.bound;
        cr["passed"] = coeff_report.passed;
        j["coefficient_sum"] = std::move(cr);
    }
    ordered_json polys = ordered_json::array();
    for (const auto& p : se.outputs) polys.push_back(polynomial_to_json(p));
    j["outputs"] = std::move(polys);
    write_text(a.out, j.dump(2) + "\n");
    return coeff_report.passed && max_rel_err <= 1e-8 ? 0 : 1;
}

// ---------------------------------------------------------------- bounds --

struct BoundsArgs {
    std::string activation = "erf_sigmoid";
    int n = 4;
    int depth = 2;
    double eps = 0.1;
    double delta = 0.05;
    std::string out;
    std::string config;
    bool no_timestamp = false;
};

int run_bounds(const BoundsArgs& a) {
    const ActivationSpec act = make_activation(a.activation);
    const HermiteExpansion exp = expand(act, a.n);
    const double eps_n = exp.truncation_error(a.n);
    const double L = act.lipschitz;

    ordered_json j;
    if (!a.no_timestamp) j["generated_at"] = utc_timestamp();
    j["activation"] = act.name;
    j["n"] = a.n;
    j["depth"] = a.depth;
    j["L"] = L;
    j["eps_n"] = eps_n;
    j["lambda_n"] = lambda_n(a.n);
    j["delta_admissible"] = delta_admissible(a.n, L, eps_n);
    j["single_layer_error_sq"] = single_layer_error_sq(eps_n);
    j["bound_single_layer"] = std::sqrt(2.0 * eps_n);
    j["bound_adding_layer"] = bound_adding_layer(a.n, L, a.eps, eps_n);
    j["bound_main_lemma"] = bound_main_lemma(a.n, L, a.eps, a.delta, eps_n);
    j["bound_contraction"] = bound_contraction(a.depth, L, eps_n);
    j["bound_theorem_main"] = bound_theorem_main(a.depth, L, eps_n);
    j["bound_theorem_intro"] = bound_theorem_intro(a.depth, L, eps_n);
    j["bound_theorem_intro_chained"] = bound_theorem_intro_chained(a.depth, L, a.n);
    j["eps_bound_lipschitz"] = eps_bound_lipschitz(a.n, L);
    j["eps_bound_sigmoid"] = eps_bound_sigmoid(a.n);
    j["eps_bound_sigmoid_binom"] = eps_bound_sigmoid_binom(a.n);
    write_text(a.out, j.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shadow network toolkit: Hermite expansions, Monte Carlo lemma verification, "
                 "polynomial and SGD learners"};
    app.require_subcommand(1);

    ExpandArgs ea;
    VerifyArgs va;
    LearnArgs la;
    ExpandPolyArgs pa;
    BoundsArgs ba;
    ConfigBinder eb, vb, lb, pb, bb;

    {
        CLI::App* c = app.add_subcommand("expand", "Hermite expansion of an activation");
        eb.bind_value(c->add_option("--activation", ea.activation,
                                    "identity|erf_sigmoid|relu_like|relu"),
                      "activation", ea.activation);
        eb.bind_value(c->add_option("--n", ea.n, "maximum expansion degree"), "n", ea.n);
        eb.bind_value(c->add_option("--out", ea.out, "output file (default stdout)"), "out", ea.out);
        eb.bind_value(c->add_flag("--no-timestamp", ea.no_timestamp, "omit generated_at"),
                      "no-timestamp", ea.no_timestamp);
        c->add_option("--config", ea.config, "JSON config mirroring the flags");
    }
    {
        CLI::App* c = app.add_subcommand("verify", "Monte Carlo verification of the lemmas");
        vb.bind_value(c->add_option("--activation", va.activation,
                                    "identity|erf_sigmoid|relu_like|relu"),
                      "activation", va.activation);
        vb.bind_value(c->add_option("--n", va.n, "truncation degree"), "n", va.n);
        vb.bind_value(c->add_option("--depth", va.depth, "network depth (2 or 3)"), "depth", va.depth);
        vb.bind_value(c->add_option("--dims", va.dims, "widths d_0,...,d_i")->delimiter(','),
                      "dims", va.dims);
        vb.bind_value(c->add_option("--poly-dims", va.poly_dims,
                                    "widths for the coefficient-sum check")
                          ->delimiter(','),
                      "poly-dims", va.poly_dims);
        vb.bind_value(c->add_option("--seeds", va.seeds, "weight samples per report"), "seeds",
                      va.seeds);
        vb.bind_value(c->add_option("--samples", va.samples, "inputs per weight sample"), "samples",
                      va.samples);
        vb.bind_value(c->add_option("--seed", va.seed, "base seed"), "seed", va.seed);
        vb.bind_value(c->add_option("--eps", va.eps, "input perturbation size"), "eps", va.eps);
        vb.bind_value(c->add_option("--delta", va.delta, "sphere-drift tolerance"), "delta",
                      va.delta);
        vb.bind_value(c->add_option("--lemma", va.lemma,
                                    "all|vec_to_scalar|single_layer|adding_layer|projection|"
                                    "main_lemma|theorem|contraction|clip|coeff_sum"),
                      "lemma", va.lemma);
        vb.bind_value(c->add_option("--out", va.out, "output path prefix (.jsonl/.csv)"), "out",
                      va.out);
        vb.bind_value(c->add_flag("--quick", va.quick, "shrink Monte Carlo sizes 10x"), "quick",
                      va.quick);
        vb.bind_value(c->add_flag("--no-timestamp", va.no_timestamp, "omit timestamps"),
                      "no-timestamp", va.no_timestamp);
        c->add_option("--config", va.config, "JSON config mirroring the flags");
    }
    {
        CLI::App* c = app.add_subcommand("learn", "fit a student to a random teacher network");
        lb.bind_value(c->add_option("--learner", la.learner, "poly|sgd"), "learner", la.learner);
        lb.bind_value(c->add_option("--activation", la.activation, "teacher activation"),
                      "activation", la.activation);
        lb.bind_value(c->add_option("--dims", la.dims, "teacher widths")->delimiter(','), "dims",
                      la.dims);
        lb.bind_value(c->add_option("--degree", la.degree, "monomial feature degree"), "degree",
                      la.degree);
        lb.bind_value(c->add_option("--lambda", la.ridge_lambda, "ridge regularizer"), "lambda",
                      la.ridge_lambda);
        lb.bind_value(c->add_option("--train", la.train, "training samples"), "train", la.train);
        lb.bind_value(c->add_option("--test", la.test, "test samples"), "test", la.test);
        lb.bind_value(c->add_option("--seed", la.seed, "data/init seed"), "seed", la.seed);
        lb.bind_value(c->add_option("--teacher-seed", la.teacher_seed, "teacher weight seed"),
                      "teacher-seed", la.teacher_seed);
        lb.bind_value(c->add_option("--hidden", la.hidden, "sgd hidden width"), "hidden", la.hidden);
        lb.bind_value(c->add_option("--steps", la.steps, "sgd steps"), "steps", la.steps);
        lb.bind_value(c->add_option("--lr", la.lr, "sgd learning rate"), "lr", la.lr);
        lb.bind_value(c->add_option("--batch", la.batch, "sgd batch size"), "batch", la.batch);
        lb.bind_value(c->add_flag("--quick", la.quick, "shrink sample counts and steps 10x"),
                      "quick", la.quick);
        lb.bind_value(c->add_flag("--emit-model", la.emit_model, "include full model in output"),
                      "emit-model", la.emit_model);
        lb.bind_value(c->add_option("--out", la.out, "output file (default stdout)"), "out", la.out);
        lb.bind_value(c->add_flag("--no-timestamp", la.no_timestamp, "omit generated_at"),
                      "no-timestamp", la.no_timestamp);
        c->add_option("--config", la.config, "JSON config mirroring the flags");
    }
    {
        CLI::App* c = app.add_subcommand("expand-poly",
                                         "symbolic polynomial expansion of a shadow network");
        pb.bind_value(c->add_option("--activation", pa.activation, "activation"), "activation",
                      pa.activation);
        pb.bind_value(c->add_option("--n", pa.n, "truncation degree"), "n", pa.n);
        pb.bind_value(c->add_option("--dims", pa.dims, "network widths")->delimiter(','), "dims",
                      pa.dims);
        pb.bind_value(c->add_option("--seed", pa.seed, "weight seed"), "seed", pa.seed);
        pb.bind_value(c->add_option("--check-points", pa.check_points,
                                    "sample points for the agreement check"),
                      "check-points", pa.check_points);
        pb.bind_value(c->add_option("--out", pa.out, "output file (default stdout)"), "out",
                      pa.out);
        pb.bind_value(c->add_flag("--no-timestamp", pa.no_timestamp, "omit generated_at"),
                      "no-timestamp", pa.no_timestamp);
        c->add_option("--config", pa.config, "JSON config mirroring the flags");
    }
    {
        CLI::App* c = app.add_subcommand("bounds", "closed-form bound calculators");
        bb.bind_value(c->add_option("--activation", ba.activation, "activation"), "activation",
                      ba.activation);
        bb.bind_value(c->add_option("--n", ba.n, "truncation degree"), "n", ba.n);
        bb.bind_value(c->add_option("--depth", ba.depth, "network depth"), "depth", ba.depth);
        bb.bind_value(c->add_option("--eps", ba.eps, "input perturbation size"), "eps", ba.eps);
        bb.bind_value(c->add_option("--delta", ba.delta, "sphere-drift tolerance"), "delta",
                      ba.delta);
        bb.bind_value(c->add_option("--out", ba.out, "output file (default stdout)"), "out",
                      ba.out);
        bb.bind_value(c->add_flag("--no-timestamp", ba.no_timestamp, "omit generated_at"),
                      "no-timestamp", ba.no_timestamp);
        c->add_option("--config", ba.config, "JSON config mirroring the flags");
    }

    try {
        app.parse(argc, argv);
        if (!ea.config.empty()) eb.apply(load_config(ea.config));
        if (!va.config.empty()) vb.apply(load_config(va.config));
        if (!la.config.empty()) lb.apply(load_config(la.config));
        if (!pa.config.empty()) pb.apply(load_config(pa.config));
        if (!ba.config.empty()) bb.apply(load_config(ba.config));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand("expand")) return run_expand(ea);
        if (app.got_subcommand("verify")) return run_verify(va);
        if (app.got_subcommand("learn")) return run_learn(la);
        if (app.got_subcommand("expand-poly")) return run_expand_poly(pa);
        if (app.got_subcommand("bounds")) return run_bounds(ba);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const CombinatorialBlowup& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 3;
    } catch (const FeatureBlowup& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 3;
    } catch (const SgdDiverged& e) {
        std::cerr << "training failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
