#include "shadownet/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "shadownet/numeric.hpp"
#include "shadownet/rng.hpp"

namespace shadownet {

int Architecture::width_sum() const {
    int total = 0;
    for (int d : dims) total += d;
    return total;
}

void Architecture::validate() const {
    if (dims.size() < 2) {
        throw std::invalid_argument("Architecture: need at least [d_0, d_1]");
    }
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("Architecture: widths must be >= 1");
    }
}

double NetworkWeights::entry(int layer, int row, int col) const {
    const int d_out = arch.dims[static_cast<std::size_t>(layer) + 1];
    const int d_in = arch.dims[static_cast<std::size_t>(layer)];
    if (layer < 0 || layer >= arch.depth() || row < 0 || row >= d_out || col < 0 || col >= d_in) {
        throw std::out_of_range("NetworkWeights::entry: index out of range");
    }
    return layers[static_cast<std::size_t>(layer)][static_cast<std::size_t>(row) * d_in + col];
}

double NetworkWeights::max_entry() const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& layer : layers) {
        for (double v : layer) best = std::max(best, v);
    }
    return best;
}

NetworkWeights sample_weights(const Architecture& arch, std::uint64_t seed) {
    arch.validate();
    NetworkWeights w;
    w.arch = arch;
    w.seed = seed;
    w.layers.resize(static_cast<std::size_t>(arch.depth()));
    for (int j = 0; j < arch.depth(); ++j) {
        const int d_in = arch.dims[static_cast<std::size_t>(j)];
        const int d_out = arch.dims[static_cast<std::size_t>(j) + 1];
        GaussianSampler g(derive_seed(seed, static_cast<std::uint64_t>(j)));
        const double scale = 1.0 / std::sqrt(static_cast<double>(d_in));
        auto& layer = w.layers[static_cast<std::size_t>(j)];
        layer.resize(static_cast<std::size_t>(d_out) * static_cast<std::size_t>(d_in));
        for (auto& v : layer) v = scale * g.next();
    }
    return w;
}

nlohmann::ordered_json weights_to_json(const NetworkWeights& w) {
    nlohmann::ordered_json j;
    j["dims"] = w.arch.dims;
    j["seed"] = w.seed;
    return j;
}

NetworkWeights weights_from_json(const nlohmann::json& j) {
    if (!j.contains("dims") || !j.contains("seed")) {
        throw std::invalid_argument("weights_from_json: need keys dims, seed");
    }
    Architecture arch;
    arch.dims = j.at("dims").get<std::vector<int>>();
    const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
    return sample_weights(arch, seed);
}

Vec sphere_point(int dim, GaussianSampler& g) {
    if (dim < 1) throw std::invalid_argument("sphere_point: dim must be >= 1");
    Vec x(static_cast<std::size_t>(dim));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& v : x) {
            v = g.next();
            norm2 += v * v;
        }
    } while (norm2 == 0.0);
    const double scale = std::sqrt(static_cast<double>(dim) / norm2);
    for (auto& v : x) v *= scale;
    return x;
}

Vec sphere_point(int dim, std::uint64_t seed) {
    GaussianSampler g(seed);
    return sphere_point(dim, g);
}

Vec to_sphere(Vec v) {
    const double norm = normalized_norm(v);
    if (norm == 0.0 || !std::isfinite(norm)) {
        throw std::invalid_argument("to_sphere: cannot normalize the zero vector");
    }
    for (auto& x : v) x /= norm;
    return v;
}

namespace {

Vec matvec(const std::vector<double>& w, int d_out, int d_in, const Vec& x) {
    Vec y(static_cast<std::size_t>(d_out));
    for (int r = 0; r < d_out; ++r) {
        const double* row = w.data() + static_cast<std::size_t>(r) * d_in;
        double acc = 0.0;
        for (int c = 0; c < d_in; ++c) acc += row[c] * x[static_cast<std::size_t>(c)];
        y[static_cast<std::size_t>(r)] = acc;
    }
    return y;
}

void check_input(const NetworkWeights& w, const Vec& x) {
    if (static_cast<int>(x.size()) != w.arch.input_dim()) {
        throw std::invalid_argument("forward: input dimension mismatch");
    }
}

template <typename Act>
ForwardPass run_layers(const NetworkWeights& w, const Act& act_at, const Vec& x) {
    ForwardPass pass;
    pass.psi.reserve(w.layers.size() + 1);
    pass.phi.reserve(w.layers.size());
    pass.psi.push_back(x);
    for (int j = 0; j < w.arch.depth(); ++j) {
        const int d_in = w.arch.dims[static_cast<std::size_t>(j)];
        const int d_out = w.arch.dims[static_cast<std::size_t>(j) + 1];
        Vec phi = matvec(w.layers[static_cast<std::size_t>(j)], d_out, d_in, pass.psi.back());
        Vec psi = act_at(j + 1, phi);
        pass.phi.push_back(std::move(phi));
        pass.psi.push_back(std::move(psi));
    }
    return pass;
}

}  // namespace

ForwardPass forward(const NetworkWeights& w, const ActivationSpec& act, const Vec& x) {
    check_input(w, x);
    if (!act.eval) throw std::invalid_argument("forward: activation has no evaluator");
    return run_layers(w,
                      [&act](int, const Vec& phi) {
                          Vec psi(phi.size());
                          for (std::size_t k = 0; k < phi.size(); ++k) psi[k] = act.eval(phi[k]);
                          return psi;
                      },
                      x);
}

ForwardPass shadow_forward(const NetworkWeights& w, const HermiteExpansion& exp, int n, const Vec& x) {
    check_input(w, x);
    const TruncatedActivation sigma_n(exp, n);
    const int depth = w.arch.depth();
    return run_layers(w,
                      [&sigma_n, depth](int layer, const Vec& phi) {
                          if (layer == depth) return phi;  // final layer stays linear
                          Vec psi(phi.size());
                          for (std::size_t k = 0; k < phi.size(); ++k) psi[k] = sigma_n(phi[k]);
                          return psi;
                      },
                      x);
}

Vec clipped_shadow_forward(const NetworkWeights& w, const HermiteExpansion& exp, int n, const Vec& x) {
    check_input(w, x);
    const double threshold = static_cast<double>(w.arch.width_sum());
    if (w.max_entry() > threshold) {
        return Vec(static_cast<std::size_t>(w.arch.output_dim()), 0.0);
    }
    return shadow_forward(w, exp, n, x).phi.back();
}

TruncatedPass truncated_forward(const NetworkWeights& w, const HermiteExpansion& exp, int n,
                                const Vec& x, double delta) {
    check_input(w, x);
    if (!(delta >= 0.0)) throw std::invalid_argument("truncated_forward: delta must be >= 0");
    const ActivationSpec& act = exp.activation;
    if (!act.eval) throw std::invalid_argument("truncated_forward: activation has no evaluator");
    const TruncatedActivation sigma_n(exp, n);

    const int depth = w.arch.depth();
    Vec psi = x;
    Vec psi_n = x;
    bool clipped = false;
    for (int j = 0; j < depth; ++j) {
        const int d_in = w.arch.dims[static_cast<std::size_t>(j)];
        const int d_out = w.arch.dims[static_cast<std::size_t>(j) + 1];
        const auto& layer = w.layers[static_cast<std::size_t>(j)];
        Vec phi = matvec(layer, d_out, d_in, psi);
        Vec phi_n = matvec(layer, d_out, d_in, psi_n);
        psi.resize(phi.size());
        psi_n.resize(phi_n.size());
        for (std::size_t k = 0; k < phi.size(); ++k) {
            psi[k] = act.eval(phi[k]);
            psi_n[k] = sigma_n(phi_n[k]);
        }
        // Both runs must stay within delta of the sphere at every
        // intermediate layer; the final layer is exempt.
        if (j + 1 < depth) {
            if (std::abs(1.0 - normalized_norm(psi)) > delta ||
                std::abs(1.0 - normalized_norm(psi_n)) > delta) {
                clipped = true;
                break;
            }
        }
    }

    TruncatedPass result;
    result.clipped = clipped;
    if (clipped) {
        const std::size_t d_out = static_cast<std::size_t>(w.arch.output_dim());
        result.psi = Vec(d_out, 0.0);
        result.psi_shadow = Vec(d_out, 0.0);
    } else {
        result.psi = std::move(psi);
        result.psi_shadow = std::move(psi_n);
    }
    return result;
}

}  // namespace shadownet
