#pragma once

// Random constant-depth networks with Xavier-initialized weights and the
// forward passes compared by the verification harness.
//
// Conventions: dims = [d_0, ..., d_i] lists the input, hidden, and output
// widths of a depth-i network. Layer j has matrix W^j of shape d_j x d_{j-1}
// with i.i.d. N(0, 1/d_{j-1}) entries; the pre-activations are
// Phi^j = W^j Psi^{j-1} with Psi^0 = x and Psi^j = sigma(Phi^j). Norms and
// inner products are dimension-normalized everywhere (see numeric.hpp), so
// (W^j x)_k ~ N(0, ||x||^2) for any fixed x.

#include <cstdint>
#include <string>
#include <vector>

#include "shadownet/activation.hpp"

#include "json.hpp"

namespace shadownet {

using Vec = std::vector<double>;

struct Architecture {
    std::vector<int> dims;  // [d_0, ..., d_i], all >= 1, depth i >= 1

    int depth() const { return static_cast<int>(dims.size()) - 1; }
    int input_dim() const { return dims.front(); }
    int output_dim() const { return dims.back(); }
    // d_bar = sum of all widths; the weight-clipping threshold.
    int width_sum() const;
    void validate() const;
};

struct NetworkWeights {
    Architecture arch;
    std::uint64_t seed = 0;
    // layers[j-1] is W^j, row-major d_j x d_{j-1}.
    std::vector<std::vector<double>> layers;

    double entry(int layer, int row, int col) const;
    // Largest (signed) entry over all layers.
    double max_entry() const;
};

// Sampling is bit-reproducible: layer j draws from its own derived stream,
// entries row-major, each N(0,1) scaled by 1/sqrt(d_{j-1}).
NetworkWeights sample_weights(const Architecture& arch, std::uint64_t seed);

// Weight export carries only (dims, seed); import re-samples.
nlohmann::ordered_json weights_to_json(const NetworkWeights& w);
NetworkWeights weights_from_json(const nlohmann::json& j);

// Uniform point on the normalized unit sphere (sum x_k^2 = d).
Vec sphere_point(int dim, std::uint64_t seed);
// Uniform sphere point drawn from an existing sampler.
Vec sphere_point(int dim, class GaussianSampler& g);
// Rescale to the normalized unit sphere; throws on the zero vector.
Vec to_sphere(Vec v);

struct ForwardPass {
    // phi[j-1] = Phi^j for j = 1..i; psi[j] = Psi^j with psi[0] = x.
    std::vector<Vec> phi;
    std::vector<Vec> psi;
    const Vec& output() const { return psi.back(); }
};

// Full pass with sigma applied at every layer.
ForwardPass forward(const NetworkWeights& w, const ActivationSpec& act, const Vec& x);

// Shadow pass: sigma_n at layers 1..i-1, final layer linear
// (Psi^{i,n} = Phi^{i,n}). phi.back() is the network output.
ForwardPass shadow_forward(const NetworkWeights& w, const HermiteExpansion& exp, int n, const Vec& x);

// Clipped shadow output: Phi^{i,n}(x) if every weight entry is <= d_bar,
// otherwise the zero vector.
Vec clipped_shadow_forward(const NetworkWeights& w, const HermiteExpansion& exp, int n, const Vec& x);

struct TruncatedPass {
    Vec psi;         // Psi^i(x, delta)
    Vec psi_shadow;  // Psi^{i,n}(x, delta)
    bool clipped = false;
};

// Delta-truncated passes: both runs apply their activation at every layer
// (including the last), and both outputs are zeroed when any intermediate
// layer j < i drifts off the sphere by more than delta in either run:
//   |1 - ||Psi^j(x)|| | > delta  or  |1 - ||Psi^{j,n}(x)|| | > delta.
// Depth-1 networks are never truncated.
TruncatedPass truncated_forward(const NetworkWeights& w, const HermiteExpansion& exp, int n,
                                const Vec& x, double delta);

}  // namespace shadownet
