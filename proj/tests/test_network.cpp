#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "shadownet/activation.hpp"
#include "shadownet/network.hpp"
#include "shadownet/numeric.hpp"
#include "shadownet/rng.hpp"

using namespace shadownet;

TEST_CASE("architecture validation") {
    Architecture arch{{8, 16, 4}};
    CHECK_NOTHROW(arch.validate());
    CHECK(arch.depth() == 2);
    CHECK(arch.input_dim() == 8);
    CHECK(arch.output_dim() == 4);
    CHECK(arch.width_sum() == 28);

    const Architecture too_shallow{{5}};
    const Architecture zero_width{{0, 3}};
    const Architecture negative{{4, -1, 2}};
    CHECK_THROWS_AS(too_shallow.validate(), std::invalid_argument);
    CHECK_THROWS_AS(zero_width.validate(), std::invalid_argument);
    CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
}

TEST_CASE("weight sampling is deterministic per seed") {
    const Architecture arch{{6, 12, 3}};
    const NetworkWeights a = sample_weights(arch, 77);
    const NetworkWeights b = sample_weights(arch, 77);
    const NetworkWeights c = sample_weights(arch, 78);
    REQUIRE(a.layers.size() == 2);
    CHECK(a.layers[0].size() == 72);
    CHECK(a.layers[1].size() == 36);
    CHECK(a.layers == b.layers);
    CHECK(a.layers != c.layers);
    CHECK(a.layers[0][0] != a.layers[1][0]);
}

TEST_CASE("entries follow the 1/d_in scaling") {
    const Architecture arch{{256, 256}};
    const NetworkWeights w = sample_weights(arch, 5);
    RunningStats stats;
    for (double v : w.layers[0]) stats.add(v);
    CHECK(stats.count() == 65536);
    CHECK(std::abs(stats.mean()) <= 4.0 * stats.std_error());
    // Var should be 1/256; sampling noise is about var * sqrt(2/N).
    CHECK(stats.sample_variance() * 256.0 == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("matvec output variance equals the squared normalized input norm") {
    const ActivationSpec id = make_activation(ActivationKind::identity);
    const int d = 32, d2 = 256;
    Vec x(static_cast<std::size_t>(d), 0.0);
    GaussianSampler gen(11);
    for (double& v : x) v = 1.7 * gen.next();
    const double norm_sq = normalized_norm(x) * normalized_norm(x);

    RunningStats stats;
    for (std::uint64_t s = 0; s < 40; ++s) {
        const NetworkWeights w = sample_weights(Architecture{{d, d2}}, derive_seed(900, s));
        const ForwardPass pass = forward(w, id, x);
        for (double v : pass.phi[0]) stats.add(v);
    }
    CHECK(std::abs(stats.mean()) <= 4.0 * stats.std_error());
    CHECK(stats.sample_variance() == doctest::Approx(norm_sq).epsilon(0.05));
}

TEST_CASE("sphere points have unit normalized norm") {
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
        const Vec x = sphere_point(64, seed);
        CHECK(normalized_norm(x) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(sphere_point(16, 4) == sphere_point(16, 4));
    CHECK(sphere_point(16, 4) != sphere_point(16, 5));

    Vec zero(8, 0.0);
    CHECK_THROWS_AS(to_sphere(zero), std::invalid_argument);
    Vec v{3.0, 4.0};
    const Vec s = to_sphere(v);
    CHECK(normalized_norm(s) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s[0] / s[1] == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("forward pass applies the activation everywhere") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const Architecture arch{{4, 6, 2}};
    const NetworkWeights w = sample_weights(arch, 3);
    const Vec x = sphere_point(4, 21);
    const ForwardPass pass = forward(w, act, x);
    REQUIRE(pass.phi.size() == 2);
    REQUIRE(pass.psi.size() == 3);  // psi[0] is the input
    CHECK(pass.psi[0] == x);
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t k = 0; k < pass.phi[j].size(); ++k) {
            CHECK(pass.psi[j + 1][k] == doctest::Approx(act.eval(pass.phi[j][k])).epsilon(1e-15));
        }
    }
    // Recompute the first pre-activation by hand.
    for (int r = 0; r < 6; ++r) {
        double dot = 0.0;
        for (int c = 0; c < 4; ++c) {
            dot += w.layers[0][static_cast<std::size_t>(r * 4 + c)] * x[static_cast<std::size_t>(c)];
        }
        CHECK(pass.phi[0][static_cast<std::size_t>(r)] == doctest::Approx(dot).epsilon(1e-14));
    }
}

TEST_CASE("shadow pass ends with a linear layer") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const HermiteExpansion exp = expand(act, 6);
    const Architecture arch{{8, 16, 3}};
    const NetworkWeights w = sample_weights(arch, 13);
    const Vec x = sphere_point(8, 5);

    const ForwardPass shadow = shadow_forward(w, exp, 4, x);
    CHECK(shadow.psi.back() == shadow.phi.back());
    CHECK(shadow.output() == shadow.phi.back());

    // Hidden layers use sigma_n.
    const TruncatedActivation sig(exp, 4);
    for (std::size_t k = 0; k < shadow.phi[0].size(); ++k) {
        CHECK(shadow.psi[1][k] == doctest::Approx(sig(shadow.phi[0][k])).epsilon(1e-14));
    }
}

TEST_CASE("identity activation at full degree makes the shadow exact") {
    const ActivationSpec id = make_activation(ActivationKind::identity);
    const HermiteExpansion exp = expand(id, 1);
    const Architecture arch{{5, 7, 2}};
    const NetworkWeights w = sample_weights(arch, 2);
    const Vec x = sphere_point(5, 31);

    const ForwardPass full = forward(w, id, x);
    const ForwardPass shadow = shadow_forward(w, exp, 1, x);
    REQUIRE(full.output().size() == shadow.output().size());
    for (std::size_t k = 0; k < full.output().size(); ++k) {
        CHECK(shadow.output()[k] == doctest::Approx(full.output()[k]).epsilon(1e-12));
    }
}

TEST_CASE("clipped shadow zeroes out oversized weights") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const HermiteExpansion exp = expand(act, 4);
    const Architecture arch{{4, 8, 2}};
    NetworkWeights w = sample_weights(arch, 9);
    const Vec x = sphere_point(4, 17);

    const Vec normal = clipped_shadow_forward(w, exp, 2, x);
    CHECK(normal == shadow_forward(w, exp, 2, x).output());

    w.layers[0][3] = static_cast<double>(arch.width_sum()) + 1.0;
    CHECK(w.max_entry() > static_cast<double>(arch.width_sum()));
    const Vec clipped = clipped_shadow_forward(w, exp, 2, x);
    REQUIRE(clipped.size() == 2);
    CHECK(clipped[0] == 0.0);
    CHECK(clipped[1] == 0.0);

    // The clip threshold looks at signed entries, not magnitudes.
    NetworkWeights w2 = sample_weights(arch, 9);
    w2.layers[0][3] = -(static_cast<double>(arch.width_sum()) + 50.0);
    CHECK(clipped_shadow_forward(w2, exp, 2, x) == shadow_forward(w2, exp, 2, x).output());
}

TEST_CASE("norm truncation") {
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const HermiteExpansion exp = expand(act, 4);
    const Vec x4 = sphere_point(4, 8);

    // Depth 1: no intermediate layers, never truncated.
    {
        const Architecture arch{{4, 3}};
        const NetworkWeights w = sample_weights(arch, 40);
        const TruncatedPass pass = truncated_forward(w, exp, 2, x4, 0.0);
        CHECK(!pass.clipped);
        const ForwardPass full = forward(w, act, x4);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(pass.psi[k] == doctest::Approx(full.psi.back()[k]).epsilon(1e-13));
        }
    }

    // Depth 2 with delta = 0: the hidden norm is almost surely off by more
    // than zero, so the pass truncates to zero vectors.
    {
        const Architecture arch{{4, 16, 3}};
        const NetworkWeights w = sample_weights(arch, 41);
        const TruncatedPass tight = truncated_forward(w, exp, 2, x4, 0.0);
        CHECK(tight.clipped);
        CHECK(tight.psi == Vec(3, 0.0));
        CHECK(tight.psi_shadow == Vec(3, 0.0));

        const TruncatedPass loose = truncated_forward(w, exp, 2, x4, 10.0);
        CHECK(!loose.clipped);
        const ForwardPass full = forward(w, act, x4);
        const ForwardPass shadow = shadow_forward(w, exp, 2, x4);
        const TruncatedActivation sig(exp, 2);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(loose.psi[k] == doctest::Approx(full.psi.back()[k]).epsilon(1e-13));
            // Both truncated runs end activated, unlike the plain shadow pass.
            CHECK(loose.psi_shadow[k] ==
                  doctest::Approx(sig(shadow.phi.back()[k])).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(
        truncated_forward(sample_weights(Architecture{{4, 3}}, 1), exp, 2, x4, -0.1),
        std::invalid_argument);
}

TEST_CASE("expected squared norm is preserved through a layer") {
    // E_W ||W psi||^2 = ||psi||^2 under the normalized norm.
    const ActivationSpec act = make_activation(ActivationKind::erf_sigmoid);
    const int d = 16, d2 = 64;
    const Vec x = sphere_point(d, 3);

    RunningStats pre, post;
    for (std::uint64_t s = 0; s < 400; ++s) {
        const NetworkWeights w =
            sample_weights(Architecture{{d, d2, d2}}, derive_seed(7000, s));
        const ForwardPass pass = forward(w, act, x);
        const double psi1 = normalized_norm(pass.psi[1]);
        const double phi2 = normalized_norm(pass.phi[1]);
        pre.add(psi1 * psi1);
        post.add(phi2 * phi2);
    }
    const double se = std::sqrt(pre.std_error() * pre.std_error() +
                                post.std_error() * post.std_error());
    CHECK(std::abs(pre.mean() - post.mean()) <= 3.0 * se);
    // And the activation keeps it near 1 on the sphere by normalization.
    CHECK(pre.mean() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("contraction in expectation") {
    // E ||W v|| <= ||v||: Jensen on the exact second moment.
    const ActivationSpec id = make_activation(ActivationKind::identity);
    Vec v{0.3, -1.2, 0.8, 2.0, -0.5, 0.9};
    const double norm = normalized_norm(v);
    RunningStats stats;
    for (std::uint64_t s = 0; s < 600; ++s) {
        const NetworkWeights w = sample_weights(Architecture{{6, 24}}, derive_seed(800, s));
        const ForwardPass pass = forward(w, id, v);
        stats.add(normalized_norm(pass.phi[0]));
    }
    CHECK(stats.mean() <= norm + 3.0 * stats.std_error());
}

TEST_CASE("weights serialize by seed") {
    const Architecture arch{{6, 12, 3}};
    const NetworkWeights w = sample_weights(arch, 123);
    const nlohmann::ordered_json j = weights_to_json(w);
    CHECK(j.at("dims") == std::vector<int>{6, 12, 3});
    CHECK(j.at("seed") == 123);

    const NetworkWeights back = weights_from_json(j);
    CHECK(back.layers == w.layers);

    nlohmann::ordered_json missing;
    missing["dims"] = {4, 2};
    CHECK_THROWS(weights_from_json(missing));
}
