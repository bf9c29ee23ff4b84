#pragma once

// Monte Carlo verification of the approximation lemmas. Every op runs
// cfg.num_weight_samples independent trials; a trial draws fresh weights and
// cfg.num_input_samples inputs from its own derived seed, so runs are
// reproducible and trials are statistically independent. Reported
// std_error is the standard error over trial means.
//
// Equality statements are encoded as measured = |lhs - rhs| with a rounding
// allowance as the bound and the combined standard error, so the BoundReport
// pass rule (measured <= bound + 3 se) doubles as a two-sided 3-sigma test.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "shadownet/activation.hpp"
#include "shadownet/bounds.hpp"
#include "shadownet/network.hpp"

namespace shadownet {

struct InputDistribution {
    enum class Kind { uniform_sphere, fixed_point, custom_list };
    Kind kind = Kind::uniform_sphere;
    std::vector<Vec> points;

    static InputDistribution uniform_sphere();
    static InputDistribution fixed_point(Vec x);
    static InputDistribution custom_list(std::vector<Vec> pts);
};

struct McConfig {
    int num_weight_samples = 500;
    int num_input_samples = 20;
    std::uint64_t base_seed = 1;
    InputDistribution inputs;

    void validate() const;  // weight samples >= 2, input samples >= 1
    // Same config with both sample counts divided by `factor` (floor 2 / 1).
    McConfig shrunk(int factor) const;
};

// Distribution-to-scalar reduction: for fixed x, y and W with i.i.d.
// N(0, 1/d) rows, E_W ||f(Wx) - g(Wy)||^2 equals E (f(X) - g(Y))^2 where
// (X, Y) is Gaussian with covariance [[||x||^2, <x,y>], [<x,y>, ||y||^2]].
// Both sides are estimated; measured = |lhs - rhs| against a rounding
// allowance of order 1e-13 (degenerate inputs leave no sampling noise for
// the 3-sigma band, so pure float error must not read as a failure).
BoundReport verify_vec_to_scalar(const std::function<double(double)>& f,
                                 const std::function<double(double)>& g,
                                 const Vec& x, const Vec& y, int d2, const McConfig& cfg);

// Single activated layer on the sphere: E||sigma(Wx) - sigma_n(Wx)|| against
// sqrt(2 eps_n). metadata carries the squared-norm estimate and its exact
// value 2 (1 - sqrt(1 - eps_n)).
BoundReport verify_single_layer(const HermiteExpansion& exp, int n, int d, int d2,
                                const McConfig& cfg);

// One layer on two sphere points at distance eps_perturb:
// E||sigma(Wx) - sigma_n(Wy)|| against sqrt(2 eps_n) + sqrt(2 L^2 eps / (1 - eps_n)).
// Requires d >= 2 and eps_perturb <= 2.
BoundReport verify_adding_layer(const HermiteExpansion& exp, int n, double eps_perturb,
                                int d, int d2, const McConfig& cfg);

// Distance-preserving projection onto the sphere: moves each point by at
// most twice its distance to the sphere while stretching the pair distance
// by at most 3x. Throws on zero vectors.
std::pair<Vec, Vec> project_pair(const Vec& x1, const Vec& x2);

// Off-sphere perturbation of one layer: x on the sphere, y = x + eps * w for
// a random unit direction w. First report: E||sigma(Wx) - sigma(Wy)|| against
// L eps. Second: E||sigma_n(Wx) - sigma_n(Wy)|| against lambda(n) eps.
// Requires eps_perturb <= 1/2.
std::pair<BoundReport, BoundReport> verify_projecting_dont_hurt(const HermiteExpansion& exp,
                                                                int n, double eps_perturb,
                                                                int d, int d2,
                                                                const McConfig& cfg);

// Both radial and angular perturbation at once: |1 - ||x|||, |1 - ||y||| <= delta
// and ||x - y|| = eps_perturb. E||sigma(Wx) - sigma_n(Wy)|| against
// 2 L delta + sqrt(2 eps_n) + sqrt(6 L^2 eps / (1 - eps_n)) + 2 lambda(n) delta.
BoundReport verify_main_lemma(const HermiteExpansion& exp, int n, double eps_perturb,
                              double delta, int d, int d2, const McConfig& cfg);

// Full network against its shadow: E||Phi^i(x) - Phi^{i,n}(x)|| against
// 13 (L+1)^2 eps_n^{1/2^{i-1}}; metadata carries the 14-constant variant.
BoundReport verify_theorem_main(const HermiteExpansion& exp, int n, const Architecture& arch,
                                const McConfig& cfg);

// Truncated-pass contraction: E||Psi^i(x,delta) - Psi^{i,n}(x,delta)||
// against 12 (L+1)^2 eps_n^{2^{-i}}. delta <= 0 selects
// 0.9 * delta_admissible(n, L, eps_n). metadata flags a delta too small for
// the widths to resolve (the truncation then clips almost every sample).
BoundReport verify_contraction(const HermiteExpansion& exp, int n, const Architecture& arch,
                               double delta, const McConfig& cfg);

// Frequency of the truncation event at the given delta; bound is the trivial
// 1.0, the value of the report is the measured frequency and its monotone
// decrease across width sweeps.
BoundReport estimate_clip_probability(const HermiteExpansion& exp, int n,
                                      const Architecture& arch, double delta,
                                      const McConfig& cfg);

// Serialization. JSONL: one object per report; a leading meta line carries
// the timestamp unless suppressed. CSV: fixed column set
// name,n,i,widths,measured,se,bound,passed,seed with a leading '#' comment
// line for the timestamp unless suppressed.
void write_reports_jsonl(std::ostream& os, std::span<const BoundReport> reports,
                         bool with_timestamp);
void write_reports_csv(std::ostream& os, std::span<const BoundReport> reports,
                       bool with_timestamp);

}  // namespace shadownet
