#pragma once

// Small numeric helpers shared across the library: compensated summation,
// the normalized inner product / norm used throughout, and streaming
// mean / standard-error accumulation.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace shadownet {

// Neumaier variant of Kahan summation.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Dimension-normalized inner product: <x, y> = sum_k x_k y_k / d.
inline double normalized_inner(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("normalized_inner: size mismatch");
    if (x.empty()) throw std::invalid_argument("normalized_inner: empty vector");
    CompensatedSum s;
    for (std::size_t k = 0; k < x.size(); ++k) s.add(x[k] * y[k]);
    return s.value() / static_cast<double>(x.size());
}

// Dimension-normalized Euclidean norm: ||x|| = sqrt(sum_k x_k^2 / d).
// The unit sphere in this norm has sum_k x_k^2 = d.
inline double normalized_norm(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("normalized_norm: empty vector");
    CompensatedSum s;
    for (double v : x) s.add(v * v);
    return std::sqrt(s.value() / static_cast<double>(x.size()));
}

inline double normalized_dist(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("normalized_dist: size mismatch");
    CompensatedSum s;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        s.add(d * d);
    }
    return std::sqrt(s.value() / static_cast<double>(x.size()));
}

// Welford streaming mean / variance; deterministic for a fixed insertion order.
class RunningStats {
public:
    void add(double v) {
        ++n_;
        const double delta = v - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (v - mean_);
    }
    long count() const { return n_; }
    double mean() const { return mean_; }
    double sample_variance() const {
        if (n_ < 2) return 0.0;
        return m2_ / static_cast<double>(n_ - 1);
    }
    // Standard error of the mean.
    double std_error() const {
        if (n_ < 2) return 0.0;
        return std::sqrt(sample_variance() / static_cast<double>(n_));
    }

private:
    long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace shadownet
