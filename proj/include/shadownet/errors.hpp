#pragma once

#include <stdexcept>
#include <string>

namespace shadownet {

// Truncation degree n has eps_sigma(n) > 1/2, so sigma_n is undefined.
class TruncationTooCoarse : public std::runtime_error {
public:
    explicit TruncationTooCoarse(const std::string& what) : std::runtime_error(what) {}
};

// Symbolic expansion would exceed the monomial budget.
class CombinatorialBlowup : public std::runtime_error {
public:
    explicit CombinatorialBlowup(const std::string& what) : std::runtime_error(what) {}
};

// Monomial feature count exceeds the regression budget.
class FeatureBlowup : public std::runtime_error {
public:
    explicit FeatureBlowup(const std::string& what) : std::runtime_error(what) {}
};

// Normal equations are rank-deficient and no ridge term was requested.
class SingularSystem : public std::runtime_error {
public:
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

// SGD training loss blew past the divergence threshold.
class SgdDiverged : public std::runtime_error {
public:
    explicit SgdDiverged(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace shadownet
