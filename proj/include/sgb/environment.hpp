#pragma once

#include <span>

#include "sgb/random.hpp"

namespace sgb {

struct ExpectedValue {
    double mean = 0.0;
    double std_error = 0.0; // 0 for exact oracles
};

// A stochastic set-function reward source. Actions are sets of arm ids in
// [0, arm_count), passed sorted ascending. sample() draws one noisy reward in
// [0, 1]; expected_value() reports E[f(S)] either exactly or by Monte Carlo.
class Environment {
public:
    virtual ~Environment() = default;

    virtual int arm_count() const = 0;
    virtual double sample(std::span<const int> action, Rng& rng) = 0;
    virtual ExpectedValue expected_value(std::span<const int> action) const = 0;
    // True when expected_value is computed in closed form (std_error == 0).
    virtual bool exact_oracle() const = 0;
};

} // namespace sgb
