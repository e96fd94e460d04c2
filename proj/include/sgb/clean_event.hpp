#pragma once

#include <cstdint>

#include "sgb/bandit_core.hpp"
#include "sgb/environment.hpp"

namespace sgb {

// Runs the exploration schedule `repetitions` times and returns the fraction
// of runs in which every (phase, candidate) empirical mean stayed strictly
// within params.rad of its exact expectation. Requires an environment with an
// exact expected-value oracle.
double estimate_clean_event_rate(Environment& env, const BanditParams& params,
                                 std::int64_t repetitions, Rng& rng);

} // namespace sgb
