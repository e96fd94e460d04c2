#include "sgb/submodularity.hpp"

#include <stdexcept>

namespace sgb {

namespace {

std::vector<int> mask_to_set(unsigned mask) {
    std::vector<int> out;
    for (int i = 0; mask != 0; ++i, mask >>= 1)
        if (mask & 1u) out.push_back(i);
    return out;
}

} // namespace

SubmodularityReport check_monotone_submodular(const SetOracle& oracle, int arm_count,
                                              double tolerance) {
    if (arm_count < 1 || arm_count > 16)
        throw std::invalid_argument("exhaustive check supports 1 to 16 arms");
    if (tolerance < 0.0) throw std::invalid_argument("tolerance must be nonnegative");

    SubmodularityReport report;
    report.tolerance = tolerance;

    const unsigned full = (1u << arm_count) - 1u;
    std::vector<double> value(static_cast<std::size_t>(full) + 1);
    for (unsigned mask = 0; mask <= full; ++mask) {
        const std::vector<int> set = mask_to_set(mask);
        value[mask] = oracle(set);
    }

    // Enumerate every pair A subset-of B once via the submask walk; stop at
    // the first violation of either property.
    for (unsigned b = 0; b <= full; ++b) {
        unsigned a = b;
        while (true) {
            if (value[a] > value[b] + tolerance) {
                report.monotone = false;
                report.witness_a = mask_to_set(a);
                report.witness_b = mask_to_set(b);
                report.violation = value[a] - value[b];
                return report;
            }
            for (int x = 0; x < arm_count; ++x) {
                const unsigned bit = 1u << x;
                if (b & bit) continue;
                const double gain_a = value[a | bit] - value[a];
                const double gain_b = value[b | bit] - value[b];
                if (gain_a < gain_b - tolerance) {
                    report.submodular = false;
                    report.witness_a = mask_to_set(a);
                    report.witness_b = mask_to_set(b);
                    report.witness_x = x;
                    report.violation = gain_b - gain_a;
                    return report;
                }
            }
            if (a == 0) break;
            a = (a - 1) & b;
        }
    }
    return report;
}

} // namespace sgb
