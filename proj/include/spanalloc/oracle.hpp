#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "spanalloc/solver.hpp"

namespace spanalloc {

/// Raised when an exhaustive enumeration would exceed its configured budget.
class EnumerationTooLarge : public std::length_error {
public:
    using std::length_error::length_error;
};

struct BruteForceOptions {
    // Upper limit on (N+1)^M, the unpruned assignment count.
    double max_assignments = 1e9;
};

struct BruteForceResult {
    SolveResult result;
    std::uint64_t assignments_visited = 0;  // complete assignments reached before the final span filter
};

/// Exhaustive optimum: enumerates every per-channel choice in (none, link 1..N)
/// order, channel by channel, cutting branches as soon as a link's span exceeds b.
BruteForceResult brute_force_counted(const ProblemInstance& inst, const BruteForceOptions& options = {});

inline SolveResult brute_force(const ProblemInstance& inst, const BruteForceOptions& options = {}) {
    return brute_force_counted(inst, options).result;
}

struct TradeoffPoint {
    std::size_t span_bound;
    double mean_maxmin;
    double std_maxmin;
};

using TradeoffCurve = std::vector<TradeoffPoint>;

/// Draws a fresh instance (its span bound is overwritten per point).
using InstanceSampler = std::function<ProblemInstance(std::mt19937_64&)>;

/// Mean and sample standard deviation of the exact max-min over `realizations`
/// draws for each bound in `span_bounds`. Throws std::logic_error if any single
/// realization is not nondecreasing in b.
TradeoffCurve tradeoff_curve(const InstanceSampler& sampler, const std::vector<std::size_t>& span_bounds,
                             std::size_t realizations, std::mt19937_64& rng, const BruteForceOptions& options = {});

/// Shared aggregation used by both the exhaustive and branch-and-bound sweeps.
/// `values[r][i]` is realization r at span_bounds[i].
TradeoffCurve summarize_curve(const std::vector<std::size_t>& span_bounds,
                              const std::vector<std::vector<double>>& values);

}  // namespace spanalloc
