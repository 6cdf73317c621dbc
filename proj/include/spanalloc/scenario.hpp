#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spanalloc/model.hpp"
#include "spanalloc/oracle.hpp"
#include "spanalloc/solver.hpp"

namespace spanalloc {

using InterfererSet = std::vector<std::string>;

/// Four links on a 1 m grid sharing twelve 100 kHz channels, with
/// interferers A, B and C on channels 1-3, 5-7 and 9-11 at 33 dB above noise.
ScenarioConfig paper_fig2_scenario();

/// Independent stream for realization `index` of a run seeded with `seed`.
std::mt19937_64 realization_rng(std::uint64_t seed, std::uint64_t index);

/// Path loss times an i.i.d. Rician fade per (link, channel), drawn link-major.
GainMatrix realize_gains(const ScenarioConfig& cfg, std::mt19937_64& rng);

/// Received interference per (link, channel): each active interferer adds
/// 10^(dB/10) * N0 * W on its channels at every receiver.
InterferenceMatrix interference_matrix(const ScenarioConfig& cfg, const InterfererSet& active);

ProblemInstance build_instance(const ScenarioConfig& cfg, const GainMatrix& gains, const InterferenceMatrix& u,
                               std::size_t span_bound);

ProblemInstance realize_instance(const ScenarioConfig& cfg, const InterfererSet& active, std::mt19937_64& rng);

struct ReallocationOutcome {
    InterfererSet interferers;
    ProblemInstance instance;
    RateResult frozen;  // baseline allocation evaluated under the new interference
    SolveResult reallocated;
};

struct ExperimentResult {
    GainMatrix gains;
    InterfererSet baseline_interferers;
    ProblemInstance baseline_instance;
    SolveResult baseline;
    std::vector<ReallocationOutcome> conditions;
};

/// Solves under `baseline`, then for each condition keeps that allocation fixed
/// under the new interference and also re-solves. One channel realization is
/// shared by every condition.
ExperimentResult reallocation_experiment(const ScenarioConfig& cfg, const InterfererSet& baseline,
                                         const std::vector<InterfererSet>& conditions, std::size_t span_bound,
                                         std::mt19937_64& rng, const SolveOptions& options = {});

inline ExperimentResult reallocation_experiment(const ScenarioConfig& cfg, const InterfererSet& baseline,
                                                const InterfererSet& changed, std::size_t span_bound,
                                                std::mt19937_64& rng, const SolveOptions& options = {}) {
    return reallocation_experiment(cfg, baseline, std::vector<InterfererSet>{changed}, span_bound, rng, options);
}

struct SweepOptions {
    bool strict_bounds = false;
    unsigned threads = 1;
    SolveOptions solve;
};

struct SweepResult {
    TradeoffCurve curve;
    std::vector<std::vector<double>> per_realization;  // [realization][b index], bits/s
    std::size_t unproven = 0;                          // solves that hit the node budget
};

/// Exact max-min for every b in `span_bounds` over `realizations` independent
/// fading draws seeded from cfg.rng_seed. Throws std::logic_error if a single
/// realization is not nondecreasing in b.
SweepResult sweep(const ScenarioConfig& cfg, const InterfererSet& active, const std::vector<std::size_t>& span_bounds,
                  std::size_t realizations, const SweepOptions& options = {});

}  // namespace spanalloc
