#include "spanalloc/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace spanalloc {

ScenarioConfig paper_fig2_scenario() {
    ScenarioConfig cfg;
    const double d = 1.0;
    cfg.links = {
        {"L1", d, std::nullopt, std::nullopt},
        {"L2", std::sqrt(5.0) * d, std::nullopt, std::nullopt},
        {"L3", std::sqrt(2.0) * d, std::nullopt, std::nullopt},
        {"L4", 2.0 * d, std::nullopt, std::nullopt},
    };
    cfg.num_channels = 12;
    cfg.channel_bandwidth_hz = 100e3;
    cfg.subcarriers_per_channel = 4;
    cfg.temperature_k = 300.0;
    cfg.tx_power_per_channel_w = 0.1e-3;
    cfg.center_frequency_hz = 1.5e9;
    cfg.rician_k_db = 30.0;
    cfg.interferers = {
        {"A", {1, 2, 3}, 33.0},
        {"B", {5, 6, 7}, 33.0},
        {"C", {9, 10, 11}, 33.0},
    };
    cfg.span_bound = 4;
    cfg.rng_seed = 1;
    return cfg;
}

std::mt19937_64 realization_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

GainMatrix realize_gains(const ScenarioConfig& cfg, std::mt19937_64& rng) {
    GainMatrix g(cfg.links.size(), cfg.num_channels);
    for (std::size_t l = 0; l < cfg.links.size(); ++l) {
        const double path = path_loss_gain(cfg.links[l].length(), cfg.center_frequency_hz);
        for (std::size_t m = 0; m < cfg.num_channels; ++m) g(l, m) = path * sample_rician_power_gain(cfg.rician_k_db, rng);
    }
    return g;
}

InterferenceMatrix interference_matrix(const ScenarioConfig& cfg, const InterfererSet& active) {
    InterferenceMatrix u(cfg.links.size(), cfg.num_channels, 0.0);
    const double noise = cfg.noise_power_w();
    for (const auto& name : active) {
        const InterfererSpec& itf = cfg.interferer(name);
        const double power = std::pow(10.0, itf.db_above_noise / 10.0) * noise;
        for (std::size_t ch : itf.channels)
            for (std::size_t l = 0; l < cfg.links.size(); ++l) u(l, ch - 1) += power;
    }
    return u;
}

ProblemInstance build_instance(const ScenarioConfig& cfg, const GainMatrix& gains, const InterferenceMatrix& u,
                               std::size_t span_bound) {
    ProblemInstance inst;
    inst.capacity = Matrix<double>(gains.rows(), gains.cols());
    inst.span_bound = span_bound;
    inst.bandwidth_hz = cfg.channel_bandwidth_hz;
    const double noise = cfg.noise_power_w();
    for (std::size_t l = 0; l < gains.rows(); ++l)
        for (std::size_t m = 0; m < gains.cols(); ++m)
            inst.capacity(l, m) = compute_capacity(
                cfg.channel_bandwidth_hz, compute_sinr(cfg.tx_power_per_channel_w, gains(l, m), noise, u(l, m)));
    inst.validate();
    return inst;
}

ProblemInstance realize_instance(const ScenarioConfig& cfg, const InterfererSet& active, std::mt19937_64& rng) {
    cfg.validate();
    const GainMatrix g = realize_gains(cfg, rng);
    return build_instance(cfg, g, interference_matrix(cfg, active), cfg.span_bound);
}

ExperimentResult reallocation_experiment(const ScenarioConfig& cfg, const InterfererSet& baseline,
                                         const std::vector<InterfererSet>& conditions, std::size_t span_bound,
                                         std::mt19937_64& rng, const SolveOptions& options) {
    cfg.validate();
    ExperimentResult out;
    out.gains = realize_gains(cfg, rng);
    out.baseline_interferers = baseline;
    out.baseline_instance = build_instance(cfg, out.gains, interference_matrix(cfg, baseline), span_bound);
    out.baseline = solve(out.baseline_instance, options);
    for (const auto& set : conditions) {
        ReallocationOutcome c;
        c.interferers = set;
        c.instance = build_instance(cfg, out.gains, interference_matrix(cfg, set), span_bound);
        c.frozen = evaluate_rates(c.instance, out.baseline.allocation);
        c.reallocated = solve(c.instance, options);
        out.conditions.push_back(std::move(c));
    }
    return out;
}

SweepResult sweep(const ScenarioConfig& cfg, const InterfererSet& active, const std::vector<std::size_t>& span_bounds,
                  std::size_t realizations, const SweepOptions& options) {
    cfg.validate();
    const std::size_t lower = options.strict_bounds ? min_useful_span_bound(cfg.links.size(), cfg.num_channels) : 1;
    for (std::size_t b : span_bounds)
        if (b < lower || b > cfg.num_channels)
            throw InvalidInput("span bound " + std::to_string(b) + " outside [" + std::to_string(lower) + ", " +
                               std::to_string(cfg.num_channels) + "]");
    const InterferenceMatrix u = interference_matrix(cfg, active);

    SweepResult out;
    out.per_realization.assign(realizations, std::vector<double>(span_bounds.size(), 0.0));
    std::vector<std::size_t> unproven(realizations, 0);

    auto run_one = [&](std::size_t r) {
        std::mt19937_64 rng = realization_rng(cfg.rng_seed, r);
        const GainMatrix g = realize_gains(cfg, rng);
        auto& row = out.per_realization[r];
        for (std::size_t i = 0; i < span_bounds.size(); ++i) {
            const SolveResult res = solve(build_instance(cfg, g, u, span_bounds[i]), options.solve);
            row[i] = res.maxmin;
            if (!res.proven_optimal) ++unproven[r];
        }
        for (std::size_t i = 0; i < span_bounds.size(); ++i)
            for (std::size_t j = 0; j < span_bounds.size(); ++j)
                if (span_bounds[i] < span_bounds[j] && row[i] > row[j] && unproven[r] == 0)
                    throw std::logic_error("max-min decreased when the span bound grew (realization " +
                                           std::to_string(r) + ")");
    };

    if (options.threads <= 1) {
        for (std::size_t r = 0; r < realizations; ++r) run_one(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < options.threads; ++t)
                pool.emplace_back([&] {
                    for (std::size_t r = next.fetch_add(1); r < realizations; r = next.fetch_add(1)) {
                        try {
                            run_one(r);
                        } catch (...) {
                            std::lock_guard lock(failure_mutex);
                            if (!failure) failure = std::current_exception();
                        }
                    }
                });
        }
        if (failure) std::rethrow_exception(failure);
    }

    for (std::size_t n : unproven) out.unproven += n;
    out.curve = summarize_curve(span_bounds, out.per_realization);
    return out;
}

}  // namespace spanalloc
