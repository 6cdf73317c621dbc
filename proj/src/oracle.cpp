#include "spanalloc/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace spanalloc {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class Enumerator {
public:
    explicit Enumerator(const ProblemInstance& inst)
        : inst_(inst), current_(inst.links(), inst.channels()), lo_(inst.links(), kNone) {}

    void run() { visit(0); }

    BruteForceResult take() {
        BruteForceResult out;
        out.assignments_visited = visited_;
        out.result.allocation = found_ ? best_ : AllocationMatrix(inst_.links(), inst_.channels());
        return out;
    }

private:
    void visit(std::size_t m) {
        if (m == inst_.channels()) {
            ++visited_;
            score();
            return;
        }
        visit(m + 1);  // channel left free
        for (std::size_t l = 0; l < inst_.links(); ++l) {
            const std::size_t saved = lo_[l];
            if (saved == kNone) lo_[l] = m;
            if (m - lo_[l] + 1 <= inst_.span_bound) {
                current_.set(l, m, true);
                visit(m + 1);
                current_.set(l, m, false);
            }
            lo_[l] = saved;
        }
    }

    void score() {
        const RateResult r = evaluate_rates(inst_, current_);
        const double total = r.total();
        if (!found_ || better_allocation(r.maxmin, total, current_, best_maxmin_, best_total_, best_)) {
            found_ = true;
            best_ = current_;
            best_maxmin_ = r.maxmin;
            best_total_ = total;
        }
    }

    const ProblemInstance& inst_;
    AllocationMatrix current_;
    std::vector<std::size_t> lo_;
    AllocationMatrix best_;
    double best_maxmin_ = 0.0;
    double best_total_ = 0.0;
    bool found_ = false;
    std::uint64_t visited_ = 0;
};

}  // namespace

BruteForceResult brute_force_counted(const ProblemInstance& inst, const BruteForceOptions& options) {
    inst.validate();
    const double space = std::pow(static_cast<double>(inst.links() + 1), static_cast<double>(inst.channels()));
    if (space > options.max_assignments)
        throw EnumerationTooLarge("exhaustive search over " + std::to_string(space) +
                                  " assignments exceeds the enumeration budget");

    const auto started = std::chrono::steady_clock::now();
    Enumerator e(inst);
    e.run();
    BruteForceResult out = e.take();
    out.result.rates = evaluate_rates(inst, out.result.allocation);
    out.result.maxmin = out.result.rates.maxmin;
    out.result.proven_optimal = true;
    out.result.nodes_explored = out.assignments_visited;
    out.result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

TradeoffCurve summarize_curve(const std::vector<std::size_t>& span_bounds,
                              const std::vector<std::vector<double>>& values) {
    TradeoffCurve curve;
    for (std::size_t i = 0; i < span_bounds.size(); ++i) {
        double sum = 0.0;
        for (const auto& row : values) sum += row.at(i);
        const double n = static_cast<double>(values.size());
        const double mean = values.empty() ? 0.0 : sum / n;
        double sq = 0.0;
        for (const auto& row : values) sq += (row[i] - mean) * (row[i] - mean);
        const double sd = values.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
        curve.push_back({span_bounds[i], mean, sd});
    }
    return curve;
}

TradeoffCurve tradeoff_curve(const InstanceSampler& sampler, const std::vector<std::size_t>& span_bounds,
                             std::size_t realizations, std::mt19937_64& rng, const BruteForceOptions& options) {
    std::vector<std::vector<double>> values;
    values.reserve(realizations);
    for (std::size_t r = 0; r < realizations; ++r) {
        ProblemInstance inst = sampler(rng);
        std::vector<double> row(span_bounds.size());
        for (std::size_t i = 0; i < span_bounds.size(); ++i) {
            const std::size_t b = span_bounds[i];
            if (b < 1 || b > inst.channels())
                throw InvalidInput("span bound " + std::to_string(b) + " outside [1, M]");
            inst.span_bound = b;
            row[i] = brute_force(inst, options).maxmin;
        }
        for (std::size_t i = 0; i < span_bounds.size(); ++i)
            for (std::size_t j = 0; j < span_bounds.size(); ++j)
                if (span_bounds[i] < span_bounds[j] && row[i] > row[j])
                    throw std::logic_error("max-min decreased when the span bound grew");
        values.push_back(std::move(row));
    }
    return summarize_curve(span_bounds, values);
}

}  // namespace spanalloc
