#include "spanalloc/guardband.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace spanalloc {

namespace {

void check_consistent(const AllocationMatrix& a, const RateResult& r) {
    if (!a.orthogonal()) throw InvalidInput("allocation assigns a channel to more than one link");
    if (r.per_channel.rows() != a.links() || r.per_channel.cols() != a.channels() || r.per_link.size() != a.links())
        throw InvalidInput("rate table dimensions do not match the allocation");
    for (std::size_t l = 0; l < a.links(); ++l) {
        double sum = 0.0;
        for (std::size_t m = 0; m < a.channels(); ++m) {
            const double v = r.per_channel(l, m);
            if (!std::isfinite(v) || v < 0.0) throw InvalidInput("per-channel rates must be finite and nonnegative");
            if (!a.assigned(l, m) && v != 0.0)
                throw InvalidInput("rate on channel " + std::to_string(m + 1) + " for a link that does not own it");
            sum += v;
        }
        if (std::abs(sum - r.per_link[l]) > 1e-9 * std::max(1.0, std::abs(sum)))
            throw InvalidInput("link total does not equal the sum of its channel rates");
    }
}

}  // namespace

GuardbandReport insert_guardbands(const AllocationMatrix& alloc, const RateResult& rates, GuardbandMode mode) {
    check_consistent(alloc, rates);
    GuardbandReport rep;
    rep.input = alloc;
    AllocationMatrix a = alloc;
    Matrix<double> per_channel = rates.per_channel;
    // Link totals are read as given and never refreshed during the scan.
    const std::vector<double>& total = rates.per_link;

    if (a.channels() > 0) {
        std::optional<std::size_t> prev_link = a.owner(0);
        std::size_t prev_channel = 0;
        for (std::size_t m = 1; m < a.channels(); ++m) {
            const std::optional<std::size_t> link = a.owner(m);
            if (link && prev_link && *link != *prev_link) {
                const double residual_new = total[*link] - per_channel(*link, m);
                const double residual_prev = total[*prev_link] - per_channel(*prev_link, prev_channel);
                const bool null_new =
                    mode == GuardbandMode::paper ? residual_new <= residual_prev : residual_new >= residual_prev;
                if (null_new) {
                    a.set(*link, m, false);
                    per_channel(*link, m) = 0.0;
                    rep.decisions.push_back({m - 1, *link, m});
                } else {
                    a.set(*prev_link, prev_channel, false);
                    per_channel(*prev_link, prev_channel) = 0.0;
                    rep.decisions.push_back({m - 1, *prev_link, prev_channel});
                }
            }
            prev_channel = m;
            prev_link = link;
        }
    }

    rep.rates_after.per_channel = per_channel;
    rep.rates_after.per_link.assign(a.links(), 0.0);
    rep.rates_after.maxmin = a.links() ? std::numeric_limits<double>::infinity() : 0.0;
    rep.rate_delta.assign(a.links(), 0.0);
    for (std::size_t l = 0; l < a.links(); ++l) {
        double sum = 0.0;
        double before = 0.0;
        for (std::size_t m = 0; m < a.channels(); ++m) {
            sum += per_channel(l, m);
            before += rates.per_channel(l, m);
        }
        rep.rates_after.per_link[l] = sum;
        rep.rates_after.maxmin = std::min(rep.rates_after.maxmin, sum);
        rep.rate_delta[l] = sum - before;
    }
    rep.output = std::move(a);
    return rep;
}

bool validate_guardbands(const AllocationMatrix& alloc) {
    for (std::size_t m = 0; m + 1 < alloc.channels(); ++m) {
        const auto left = alloc.owner(m);
        const auto right = alloc.owner(m + 1);
        if (left && right && *left != *right) return false;
    }
    return true;
}

}  // namespace spanalloc
