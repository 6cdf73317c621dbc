#include "spanalloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spanalloc {

std::optional<std::size_t> AllocationMatrix::owner(std::size_t channel) const {
    for (std::size_t l = 0; l < links(); ++l)
        if (assigned(l, channel)) return l;
    return std::nullopt;
}

bool AllocationMatrix::orthogonal() const {
    for (std::size_t m = 0; m < channels(); ++m) {
        int users = 0;
        for (std::size_t l = 0; l < links(); ++l) users += bits_(l, m);
        if (users > 1) return false;
    }
    return true;
}

bool AllocationMatrix::lexicographically_less(const AllocationMatrix& other) const {
    return std::lexicographical_compare(bits_.data().begin(), bits_.data().end(),
                                        other.bits_.data().begin(), other.bits_.data().end());
}

void ProblemInstance::validate() const {
    if (links() == 0 || channels() == 0) throw InvalidInput("instance needs at least one link and one channel");
    if (span_bound < 1 || span_bound > channels())
        throw InvalidInput("span bound must lie in [1, M], got " + std::to_string(span_bound));
    for (double c : capacity.data())
        if (!std::isfinite(c) || c < 0.0) throw InvalidInput("capacities must be finite and nonnegative");
}

double RateResult::total() const {
    double sum = 0.0;
    for (double r : per_link) sum += r;
    return sum;
}

double LinkSpec::length() const {
    if (distance_m) return *distance_m;
    if (tx && rx) return std::hypot(rx->first - tx->first, rx->second - tx->second);
    throw InvalidInput("link '" + id + "' has neither a distance nor tx/rx positions");
}

std::size_t min_useful_span_bound(std::size_t links, std::size_t channels) {
    if (links == 0) throw InvalidInput("link count must be positive");
    return (channels + links - 1) / links;
}

std::vector<std::string> ScenarioConfig::validate(bool strict_bounds) const {
    std::vector<std::string> warnings;
    if (links.empty()) throw InvalidInput("scenario has no links");
    if (num_channels < 1) throw InvalidInput("num_channels must be >= 1");
    if (!(channel_bandwidth_hz > 0.0) || !std::isfinite(channel_bandwidth_hz))
        throw InvalidInput("channel_bandwidth_hz must be positive");
    if (!(temperature_k > 0.0) || !std::isfinite(temperature_k)) throw InvalidInput("temperature_k must be positive");
    if (!(tx_power_per_channel_w > 0.0) || !std::isfinite(tx_power_per_channel_w))
        throw InvalidInput("tx_power_per_channel_w must be positive");
    if (!(center_frequency_hz > 0.0) || !std::isfinite(center_frequency_hz))
        throw InvalidInput("center_frequency_hz must be positive");
    if (std::isnan(rician_k_db)) throw InvalidInput("rician_k_db must not be NaN");
    if (subcarriers_per_channel < 1) throw InvalidInput("subcarriers_per_channel must be >= 1");
    if (span_bound < 1 || span_bound > num_channels)
        throw InvalidInput("span_bound must lie in [1, num_channels]");

    for (const auto& link : links) {
        const double d = link.length();
        if (!(d > 0.0) || !std::isfinite(d)) throw InvalidInput("link '" + link.id + "' must have positive length");
    }
    for (std::size_t i = 0; i < interferers.size(); ++i) {
        const auto& itf = interferers[i];
        if (itf.name.empty()) throw InvalidInput("interferer without a name");
        for (std::size_t j = 0; j < i; ++j)
            if (interferers[j].name == itf.name) throw InvalidInput("duplicate interferer '" + itf.name + "'");
        if (!std::isfinite(itf.db_above_noise)) throw InvalidInput("interferer level must be finite");
        for (std::size_t ch : itf.channels)
            if (ch < 1 || ch > num_channels)
                throw InvalidInput("interferer '" + itf.name + "' uses channel " + std::to_string(ch) +
                                   " outside 1.." + std::to_string(num_channels));
    }

    const std::size_t lower = min_useful_span_bound(links.size(), num_channels);
    if (span_bound < lower) {
        const std::string msg = "span_bound " + std::to_string(span_bound) + " is below ceil(M/N) = " +
                                std::to_string(lower);
        if (strict_bounds) throw InvalidInput(msg);
        warnings.push_back(msg);
    }
    return warnings;
}

const InterfererSpec& ScenarioConfig::interferer(const std::string& name) const {
    for (const auto& itf : interferers)
        if (itf.name == name) return itf;
    throw InvalidInput("unknown interferer '" + name + "'");
}

double path_loss_gain(double distance_m, double frequency_hz) {
    if (!(distance_m > 0.0) || !(frequency_hz > 0.0))
        throw InvalidInput("path loss needs positive distance and frequency");
    const double amplitude = kSpeedOfLight / (4.0 * std::numbers::pi * distance_m * frequency_hz);
    return amplitude * amplitude;
}

double sample_rician_power_gain(double k_db, std::mt19937_64& rng) {
    if (std::isnan(k_db)) throw InvalidInput("K-factor must not be NaN");
    if (k_db == std::numeric_limits<double>::infinity()) return 1.0;
    const double k = std::pow(10.0, k_db / 10.0);
    // LOS amplitude sqrt(K/(K+1)) plus complex Gaussian scatter of total power 1/(K+1).
    const double los = std::sqrt(k / (k + 1.0));
    const double sigma = std::sqrt(1.0 / (2.0 * (k + 1.0)));
    std::normal_distribution<double> normal(0.0, 1.0);
    const double x = los + sigma * normal(rng);
    const double y = sigma * normal(rng);
    return x * x + y * y;
}

double compute_sinr(double tx_power_w, double gain, double noise_power_w, double interference_w) {
    if (!(noise_power_w > 0.0)) throw InvalidInput("noise power must be positive");
    if (!(tx_power_w > 0.0) || !(gain > 0.0)) throw InvalidInput("power and gain must be positive");
    if (interference_w < 0.0) throw InvalidInput("interference must be nonnegative");
    return tx_power_w * gain / (noise_power_w + interference_w);
}

double compute_capacity(double bandwidth_hz, double sinr) {
    if (!(bandwidth_hz > 0.0)) throw InvalidInput("bandwidth must be positive");
    if (!(sinr >= 0.0)) throw InvalidInput("SINR must be nonnegative");
    return bandwidth_hz * std::log2(1.0 + sinr);
}

std::size_t spectral_span(std::span<const std::uint8_t> row) {
    std::size_t lo = row.size();
    std::size_t hi = 0;
    for (std::size_t m = 0; m < row.size(); ++m) {
        if (row[m] == 0) continue;
        lo = std::min(lo, m);
        hi = m;
    }
    return lo == row.size() ? 0 : hi - lo + 1;
}

RateResult evaluate_rates(const ProblemInstance& inst, const AllocationMatrix& alloc) {
    if (alloc.links() != inst.links() || alloc.channels() != inst.channels())
        throw InvalidInput("allocation dimensions do not match the instance");
    if (!alloc.orthogonal()) throw InvalidInput("allocation assigns a channel to more than one link");

    RateResult out;
    out.per_channel = Matrix<double>(inst.links(), inst.channels(), 0.0);
    out.per_link.assign(inst.links(), 0.0);
    out.maxmin = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < inst.links(); ++l) {
        double sum = 0.0;
        for (std::size_t m = 0; m < inst.channels(); ++m) {
            if (!alloc.assigned(l, m)) continue;
            out.per_channel(l, m) = inst.capacity(l, m);
            sum += inst.capacity(l, m);
        }
        out.per_link[l] = sum;
        out.maxmin = std::min(out.maxmin, sum);
    }
    return out;
}

}  // namespace spanalloc
