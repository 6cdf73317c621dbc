#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spanalloc {

/// Raised for any violated precondition on user-supplied data.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kSpeedOfLight = 3.0e8;      // m/s

/// Dense row-major matrix. Rows are links, columns are channels throughout.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    const std::vector<T>& data() const { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using GainMatrix = Matrix<double>;          // dimensionless power gain
using InterferenceMatrix = Matrix<double>;  // Watts

/// Binary link-by-channel assignment. Indices are zero-based.
class AllocationMatrix {
public:
    AllocationMatrix() = default;
    AllocationMatrix(std::size_t links, std::size_t channels) : bits_(links, channels, 0) {}

    std::size_t links() const { return bits_.rows(); }
    std::size_t channels() const { return bits_.cols(); }

    bool assigned(std::size_t link, std::size_t channel) const { return bits_(link, channel) != 0; }
    void set(std::size_t link, std::size_t channel, bool on) { bits_(link, channel) = on ? 1 : 0; }
    std::span<const std::uint8_t> row(std::size_t link) const { return bits_.row(link); }

    /// Link that owns `channel`, or nullopt if it is free. Assumes orthogonality.
    std::optional<std::size_t> owner(std::size_t channel) const;

    /// True iff every column has at most one assigned link.
    bool orthogonal() const;

    /// Row-major lexicographic comparison of the raw bits.
    bool lexicographically_less(const AllocationMatrix& other) const;

    friend bool operator==(const AllocationMatrix&, const AllocationMatrix&) = default;

private:
    Matrix<std::uint8_t> bits_;
};

/// Fully numeric optimization instance. Capacities are bits/s.
struct ProblemInstance {
    Matrix<double> capacity;  // links x channels
    std::size_t span_bound = 1;
    double bandwidth_hz = 0.0;

    std::size_t links() const { return capacity.rows(); }
    std::size_t channels() const { return capacity.cols(); }

    /// Throws InvalidInput unless capacities are finite and nonnegative and 1 <= b <= M.
    void validate() const;
};

struct RateResult {
    Matrix<double> per_channel;  // r[l][m], bits/s
    std::vector<double> per_link;
    double maxmin = 0.0;

    double total() const;
};

struct LinkSpec {
    std::string id;
    // Either a direct distance or tx/rx grid positions (meters).
    std::optional<double> distance_m;
    std::optional<std::pair<double, double>> tx;
    std::optional<std::pair<double, double>> rx;

    double length() const;
};

struct InterfererSpec {
    std::string name;
    std::vector<std::size_t> channels;  // one-based channel numbers
    double db_above_noise = 0.0;
};

struct ScenarioConfig {
    std::vector<LinkSpec> links;
    std::size_t num_channels = 0;
    double channel_bandwidth_hz = 0.0;
    std::size_t subcarriers_per_channel = 1;
    double temperature_k = 300.0;
    double tx_power_per_channel_w = 0.0;
    double center_frequency_hz = 1.5e9;
    double rician_k_db = 30.0;  // +inf disables fading
    std::vector<InterfererSpec> interferers;
    std::size_t span_bound = 1;
    std::uint64_t rng_seed = 0;

    double noise_power_w() const { return kBoltzmann * temperature_k * channel_bandwidth_hz; }

    /// Throws InvalidInput on a hard violation. Returns warnings for soft ones
    /// (span bound below ceil(M/N) when `strict_bounds` is off).
    std::vector<std::string> validate(bool strict_bounds = false) const;

    const InterfererSpec& interferer(const std::string& name) const;
};

/// ceil(M/N), the smallest span bound that still lets every link share the band.
std::size_t min_useful_span_bound(std::size_t links, std::size_t channels);

/// Free-space line-of-sight power gain (c/(4*pi*d*f))^2.
double path_loss_gain(double distance_m, double frequency_hz);

/// One draw of |X|^2 for a unit-mean-power Rician envelope with K = 10^(k_db/10).
/// k_db = +inf gives the deterministic LOS limit of 1.
double sample_rician_power_gain(double k_db, std::mt19937_64& rng);

double compute_sinr(double tx_power_w, double gain, double noise_power_w, double interference_w);

/// Shannon capacity W*log2(1+sinr), bits/s.
double compute_capacity(double bandwidth_hz, double sinr);

/// Width in channels of the occupied range of a row; 0 for an empty row.
std::size_t spectral_span(std::span<const std::uint8_t> row);

RateResult evaluate_rates(const ProblemInstance& inst, const AllocationMatrix& alloc);

}  // namespace spanalloc
