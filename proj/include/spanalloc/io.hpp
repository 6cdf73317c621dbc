#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "spanalloc/guardband.hpp"
#include "spanalloc/model.hpp"
#include "spanalloc/scenario.hpp"

namespace spanalloc::io {

// Scenario files are JSON objects whose keys mirror ScenarioConfig. Unknown
// keys anywhere in the document are rejected.
ScenarioConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// Loads a scenario file, or a built-in scenario by name ("paper-fig2").
ScenarioConfig load_config(const std::string& path_or_name);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);
std::string fnv1a_hex(const std::string& text);

/// Rates are printed in Mbps with six significant digits.
std::string format_mbps(double bits_per_s);

struct LabeledAllocation {
    std::vector<std::string> link_ids;
    AllocationMatrix allocation;
};

struct LabeledRates {
    std::vector<std::string> link_ids;
    Matrix<double> per_channel;  // bits/s
};

// link,ch1,...,chM rows of 0/1
std::string allocation_csv(const std::vector<std::string>& link_ids, const AllocationMatrix& a);
LabeledAllocation parse_allocation_csv(const std::string& text);

// link,ch1,...,chM rows of per-channel rates in Mbps
std::string channel_rates_csv(const std::vector<std::string>& link_ids, const Matrix<double>& rates);
LabeledRates parse_channel_rates_csv(const std::string& text);

// link,rate_mbps
std::string link_rates_csv(const std::vector<std::string>& link_ids, const std::vector<double>& rates);

// b,mean_maxmin_mbps,std_maxmin_mbps
std::string tradeoff_csv(const TradeoffCurve& curve);

// condition,<link ids...>,min_mbps with rows baseline, frozen, reallocated
std::string realloc_csv(const std::vector<std::string>& link_ids, const ExperimentResult& result);

// boundary_left,boundary_right,nulled_link,nulled_channel (one-based channels)
std::string guardband_decisions_csv(const std::vector<std::string>& link_ids, const GuardbandReport& report);

// link,rate_before_mbps,rate_after_mbps,delta_mbps
std::string guardband_rates_csv(const std::vector<std::string>& link_ids, const RateResult& before,
                                const GuardbandReport& report);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace spanalloc::io
