#include "spanalloc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace spanalloc::io {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw InvalidInput(where + " must be a JSON object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw InvalidInput("unknown key '" + key + "' in " + where);
}

double number(const json& obj, const char* key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw InvalidInput(std::string(key) + " in " + where + " must be a number");
    return v.get<double>();
}

std::size_t count(const json& obj, const char* key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw InvalidInput(std::string(key) + " in " + where + " must be a nonnegative integer");
    return v.get<std::size_t>();
}

std::pair<double, double> position(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw InvalidInput(where + " must be a [x, y] pair of numbers");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::vector<std::vector<std::string>> parse_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split(line, ','));
    }
    return rows;
}

// Validates a link,ch1..chM header and returns M.
std::size_t check_matrix_header(const std::vector<std::vector<std::string>>& rows) {
    if (rows.size() < 2) throw InvalidInput("matrix CSV needs a header and at least one link row");
    const auto& head = rows.front();
    if (head.size() < 2 || head[0] != "link") throw InvalidInput("matrix CSV header must start with 'link'");
    for (std::size_t m = 1; m < head.size(); ++m)
        if (head[m] != "ch" + std::to_string(m)) throw InvalidInput("unexpected column '" + head[m] + "'");
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].size() != head.size())
            throw InvalidInput("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) + " cells");
    return head.size() - 1;
}

double parse_double(const std::string& cell) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &used);
    } catch (const std::exception&) {
        throw InvalidInput("not a number: '" + cell + "'");
    }
    if (used != cell.size()) throw InvalidInput("not a number: '" + cell + "'");
    return v;
}

std::string fmt_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string matrix_header(std::size_t channels) {
    std::string s = "link";
    for (std::size_t m = 1; m <= channels; ++m) s += ",ch" + std::to_string(m);
    return s + "\n";
}

}  // namespace

ScenarioConfig config_from_json(const json& doc) {
    try {
        reject_unknown(doc,
                       {"links", "num_channels", "channel_bandwidth_hz", "subcarriers_per_channel", "temperature_k",
                        "tx_power_per_channel_w", "center_frequency_hz", "rician_k_db", "interferers", "span_bound",
                        "rng_seed"},
                       "scenario");
        ScenarioConfig cfg;
        const json& links = doc.at("links");
        if (!links.is_array()) throw InvalidInput("links must be an array");
        for (std::size_t i = 0; i < links.size(); ++i) {
            const json& lj = links[i];
            const std::string where = "links[" + std::to_string(i) + "]";
            reject_unknown(lj, {"id", "distance_m", "tx", "rx"}, where);
            LinkSpec link;
            link.id = lj.contains("id") ? lj.at("id").get<std::string>() : "L" + std::to_string(i + 1);
            if (lj.contains("distance_m")) link.distance_m = number(lj, "distance_m", where);
            if (lj.contains("tx") != lj.contains("rx")) throw InvalidInput(where + " needs both tx and rx");
            if (lj.contains("tx")) {
                if (link.distance_m) throw InvalidInput(where + " gives both a distance and positions");
                link.tx = position(lj.at("tx"), where + ".tx");
                link.rx = position(lj.at("rx"), where + ".rx");
            }
            if (!link.distance_m && !link.tx) throw InvalidInput(where + " needs distance_m or tx/rx");
            cfg.links.push_back(std::move(link));
        }
        cfg.num_channels = count(doc, "num_channels", "scenario");
        cfg.channel_bandwidth_hz = number(doc, "channel_bandwidth_hz", "scenario");
        cfg.tx_power_per_channel_w = number(doc, "tx_power_per_channel_w", "scenario");
        cfg.span_bound = count(doc, "span_bound", "scenario");
        if (doc.contains("subcarriers_per_channel"))
            cfg.subcarriers_per_channel = count(doc, "subcarriers_per_channel", "scenario");
        if (doc.contains("temperature_k")) cfg.temperature_k = number(doc, "temperature_k", "scenario");
        if (doc.contains("center_frequency_hz")) cfg.center_frequency_hz = number(doc, "center_frequency_hz", "scenario");
        if (doc.contains("rician_k_db")) {
            const json& k = doc.at("rician_k_db");
            if (k.is_string() && k.get<std::string>() == "inf")
                cfg.rician_k_db = std::numeric_limits<double>::infinity();
            else
                cfg.rician_k_db = number(doc, "rician_k_db", "scenario");
        }
        if (doc.contains("rng_seed")) {
            const json& s = doc.at("rng_seed");
            if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
                throw InvalidInput("rng_seed must be a nonnegative integer");
            cfg.rng_seed = s.get<std::uint64_t>();
        }
        if (doc.contains("interferers")) {
            const json& arr = doc.at("interferers");
            if (!arr.is_array()) throw InvalidInput("interferers must be an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string where = "interferers[" + std::to_string(i) + "]";
                reject_unknown(arr[i], {"name", "channels", "db_above_noise"}, where);
                InterfererSpec itf;
                itf.name = arr[i].at("name").get<std::string>();
                const json& chans = arr[i].at("channels");
                if (!chans.is_array()) throw InvalidInput(where + ".channels must be an array");
                for (const auto& c : chans) {
                    if (!c.is_number_integer() || c.get<long long>() < 1)
                        throw InvalidInput(where + ".channels must hold positive integers");
                    itf.channels.push_back(c.get<std::size_t>());
                }
                itf.db_above_noise = number(arr[i], "db_above_noise", where);
                cfg.interferers.push_back(std::move(itf));
            }
        }
        return cfg;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed scenario: ") + e.what());
    }
}

json config_to_json(const ScenarioConfig& cfg) {
    json doc;
    json links = json::array();
    for (const auto& l : cfg.links) {
        json lj{{"id", l.id}};
        if (l.distance_m) lj["distance_m"] = *l.distance_m;
        if (l.tx) {
            lj["tx"] = {l.tx->first, l.tx->second};
            lj["rx"] = {l.rx->first, l.rx->second};
        }
        links.push_back(lj);
    }
    doc["links"] = links;
    doc["num_channels"] = cfg.num_channels;
    doc["channel_bandwidth_hz"] = cfg.channel_bandwidth_hz;
    doc["subcarriers_per_channel"] = cfg.subcarriers_per_channel;
    doc["temperature_k"] = cfg.temperature_k;
    doc["tx_power_per_channel_w"] = cfg.tx_power_per_channel_w;
    doc["center_frequency_hz"] = cfg.center_frequency_hz;
    if (std::isinf(cfg.rician_k_db) && cfg.rician_k_db > 0)
        doc["rician_k_db"] = "inf";
    else
        doc["rician_k_db"] = cfg.rician_k_db;
    json itfs = json::array();
    for (const auto& i : cfg.interferers)
        itfs.push_back({{"name", i.name}, {"channels", i.channels}, {"db_above_noise", i.db_above_noise}});
    doc["interferers"] = itfs;
    doc["span_bound"] = cfg.span_bound;
    doc["rng_seed"] = cfg.rng_seed;
    return doc;
}

ScenarioConfig load_config(const std::string& path_or_name) {
    if (path_or_name == "paper-fig2") return paper_fig2_scenario();
    const std::string text = read_file(path_or_name);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(path_or_name + ": " + e.what());
    }
    return config_from_json(doc);
}

std::string config_hash(const ScenarioConfig& cfg) { return fnv1a_hex(config_to_json(cfg).dump()); }

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_mbps(double bits_per_s) { return fmt_g6(bits_per_s / 1e6); }

std::string allocation_csv(const std::vector<std::string>& link_ids, const AllocationMatrix& a) {
    std::string s = matrix_header(a.channels());
    for (std::size_t l = 0; l < a.links(); ++l) {
        s += link_ids.at(l);
        for (std::size_t m = 0; m < a.channels(); ++m) s += a.assigned(l, m) ? ",1" : ",0";
        s += "\n";
    }
    return s;
}

LabeledAllocation parse_allocation_csv(const std::string& text) {
    const auto rows = parse_rows(text);
    const std::size_t channels = check_matrix_header(rows);
    LabeledAllocation out;
    out.allocation = AllocationMatrix(rows.size() - 1, channels);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        out.link_ids.push_back(rows[r][0]);
        for (std::size_t m = 0; m < channels; ++m) {
            const std::string& cell = rows[r][m + 1];
            if (cell != "0" && cell != "1") throw InvalidInput("allocation entries must be 0 or 1, got '" + cell + "'");
            out.allocation.set(r - 1, m, cell == "1");
        }
    }
    if (!out.allocation.orthogonal()) throw InvalidInput("allocation assigns a channel to more than one link");
    return out;
}

std::string channel_rates_csv(const std::vector<std::string>& link_ids, const Matrix<double>& rates) {
    std::string s = matrix_header(rates.cols());
    for (std::size_t l = 0; l < rates.rows(); ++l) {
        s += link_ids.at(l);
        for (std::size_t m = 0; m < rates.cols(); ++m) s += "," + format_mbps(rates(l, m));
        s += "\n";
    }
    return s;
}

LabeledRates parse_channel_rates_csv(const std::string& text) {
    const auto rows = parse_rows(text);
    const std::size_t channels = check_matrix_header(rows);
    LabeledRates out;
    out.per_channel = Matrix<double>(rows.size() - 1, channels);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        out.link_ids.push_back(rows[r][0]);
        for (std::size_t m = 0; m < channels; ++m) {
            const double v = parse_double(rows[r][m + 1]);
            if (!std::isfinite(v) || v < 0.0) throw InvalidInput("rates must be finite and nonnegative");
            out.per_channel(r - 1, m) = v * 1e6;
        }
    }
    return out;
}

std::string link_rates_csv(const std::vector<std::string>& link_ids, const std::vector<double>& rates) {
    std::string s = "link,rate_mbps\n";
    for (std::size_t l = 0; l < rates.size(); ++l) s += link_ids.at(l) + "," + format_mbps(rates[l]) + "\n";
    return s;
}

std::string tradeoff_csv(const TradeoffCurve& curve) {
    std::string s = "b,mean_maxmin_mbps,std_maxmin_mbps\n";
    for (const auto& p : curve)
        s += std::to_string(p.span_bound) + "," + format_mbps(p.mean_maxmin) + "," + format_mbps(p.std_maxmin) + "\n";
    return s;
}

std::string realloc_csv(const std::vector<std::string>& link_ids, const ExperimentResult& result) {
    std::string s = "condition";
    for (const auto& id : link_ids) s += "," + id;
    s += ",min_mbps\n";
    auto row = [&](const std::string& label, const RateResult& r) {
        s += label;
        for (double v : r.per_link) s += "," + format_mbps(v);
        s += "," + format_mbps(r.maxmin) + "\n";
    };
    row("baseline", result.baseline.rates);
    for (const auto& c : result.conditions) {
        row("frozen", c.frozen);
        row("reallocated", c.reallocated.rates);
    }
    return s;
}

std::string guardband_decisions_csv(const std::vector<std::string>& link_ids, const GuardbandReport& report) {
    std::string s = "boundary_left,boundary_right,nulled_link,nulled_channel\n";
    for (const auto& d : report.decisions)
        s += std::to_string(d.left + 1) + "," + std::to_string(d.left + 2) + "," + link_ids.at(d.nulled_link) + "," +
             std::to_string(d.nulled_channel + 1) + "\n";
    return s;
}

std::string guardband_rates_csv(const std::vector<std::string>& link_ids, const RateResult& before,
                                const GuardbandReport& report) {
    std::string s = "link,rate_before_mbps,rate_after_mbps,delta_mbps\n";
    for (std::size_t l = 0; l < link_ids.size(); ++l)
        s += link_ids[l] + "," + format_mbps(before.per_link[l]) + "," + format_mbps(report.rates_after.per_link[l]) +
             "," + format_mbps(report.rate_delta[l]) + "\n";
    return s;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace spanalloc::io
