#include "spanalloc/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spanalloc/guardband.hpp"
#include "spanalloc/io.hpp"
#include "spanalloc/scenario.hpp"
#include "spanalloc/solver.hpp"

namespace spanalloc::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct CommonArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::uint64_t node_budget = SolveOptions{}.node_budget;
    bool strict_bounds = false;
    unsigned threads = 1;
};

struct Args {
    CommonArgs common;
    std::optional<std::size_t> b;
    std::vector<std::size_t> b_list;
    std::vector<std::string> interferers;
    std::vector<std::string> baseline;
    std::size_t realizations = 100;
    std::string allocation_path;
    std::string rates_path;
    std::string guardband_mode = "paper";
};

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class OutputSet {
public:
    OutputSet(fs::path dir, std::string command, std::vector<std::string> argv)
        : dir_(std::move(dir)), command_(std::move(command)), argv_(std::move(argv)), started_(utc_now()) {}

    void add(const std::string& name, const std::string& contents) { files_.emplace_back(name, contents); }

    void commit(const std::string& config_hash, std::uint64_t seed) {
        fs::create_directories(dir_);
        nlohmann::json outputs = nlohmann::json::array();
        for (const auto& [name, contents] : files_) {
            io::write_file(dir_ / name, contents);
            outputs.push_back(name);
        }
        const nlohmann::json manifest{{"tool", "spanalloc"},      {"tool_version", kToolVersion},
                                      {"command", command_},      {"arguments", argv_},
                                      {"config_hash", config_hash}, {"seed", seed},
                                      {"started_utc", started_},  {"finished_utc", utc_now()},
                                      {"outputs", outputs}};
        io::write_file(dir_ / "manifest.json", manifest.dump(2) + "\n");
    }

private:
    fs::path dir_;
    std::string command_;
    std::vector<std::string> argv_;
    std::string started_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::vector<std::string> link_ids(const ScenarioConfig& cfg) {
    std::vector<std::string> ids;
    for (const auto& l : cfg.links) ids.push_back(l.id);
    return ids;
}

ScenarioConfig prepare_config(const CommonArgs& c, std::optional<std::size_t> b, const InterfererSet& sets,
                              std::ostream& err) {
    ScenarioConfig cfg = io::load_config(c.config);
    if (c.seed) cfg.rng_seed = *c.seed;
    if (b) cfg.span_bound = *b;
    for (const auto& w : cfg.validate(c.strict_bounds)) err << "warning: " << w << "\n";
    for (const auto& name : sets) cfg.interferer(name);
    return cfg;
}

SolveOptions solve_options(const CommonArgs& c) {
    SolveOptions o;
    o.node_budget = c.node_budget;
    return o;
}

std::string describe(const InterfererSet& s) {
    if (s.empty()) return "none";
    return std::accumulate(std::next(s.begin()), s.end(), s.front(),
                           [](std::string a, const std::string& b) { return a + "+" + b; });
}

int cmd_solve(const Args& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    const ScenarioConfig cfg = prepare_config(a.common, a.b, a.interferers, err);
    std::mt19937_64 rng = realization_rng(cfg.rng_seed, 0);
    const ProblemInstance inst = realize_instance(cfg, a.interferers, rng);
    const SolveResult res = solve(inst, solve_options(a.common));

    const auto ids = link_ids(cfg);
    OutputSet files(a.common.out_dir, "solve", argv);
    files.add("allocation.csv", io::allocation_csv(ids, res.allocation));
    files.add("channel_rates.csv", io::channel_rates_csv(ids, res.rates.per_channel));
    files.add("rates.csv", io::link_rates_csv(ids, res.rates.per_link));
    files.commit(io::config_hash(cfg), cfg.rng_seed);

    out << "allocation (b=" << inst.span_bound << ", interferers=" << describe(a.interferers) << ")\n";
    for (std::size_t l = 0; l < inst.links(); ++l) {
        out << "  " << ids[l] << "  ";
        for (std::size_t m = 0; m < inst.channels(); ++m) out << (res.allocation.assigned(l, m) ? '#' : '.');
        out << "  span=" << spectral_span(res.allocation.row(l)) << "  rate=" << io::format_mbps(res.rates.per_link[l])
            << " Mbps\n";
    }
    out << "maxmin_mbps=" << io::format_mbps(res.maxmin) << " proven_optimal=" << (res.proven_optimal ? "true" : "false")
        << " nodes=" << res.nodes_explored << "\n";
    return res.proven_optimal ? kOk : kIncumbentOnly;
}

int cmd_sweep(const Args& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    const ScenarioConfig cfg = prepare_config(a.common, std::nullopt, a.interferers, err);
    std::vector<std::size_t> bounds = a.b_list;
    if (bounds.empty())
        for (std::size_t b = min_useful_span_bound(cfg.links.size(), cfg.num_channels); b <= cfg.num_channels; ++b)
            bounds.push_back(b);
    if (a.realizations == 0) throw InvalidInput("--realizations must be positive");

    SweepOptions opts;
    opts.strict_bounds = a.common.strict_bounds;
    opts.threads = a.common.threads;
    opts.solve = solve_options(a.common);
    const SweepResult res = sweep(cfg, a.interferers, bounds, a.realizations, opts);

    OutputSet files(a.common.out_dir, "sweep", argv);
    files.add("tradeoff.csv", io::tradeoff_csv(res.curve));
    files.commit(io::config_hash(cfg), cfg.rng_seed);

    for (const auto& p : res.curve)
        out << "b=" << p.span_bound << " mean_maxmin_mbps=" << io::format_mbps(p.mean_maxmin)
            << " std_maxmin_mbps=" << io::format_mbps(p.std_maxmin) << "\n";
    if (res.unproven) out << res.unproven << " solve(s) stopped at the node budget\n";
    return res.unproven ? kIncumbentOnly : kOk;
}

int cmd_realloc(const Args& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    InterfererSet all = a.interferers;
    all.insert(all.end(), a.baseline.begin(), a.baseline.end());
    const ScenarioConfig cfg = prepare_config(a.common, a.b, all, err);
    std::mt19937_64 rng = realization_rng(cfg.rng_seed, 0);
    const ExperimentResult res =
        reallocation_experiment(cfg, a.baseline, a.interferers, cfg.span_bound, rng, solve_options(a.common));
    const auto& cond = res.conditions.front();

    const auto ids = link_ids(cfg);
    OutputSet files(a.common.out_dir, "realloc", argv);
    files.add("realloc.csv", io::realloc_csv(ids, res));
    files.add("allocation_baseline.csv", io::allocation_csv(ids, res.baseline.allocation));
    files.add("allocation_reallocated.csv", io::allocation_csv(ids, cond.reallocated.allocation));
    files.commit(io::config_hash(cfg), cfg.rng_seed);

    out << "baseline (" << describe(a.baseline) << ") min_mbps=" << io::format_mbps(res.baseline.maxmin) << "\n"
        << "frozen (" << describe(a.interferers) << ") min_mbps=" << io::format_mbps(cond.frozen.maxmin) << "\n"
        << "reallocated (" << describe(a.interferers) << ") min_mbps=" << io::format_mbps(cond.reallocated.maxmin)
        << "\n";
    const bool proven = res.baseline.proven_optimal && cond.reallocated.proven_optimal;
    return proven ? kOk : kIncumbentOnly;
}

int cmd_guardband(const Args& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream&) {
    const std::string alloc_text = io::read_file(a.allocation_path);
    const std::string rates_text = io::read_file(a.rates_path);
    const io::LabeledAllocation alloc = io::parse_allocation_csv(alloc_text);
    const io::LabeledRates rates = io::parse_channel_rates_csv(rates_text);
    if (alloc.link_ids != rates.link_ids) throw InvalidInput("allocation and rates list different links");
    if (rates.per_channel.cols() != alloc.allocation.channels())
        throw InvalidInput("allocation and rates have different channel counts");

    RateResult before;
    before.per_channel = rates.per_channel;
    before.per_link.assign(alloc.link_ids.size(), 0.0);
    before.maxmin = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < before.per_link.size(); ++l) {
        for (std::size_t m = 0; m < before.per_channel.cols(); ++m) before.per_link[l] += before.per_channel(l, m);
        before.maxmin = std::min(before.maxmin, before.per_link[l]);
    }
    const GuardbandMode mode = a.guardband_mode == "flipped" ? GuardbandMode::flipped : GuardbandMode::paper;
    const GuardbandReport rep = insert_guardbands(alloc.allocation, before, mode);

    OutputSet files(a.common.out_dir, "guardband", argv);
    files.add("guarded_allocation.csv", io::allocation_csv(alloc.link_ids, rep.output));
    files.add("guardband_report.csv", io::guardband_decisions_csv(alloc.link_ids, rep));
    files.add("guardband_rates.csv", io::guardband_rates_csv(alloc.link_ids, before, rep));
    files.commit(io::fnv1a_hex(alloc_text + rates_text), 0);

    out << rep.decisions.size() << " guardband channel(s) nulled (mode=" << a.guardband_mode << ")\n";
    for (const auto& d : rep.decisions)
        out << "  boundary ch" << d.left + 1 << "|ch" << d.left + 2 << ": nulled " << alloc.link_ids[d.nulled_link]
            << " ch" << d.nulled_channel + 1 << "\n";
    out << "maxmin_mbps before=" << io::format_mbps(before.maxmin)
        << " after=" << io::format_mbps(rep.rates_after.maxmin) << "\n";
    return kOk;
}

void add_common(CLI::App* sub, CommonArgs& c, bool needs_config) {
    auto* opt = sub->add_option("--config", c.config, "Scenario JSON file, or a built-in name (paper-fig2)");
    if (needs_config) opt->required();
    sub->add_option("--seed", c.seed, "Override the scenario's rng_seed");
    sub->add_option("--out-dir", c.out_dir, "Directory for result files")->capture_default_str();
    sub->add_option("--node-budget", c.node_budget, "Branch-and-bound node limit per solve")->capture_default_str();
    sub->add_flag("--strict-bounds", c.strict_bounds, "Reject span bounds below ceil(M/N)");
    sub->add_option("--threads", c.threads, "Worker threads for independent realizations")->check(CLI::Range(1u, 256u));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Max-min spectrum allocation under a per-link spectral span cap", "spanalloc"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    Args a;

    auto* solve_cmd = app.add_subcommand("solve", "Solve one channel realization exactly");
    add_common(solve_cmd, a.common, true);
    solve_cmd->add_option("--b", a.b, "Span bound override (channels)");
    solve_cmd->add_option("--interferers", a.interferers, "Active interferers, comma separated")->delimiter(',');

    auto* sweep_cmd = app.add_subcommand("sweep", "Average max-min rate against the span bound");
    add_common(sweep_cmd, a.common, true);
    sweep_cmd->add_option("--b", a.b_list, "Span bounds to sweep (default ceil(M/N)..M)")->delimiter(',');
    sweep_cmd->add_option("--interferers", a.interferers, "Active interferers, comma separated")->delimiter(',');
    sweep_cmd->add_option("--realizations", a.realizations, "Fading realizations per bound")->capture_default_str();

    auto* realloc_cmd = app.add_subcommand("realloc", "Compare baseline, frozen and reallocated rates");
    add_common(realloc_cmd, a.common, true);
    realloc_cmd->add_option("--b", a.b, "Span bound override (channels)");
    realloc_cmd->add_option("--baseline", a.baseline, "Interferers active for the baseline solve")->delimiter(',');
    realloc_cmd->add_option("--interferers", a.interferers, "Interferers active afterwards")->delimiter(',');

    auto* gb_cmd = app.add_subcommand("guardband", "Insert guardbands into an allocation");
    add_common(gb_cmd, a.common, false);
    gb_cmd->add_option("--allocation", a.allocation_path, "Allocation CSV (link,ch1..chM)")->required();
    gb_cmd->add_option("--rates", a.rates_path, "Per-channel rate CSV in Mbps (link,ch1..chM)")->required();
    gb_cmd->add_option("--guardband-mode", a.guardband_mode, "paper or flipped")
        ->check(CLI::IsMember({"paper", "flipped"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (*solve_cmd) return cmd_solve(a, args, out, err);
        if (*sweep_cmd) return cmd_sweep(a, args, out, err);
        if (*realloc_cmd) return cmd_realloc(a, args, out, err);
        return cmd_guardband(a, args, out, err);
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

}  // namespace spanalloc::cli
