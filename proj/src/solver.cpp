#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "spanalloc/solver.hpp"

namespace spanalloc {

namespace {

constexpr int kFree = -1;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
// Bounds are sums taken in a different order than the leaf rates; this slack
// absorbs the rounding so a bound never drops below an achievable value.
constexpr double kBoundSlack = 1e-12;

struct Incumbent {
    bool found = false;
    double maxmin = -std::numeric_limits<double>::infinity();
    double total = 0.0;
    AllocationMatrix alloc;
};

AllocationMatrix to_matrix(const std::vector<int>& owner, std::size_t links) {
    AllocationMatrix a(links, owner.size());
    for (std::size_t m = 0; m < owner.size(); ++m)
        if (owner[m] != kFree) a.set(static_cast<std::size_t>(owner[m]), m, true);
    return a;
}

// Per-instance tables shared read-only by every search worker.
struct Tables {
    const ProblemInstance& inst;
    std::size_t n, channels, b;
    Matrix<double> prefix;       // prefix(l, m) = sum of c[l][0..m-1]
    Matrix<double> best_window;  // best_window(l, s) = best width-b window sum starting at >= s
    std::vector<double> column_max_suffix;

    explicit Tables(const ProblemInstance& p)
        : inst(p), n(p.links()), channels(p.channels()), b(p.span_bound),
          prefix(n, channels + 1, 0.0), best_window(n, channels + 1, 0.0),
          column_max_suffix(channels + 1, 0.0) {
        for (std::size_t l = 0; l < n; ++l) {
            for (std::size_t m = 0; m < channels; ++m) prefix(l, m + 1) = prefix(l, m) + p.capacity(l, m);
            for (std::size_t s = channels; s-- > 0;) {
                const std::size_t end = std::min(s + b, channels);
                best_window(l, s) = std::max(best_window(l, s + 1), prefix(l, end) - prefix(l, s));
            }
        }
        for (std::size_t m = channels; m-- > 0;) {
            double best = 0.0;
            for (std::size_t l = 0; l < n; ++l) best = std::max(best, p.capacity(l, m));
            column_max_suffix[m] = column_max_suffix[m + 1] + best;
        }
    }
};

struct SharedState {
    std::atomic<double> best_value{-std::numeric_limits<double>::infinity()};
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> exhausted{false};
    std::uint64_t budget = 0;

    void offer(double value) {
        double cur = best_value.load(std::memory_order_relaxed);
        while (value > cur && !best_value.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
        }
    }
};

class Search {
public:
    Search(const Tables& t, SharedState& shared)
        : t_(t), shared_(shared), owner_(t.channels, kFree), rate_(t.n, 0.0), lo_(t.n, kNone) {}

    bool can_take(std::size_t l, std::size_t m) const { return lo_[l] == kNone || m - lo_[l] + 1 <= t_.b; }

    void assign(std::size_t l, std::size_t m) {
        owner_[m] = static_cast<int>(l);
        rate_[l] += t_.inst.capacity(l, m);
        if (lo_[l] == kNone) lo_[l] = m;
    }

    void run(std::size_t start) { dfs(start); }

    const Incumbent& incumbent() const { return best_; }
    std::uint64_t local_nodes() const { return nodes_; }

private:
    double bound(std::size_t m) const {
        double per_link = std::numeric_limits<double>::infinity();
        double total = 0.0;
        for (std::size_t l = 0; l < t_.n; ++l) {
            double extra;
            if (lo_[l] == kNone) {
                extra = t_.best_window(l, m);
            } else {
                const std::size_t end = std::min(lo_[l] + t_.b, t_.channels);
                extra = end > m ? t_.prefix(l, end) - t_.prefix(l, m) : 0.0;
            }
            per_link = std::min(per_link, rate_[l] + extra);
            total += rate_[l];
        }
        // The minimum rate cannot exceed the mean rate, and the remaining
        // channels add at most their column maxima to the sum.
        const double mean = (total + t_.column_max_suffix[m]) / static_cast<double>(t_.n);
        return std::min(per_link, mean);
    }

    void leaf() {
        double mm = std::numeric_limits<double>::infinity();
        double total = 0.0;
        for (double r : rate_) {
            mm = std::min(mm, r);
            total += r;
        }
        if (mm < shared_.best_value.load(std::memory_order_relaxed)) return;
        if (best_.found && mm < best_.maxmin) return;
        AllocationMatrix a = to_matrix(owner_, t_.n);
        if (!best_.found || better_allocation(mm, total, a, best_.maxmin, best_.total, best_.alloc)) {
            best_ = {true, mm, total, std::move(a)};
            shared_.offer(mm);
        }
    }

    void dfs(std::size_t m) {
        if (shared_.exhausted.load(std::memory_order_relaxed)) return;
        if (shared_.nodes.fetch_add(1, std::memory_order_relaxed) + 1 > shared_.budget) {
            shared_.exhausted.store(true, std::memory_order_relaxed);
            return;
        }
        ++nodes_;
        if (m == t_.channels) {
            leaf();
            return;
        }
        if (bound(m) * (1.0 + kBoundSlack) <= shared_.best_value.load(std::memory_order_relaxed)) return;

        // Neediest links first so good incumbents appear early.
        std::vector<std::size_t> order;
        order.reserve(t_.n);
        for (std::size_t l = 0; l < t_.n; ++l)
            if (can_take(l, m)) order.push_back(l);
        std::stable_sort(order.begin(), order.end(), [this](std::size_t x, std::size_t y) { return rate_[x] < rate_[y]; });

        bool free_dominated = false;
        for (std::size_t l : order) {
            const double saved_rate = rate_[l];
            const std::size_t saved_lo = lo_[l];
            // Giving m to a link that already occupies channels leaves its lower
            // edge unchanged, so every completion of "m free" is matched or beaten.
            free_dominated = free_dominated || saved_lo != kNone;
            assign(l, m);
            dfs(m + 1);
            owner_[m] = kFree;
            rate_[l] = saved_rate;
            lo_[l] = saved_lo;
        }
        if (!free_dominated) dfs(m + 1);
    }

    const Tables& t_;
    SharedState& shared_;
    std::vector<int> owner_;
    std::vector<double> rate_;
    std::vector<std::size_t> lo_;
    Incumbent best_;
    std::uint64_t nodes_ = 0;
};

// Span-feasible assignments of the first `depth` channels, used as parallel work units.
void enumerate_prefixes(const Tables& t, std::size_t depth, std::vector<int>& cur,
                        std::vector<std::vector<int>>& out) {
    const std::size_t m = cur.size();
    if (m == depth) {
        out.push_back(cur);
        return;
    }
    for (int l = 0; l < static_cast<int>(t.n); ++l) {
        std::size_t lo = kNone;
        for (std::size_t k = 0; k < m; ++k)
            if (cur[k] == l) {
                lo = k;
                break;
            }
        if (lo != kNone && m - lo + 1 > t.b) continue;
        cur.push_back(l);
        enumerate_prefixes(t, depth, cur, out);
        cur.pop_back();
    }
    cur.push_back(kFree);
    enumerate_prefixes(t, depth, cur, out);
    cur.pop_back();
}

}  // namespace

bool better_allocation(double a_maxmin, double a_total, const AllocationMatrix& a, double b_maxmin,
                       double b_total, const AllocationMatrix& b) {
    if (a_maxmin != b_maxmin) return a_maxmin > b_maxmin;
    if (a_total != b_total) return a_total > b_total;
    return a.lexicographically_less(b);
}

SolveResult solve(const ProblemInstance& inst, const SolveOptions& options) {
    inst.validate();
    const auto started = std::chrono::steady_clock::now();
    const Tables tables(inst);
    SharedState shared;
    shared.budget = options.node_budget;

    Incumbent best;
    std::uint64_t nodes = 0;
    if (options.workers <= 1) {
        Search search(tables, shared);
        search.run(0);
        best = search.incumbent();
        nodes = search.local_nodes();
    } else {
        std::size_t depth = 0;
        double units = 1.0;
        while (depth < inst.channels() && units < 16.0 * options.workers) {
            ++depth;
            units *= static_cast<double>(inst.links() + 1);
        }
        std::vector<std::vector<int>> prefixes;
        std::vector<int> cur;
        enumerate_prefixes(tables, depth, cur, prefixes);

        std::vector<Incumbent> found(prefixes.size());
        std::atomic<std::size_t> next{0};
        std::atomic<std::uint64_t> total_nodes{0};
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < options.workers; ++w) {
                pool.emplace_back([&] {
                    for (std::size_t i = next.fetch_add(1); i < prefixes.size(); i = next.fetch_add(1)) {
                        Search search(tables, shared);
                        for (std::size_t m = 0; m < prefixes[i].size(); ++m)
                            if (prefixes[i][m] != kFree) search.assign(static_cast<std::size_t>(prefixes[i][m]), m);
                        search.run(depth);
                        found[i] = search.incumbent();
                        total_nodes += search.local_nodes();
                    }
                });
            }
        }
        nodes = total_nodes.load();
        for (auto& inc : found) {
            if (!inc.found) continue;
            if (!best.found || better_allocation(inc.maxmin, inc.total, inc.alloc, best.maxmin, best.total, best.alloc))
                best = std::move(inc);
        }
    }

    SolveResult res;
    res.allocation = best.found ? best.alloc : AllocationMatrix(inst.links(), inst.channels());
    res.rates = evaluate_rates(inst, res.allocation);
    res.maxmin = res.rates.maxmin;
    res.proven_optimal = !shared.exhausted.load();
    res.nodes_explored = nodes;
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return res;
}

bool verify_solution(const ProblemInstance& inst, const SolveResult& res) {
    const auto& a = res.allocation;
    if (a.links() != inst.links() || a.channels() != inst.channels()) return false;
    if (!a.orthogonal()) return false;
    for (std::size_t l = 0; l < inst.links(); ++l)
        if (spectral_span(a.row(l)) > inst.span_bound) return false;

    const auto& r = res.rates;
    if (r.per_channel.rows() != inst.links() || r.per_channel.cols() != inst.channels()) return false;
    if (r.per_link.size() != inst.links()) return false;
    double mm = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < inst.links(); ++l) {
        double sum = 0.0;
        for (std::size_t m = 0; m < inst.channels(); ++m) {
            const double expect = a.assigned(l, m) ? inst.capacity(l, m) : 0.0;
            if (r.per_channel(l, m) != expect) return false;
            sum += r.per_channel(l, m);
        }
        if (r.per_link[l] != sum) return false;
        mm = std::min(mm, sum);
    }
    return r.maxmin == mm && res.maxmin == mm;
}

}  // namespace spanalloc
