#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spanalloc/model.hpp"

namespace spanalloc {

struct SolveResult {
    AllocationMatrix allocation;
    RateResult rates;
    double maxmin = 0.0;
    bool proven_optimal = false;
    std::uint64_t nodes_explored = 0;
    double wall_time_s = 0.0;
};

struct SolveOptions {
    std::uint64_t node_budget = 100'000'000;
    // Values above 1 split the search tree across threads that share the incumbent value.
    unsigned workers = 1;
};

/// True when `a` beats `b`: larger max-min, then larger total rate, then the
/// row-major lexicographically smaller allocation.
bool better_allocation(double a_maxmin, double a_total, const AllocationMatrix& a, double b_maxmin,
                       double b_total, const AllocationMatrix& b);

/// Exact max-min allocation under orthogonality and the per-link span bound,
/// found by depth-first branch-and-bound over channels in ascending order.
SolveResult solve(const ProblemInstance& inst, const SolveOptions& options = {});

/// Checks orthogonality, span <= b per row, r = c*a accounting and the max-min value.
bool verify_solution(const ProblemInstance& inst, const SolveResult& res);

// ---------------------------------------------------------------------------
// Linear epigraph form of the max-min program.
//
// Variables: a[l][m] binary, tau (bits/s), hi[l] and lo[l] (one-based channel
// indices bracketing the occupied range of row l).
//
//   tau <= sum_m c[l][m] a[l][m]                 for each l
//   hi[l] >= m a[l][m]                           for each l, m
//   lo[l] <= m a[l][m] + M (1 - a[l][m])         for each l, m
//   hi[l] - lo[l] + 1 <= b                       for each l
//   sum_l a[l][m] <= 1                           for each m
// ---------------------------------------------------------------------------

enum class ConstraintKind { epigraph, upper_index, lower_index, span, orthogonality };

struct LinearTerm {
    std::size_t var;
    double coef;
};

/// sum(terms) <= rhs
struct LinearConstraint {
    ConstraintKind kind;
    std::vector<LinearTerm> terms;
    double rhs;
};

struct MaxMinProblem {
    ProblemInstance instance;
    std::vector<LinearConstraint> constraints;

    std::size_t num_variables() const { return instance.links() * instance.channels() + 1 + 2 * instance.links(); }
    std::size_t alloc_var(std::size_t l, std::size_t m) const { return l * instance.channels() + m; }
    std::size_t tau_var() const { return instance.links() * instance.channels(); }
    std::size_t hi_var(std::size_t l) const { return tau_var() + 1 + l; }
    std::size_t lo_var(std::size_t l) const { return tau_var() + 1 + instance.links() + l; }

    std::size_t count(ConstraintKind kind) const;

    /// Integral point for an allocation: tau = max-min, hi/lo = occupied range
    /// (hi = 0, lo = M for empty rows).
    std::vector<double> point_from(const AllocationMatrix& alloc) const;

    /// Indices of constraints violated by `point` beyond `tol` (scaled by the row's magnitude).
    std::vector<std::size_t> violated(const std::vector<double>& point, double tol = 1e-9) const;
};

MaxMinProblem build_milp(const ProblemInstance& inst);

}  // namespace spanalloc
