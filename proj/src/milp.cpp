#include <algorithm>
#include <cmath>

#include "spanalloc/solver.hpp"

namespace spanalloc {

std::size_t MaxMinProblem::count(ConstraintKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(constraints.begin(), constraints.end(), [kind](const auto& c) { return c.kind == kind; }));
}

MaxMinProblem build_milp(const ProblemInstance& inst) {
    inst.validate();
    MaxMinProblem p;
    p.instance = inst;
    const std::size_t n = inst.links();
    const std::size_t m_count = inst.channels();
    const double big_m = static_cast<double>(m_count);

    for (std::size_t l = 0; l < n; ++l) {
        LinearConstraint c{ConstraintKind::epigraph, {{p.tau_var(), 1.0}}, 0.0};
        for (std::size_t m = 0; m < m_count; ++m) c.terms.push_back({p.alloc_var(l, m), -inst.capacity(l, m)});
        p.constraints.push_back(std::move(c));
    }
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t m = 0; m < m_count; ++m) {
            const double index = static_cast<double>(m + 1);
            // m a - hi <= 0
            p.constraints.push_back({ConstraintKind::upper_index, {{p.alloc_var(l, m), index}, {p.hi_var(l), -1.0}}, 0.0});
            // lo - (m - M) a <= M
            p.constraints.push_back(
                {ConstraintKind::lower_index, {{p.lo_var(l), 1.0}, {p.alloc_var(l, m), big_m - index}}, big_m});
        }
    }
    for (std::size_t l = 0; l < n; ++l)
        p.constraints.push_back({ConstraintKind::span,
                                 {{p.hi_var(l), 1.0}, {p.lo_var(l), -1.0}},
                                 static_cast<double>(inst.span_bound) - 1.0});
    for (std::size_t m = 0; m < m_count; ++m) {
        LinearConstraint c{ConstraintKind::orthogonality, {}, 1.0};
        for (std::size_t l = 0; l < n; ++l) c.terms.push_back({p.alloc_var(l, m), 1.0});
        p.constraints.push_back(std::move(c));
    }
    return p;
}

std::vector<double> MaxMinProblem::point_from(const AllocationMatrix& alloc) const {
    std::vector<double> x(num_variables(), 0.0);
    const std::size_t m_count = instance.channels();
    double tau = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < instance.links(); ++l) {
        double rate = 0.0;
        std::size_t hi = 0;
        std::size_t lo = m_count;
        for (std::size_t m = 0; m < m_count; ++m) {
            if (!alloc.assigned(l, m)) continue;
            x[alloc_var(l, m)] = 1.0;
            rate += instance.capacity(l, m);
            hi = m + 1;
            lo = std::min(lo, m + 1);
        }
        x[hi_var(l)] = static_cast<double>(hi);
        x[lo_var(l)] = static_cast<double>(lo);
        tau = std::min(tau, rate);
    }
    x[tau_var()] = tau;
    return x;
}

std::vector<std::size_t> MaxMinProblem::violated(const std::vector<double>& point, double tol) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const auto& c = constraints[i];
        double lhs = 0.0;
        double scale = std::abs(c.rhs);
        for (const auto& t : c.terms) {
            lhs += t.coef * point.at(t.var);
            scale = std::max(scale, std::abs(t.coef * point.at(t.var)));
        }
        if (lhs > c.rhs + tol * std::max(1.0, scale)) out.push_back(i);
    }
    return out;
}

}  // namespace spanalloc
