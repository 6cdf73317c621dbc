#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "spanalloc/model.hpp"

namespace spanalloc::testing {

inline ProblemInstance make_instance(const std::vector<std::vector<double>>& rows, std::size_t b,
                                     double scale = 1.0) {
    ProblemInstance inst;
    inst.capacity = Matrix<double>(rows.size(), rows.front().size());
    for (std::size_t l = 0; l < rows.size(); ++l)
        for (std::size_t m = 0; m < rows[l].size(); ++m) inst.capacity(l, m) = rows[l][m] * scale;
    inst.span_bound = b;
    inst.bandwidth_hz = 100e3;
    return inst;
}

/// Capacities i.i.d. uniform in [0, max_mbps] Mbps; b uniform in [lo_b, M].
inline ProblemInstance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t m, double max_mbps = 10.0,
                                       std::size_t lo_b = 1) {
    std::uniform_real_distribution<double> cap(0.0, max_mbps * 1e6);
    std::uniform_int_distribution<std::size_t> bound(lo_b, m);
    ProblemInstance inst;
    inst.capacity = Matrix<double>(n, m);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t k = 0; k < m; ++k) inst.capacity(l, k) = cap(rng);
    inst.span_bound = bound(rng);
    inst.bandwidth_hz = 100e3;
    return inst;
}

/// Random orthogonal allocation: each channel free or owned by a uniform link.
inline AllocationMatrix random_allocation(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    std::uniform_int_distribution<std::size_t> pick(0, n);
    AllocationMatrix a(n, m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t owner = pick(rng);
        if (owner < n) a.set(owner, k, true);
    }
    return a;
}

/// Reference optimum by plain odometer enumeration of all (N+1)^M assignments,
/// span checked after the fact. Deliberately shares no code with the library
/// search routines.
inline double naive_maxmin(const ProblemInstance& inst) {
    const std::size_t n = inst.links();
    const std::size_t m = inst.channels();
    std::vector<std::size_t> digit(m, 0);  // 0 = free, k = link k-1
    double best = -1.0;
    while (true) {
        bool ok = true;
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < n && ok; ++l) {
            std::size_t first = m, last = 0;
            double rate = 0.0;
            for (std::size_t k = 0; k < m; ++k)
                if (digit[k] == l + 1) {
                    first = std::min(first, k);
                    last = k;
                    rate += inst.capacity(l, k);
                }
            if (first != m && last - first + 1 > inst.span_bound) ok = false;
            worst = std::min(worst, rate);
        }
        if (ok) best = std::max(best, worst);
        std::size_t pos = 0;
        while (pos < m && ++digit[pos] > n) digit[pos++] = 0;
        if (pos == m) break;
    }
    return best;
}

}  // namespace spanalloc::testing
