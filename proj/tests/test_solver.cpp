#include <doctest.h>

#include <random>

#include "spanalloc/oracle.hpp"
#include "spanalloc/solver.hpp"
#include "support.hpp"

using namespace spanalloc;
using spanalloc::testing::make_instance;
using spanalloc::testing::naive_maxmin;
using spanalloc::testing::random_instance;

TEST_CASE("solve small hand instances") {
    SUBCASE("single link takes every channel") {
        const auto res = solve(make_instance({{1, 2, 3}}, 3, 1e6));
        CHECK(res.maxmin == 6e6);
        CHECK(res.proven_optimal);
        CHECK(spectral_span(res.allocation.row(0)) == 3);
    }
    SUBCASE("best contiguous window of width two") {
        const auto res = solve(make_instance({{1, 2, 3}}, 2, 1e6));
        CHECK(res.maxmin == 5e6);
        CHECK(!res.allocation.assigned(0, 0));
        CHECK(res.allocation.assigned(0, 1));
        CHECK(res.allocation.assigned(0, 2));
    }
    SUBCASE("two crossed links") {
        // Exhaustive enumeration: 5 at b=2, 8 at b=4.
        const auto inst = make_instance({{4, 1, 1, 4}, {1, 4, 4, 1}}, 2, 1e6);
        CHECK(solve(inst).maxmin == 5e6);
        auto wide = inst;
        wide.span_bound = 4;
        CHECK(solve(wide).maxmin == 8e6);
    }
    SUBCASE("a link with no usable capacity") {
        const auto inst = make_instance({{0, 0, 0}, {1, 2, 3}}, 3, 1e6);
        const auto res = solve(inst);
        CHECK(res.maxmin == 0.0);
        CHECK(res.proven_optimal);
        CHECK(verify_solution(inst, res));
    }
    CHECK_THROWS_AS(solve(make_instance({{1, 2}}, 0)), InvalidInput);
    CHECK_THROWS_AS(solve(make_instance({{1, 2}}, 3)), InvalidInput);
    CHECK_THROWS_AS(solve(make_instance({{1, -2}}, 1)), InvalidInput);
}

TEST_CASE("solver agrees with plain enumeration") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 1 + rng() % 3;
        const std::size_t m = 1 + rng() % 7;
        const auto inst = random_instance(rng, n, m);
        const auto res = solve(inst);
        CHECK(res.proven_optimal);
        CHECK(res.maxmin == naive_maxmin(inst));
        CHECK(verify_solution(inst, res));
    }
}

TEST_CASE("solver properties") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng() % 3;
        auto inst = random_instance(rng, n, 6 + rng() % 5);
        const std::size_t m = inst.channels();

        // Monotone in the span bound, with b = M matching the unconstrained optimum.
        double prev = -1.0;
        for (std::size_t b = 1; b <= m; ++b) {
            inst.span_bound = b;
            const double v = solve(inst).maxmin;
            CHECK(v >= prev);
            prev = v;
        }
        CHECK(prev == solve(inst).maxmin);

        // Scaling capacities scales the optimum.
        inst.span_bound = 1 + rng() % m;
        const double base = solve(inst).maxmin;
        auto doubled = inst;
        auto tripled = inst;
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t k = 0; k < m; ++k) {
                doubled.capacity(l, k) *= 2.0;
                tripled.capacity(l, k) *= 3.0;
            }
        CHECK(solve(doubled).maxmin == 2.0 * base);
        CHECK(solve(tripled).maxmin == doctest::Approx(3.0 * base).epsilon(1e-12));
    }
}

TEST_CASE("parallel search reports the same optimum") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = random_instance(rng, 2 + rng() % 3, 6 + rng() % 5);
        SolveOptions par;
        par.workers = 4;
        const auto serial = solve(inst);
        const auto parallel = solve(inst, par);
        CHECK(parallel.proven_optimal);
        CHECK(parallel.maxmin == serial.maxmin);
        CHECK(verify_solution(inst, parallel));
    }
}

TEST_CASE("node budget exhaustion keeps a valid incumbent") {
    std::mt19937_64 rng(8);
    const auto inst = random_instance(rng, 4, 12, 10.0, 12);
    SolveOptions tight;
    tight.node_budget = 200;
    const auto res = solve(inst, tight);
    CHECK_FALSE(res.proven_optimal);
    CHECK(res.nodes_explored <= 200);
    CHECK(verify_solution(inst, res));
    CHECK(res.maxmin <= solve(inst).maxmin);
}

TEST_CASE("verify_solution rejects corrupted results") {
    const auto inst = make_instance({{1, 2, 3, 4}, {4, 3, 2, 1}}, 2, 1e6);
    const auto good = solve(inst);
    REQUIRE(verify_solution(inst, good));

    auto shared = good;
    const std::size_t owned = good.allocation.assigned(0, 0) ? 0 : 1;
    shared.allocation.set(1 - owned, 0, true);
    CHECK_FALSE(verify_solution(inst, shared));

    SolveResult wide;
    wide.allocation = AllocationMatrix(2, 4);
    wide.allocation.set(0, 0, true);
    wide.allocation.set(0, 2, true);  // span 3 > b = 2
    wide.rates = evaluate_rates(inst, wide.allocation);
    wide.maxmin = wide.rates.maxmin;
    CHECK_FALSE(verify_solution(inst, wide));

    auto inflated = good;
    inflated.rates.per_link[0] += 1.0;
    CHECK_FALSE(verify_solution(inst, inflated));

    auto wrong_value = good;
    wrong_value.maxmin += 1.0;
    CHECK_FALSE(verify_solution(inst, wrong_value));
}

TEST_CASE("epigraph formulation") {
    SUBCASE("constraint counts for one link on two channels") {
        const auto p = build_milp(make_instance({{1, 2}}, 2));
        CHECK(p.count(ConstraintKind::epigraph) == 1);
        CHECK(p.count(ConstraintKind::upper_index) + p.count(ConstraintKind::lower_index) == 4);
        CHECK(p.count(ConstraintKind::span) == 1);
        CHECK(p.count(ConstraintKind::orthogonality) == 2);
        CHECK(p.num_variables() == 2 + 1 + 2);
    }
    SUBCASE("empty rows are feasible") {
        const auto p = build_milp(make_instance({{1, 2, 3}, {3, 2, 1}}, 1));
        AllocationMatrix a(2, 3);
        a.set(1, 0, true);
        const auto x = p.point_from(a);
        CHECK(x[p.hi_var(0)] == 0.0);
        CHECK(x[p.lo_var(0)] == 3.0);
        CHECK(p.violated(x).empty());
    }
    SUBCASE("solver output satisfies every emitted constraint") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 100; ++trial) {
            const auto inst = random_instance(rng, 1 + rng() % 4, 1 + rng() % 9);
            const auto p = build_milp(inst);
            const auto res = solve(inst);
            const auto x = p.point_from(res.allocation);
            CHECK(p.violated(x).empty());
            CHECK(x[p.tau_var()] == res.maxmin);
        }
    }
    SUBCASE("integral feasible points are feasible allocations") {
        std::mt19937_64 rng(23);
        int feasible_points = 0;
        for (int trial = 0; trial < 4000; ++trial) {
            const std::size_t n = 1 + rng() % 3;
            const std::size_t m = 1 + rng() % 6;
            const auto inst = random_instance(rng, n, m);
            const auto p = build_milp(inst);
            std::vector<double> x(p.num_variables(), 0.0);
            AllocationMatrix a(n, m);
            for (std::size_t l = 0; l < n; ++l)
                for (std::size_t k = 0; k < m; ++k)
                    if (rng() % 3 == 0) {
                        a.set(l, k, true);
                        x[p.alloc_var(l, k)] = 1.0;
                    }
            for (std::size_t l = 0; l < n; ++l) {
                x[p.hi_var(l)] = static_cast<double>(rng() % (m + 1));
                x[p.lo_var(l)] = static_cast<double>(1 + rng() % m);
            }
            x[p.tau_var()] = 0.0;
            if (!p.violated(x).empty()) continue;
            ++feasible_points;
            CHECK(a.orthogonal());
            for (std::size_t l = 0; l < n; ++l) CHECK(spectral_span(a.row(l)) <= inst.span_bound);
        }
        CHECK(feasible_points > 100);

        // And the reverse: an allocation that breaks the span bound has no feasible point.
        const auto inst = make_instance({{1, 1, 1}}, 2);
        const auto p = build_milp(inst);
        AllocationMatrix wide(1, 3);
        wide.set(0, 0, true);
        wide.set(0, 2, true);
        CHECK_FALSE(p.violated(p.point_from(wide)).empty());
    }
}
