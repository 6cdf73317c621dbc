#include <doctest.h>

#include <random>

#include "spanalloc/oracle.hpp"
#include "support.hpp"

using namespace spanalloc;
using spanalloc::testing::make_instance;
using spanalloc::testing::naive_maxmin;
using spanalloc::testing::random_instance;

TEST_CASE("brute force hand instances") {
    const auto one = brute_force(make_instance({{1, 2}}, 1));
    CHECK(one.maxmin == 2.0);
    CHECK(one.allocation.assigned(0, 1));
    CHECK_FALSE(one.allocation.assigned(0, 0));

    const auto diag = brute_force(make_instance({{3, 1}, {1, 3}}, 1));
    CHECK(diag.maxmin == 3.0);
    CHECK(diag.allocation.assigned(0, 0));
    CHECK(diag.allocation.assigned(1, 1));
}

TEST_CASE("ties resolve by total rate then row-major order") {
    // Both {L1: 1-2, L2: 3-4} and {L1: 3-4, L2: 1-2} reach (5, 10); the second
    // has the smaller first row.
    const auto res = brute_force(make_instance({{4, 1, 1, 4}, {1, 4, 4, 1}}, 2));
    CHECK(res.maxmin == 5.0);
    AllocationMatrix expect(2, 4);
    expect.set(0, 2, true);
    expect.set(0, 3, true);
    expect.set(1, 0, true);
    expect.set(1, 1, true);
    CHECK(res.allocation == expect);
}

TEST_CASE("visit counter") {
    const auto counted = brute_force_counted(make_instance({{1, 2, 3}, {3, 2, 1}}, 3));
    CHECK(counted.assignments_visited == 27);
    // A tight bound prunes during enumeration.
    CHECK(brute_force_counted(make_instance({{1, 2, 3}, {3, 2, 1}}, 1)).assignments_visited < 27);
}

TEST_CASE("brute force matches odometer enumeration and verifies") {
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = random_instance(rng, 1 + rng() % 3, 1 + rng() % 6);
        const auto res = brute_force(inst);
        CHECK(res.maxmin == naive_maxmin(inst));
        CHECK(verify_solution(inst, res));

        auto unconstrained = inst;
        unconstrained.span_bound = inst.channels();
        CHECK(brute_force(unconstrained).maxmin >= res.maxmin);
    }
}

TEST_CASE("enumeration budget") {
    std::mt19937_64 rng(1);
    const auto big = random_instance(rng, 4, 12);
    BruteForceOptions small;
    small.max_assignments = 1e6;
    CHECK_THROWS_AS(brute_force(big, small), EnumerationTooLarge);
}

TEST_CASE("trade-off curve") {
    std::mt19937_64 rng(12);
    const InstanceSampler sampler = [](std::mt19937_64& r) { return random_instance(r, 3, 6); };
    const std::vector<std::size_t> bounds{2, 3, 4, 5, 6};
    const auto curve = tradeoff_curve(sampler, bounds, 20, rng);
    REQUIRE(curve.size() == bounds.size());
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].mean_maxmin >= curve[i - 1].mean_maxmin);

    // The b = M point equals the unconstrained optimum of the same draws.
    std::mt19937_64 replay(12);
    double sum = 0.0;
    for (int r = 0; r < 20; ++r) {
        auto inst = sampler(replay);
        inst.span_bound = 6;
        sum += naive_maxmin(inst);
    }
    CHECK(curve.back().mean_maxmin == doctest::Approx(sum / 20.0).epsilon(1e-12));

    CHECK_THROWS_AS(tradeoff_curve(sampler, {7}, 1, rng), InvalidInput);
}
