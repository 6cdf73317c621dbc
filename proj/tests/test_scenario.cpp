#include <doctest.h>

#include <cmath>
#include <limits>

#include "spanalloc/scenario.hpp"

using namespace spanalloc;

TEST_CASE("built-in four-link scenario") {
    const auto cfg = paper_fig2_scenario();
    CHECK(cfg.validate(true).empty());
    REQUIRE(cfg.links.size() == 4);
    CHECK(cfg.links[0].length() == 1.0);
    CHECK(cfg.links[1].length() == doctest::Approx(std::sqrt(5.0)));
    CHECK(cfg.links[2].length() == doctest::Approx(std::sqrt(2.0)));
    CHECK(cfg.links[3].length() == 2.0);
    CHECK(cfg.num_channels == 12);
    CHECK(min_useful_span_bound(cfg.links.size(), cfg.num_channels) == 3);
}

TEST_CASE("interference lands on the listed channels at every receiver") {
    const auto cfg = paper_fig2_scenario();
    const auto u = interference_matrix(cfg, {"C"});
    const double expect = std::pow(10.0, 3.3) * cfg.noise_power_w();
    for (std::size_t l = 0; l < 4; ++l)
        for (std::size_t m = 0; m < 12; ++m) {
            if (m >= 8 && m <= 10)
                CHECK(u(l, m) == doctest::Approx(expect).epsilon(1e-12));
            else
                CHECK(u(l, m) == 0.0);
        }
    CHECK_THROWS_AS(interference_matrix(cfg, {"Q"}), InvalidInput);
}

TEST_CASE("deterministic gains give flat capacity rows") {
    auto cfg = paper_fig2_scenario();
    cfg.rician_k_db = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(1);
    const auto inst = realize_instance(cfg, {}, rng);
    for (std::size_t l = 0; l < inst.links(); ++l)
        for (std::size_t m = 1; m < inst.channels(); ++m) CHECK(inst.capacity(l, m) == inst.capacity(l, 0));
    // Shorter links see more capacity.
    CHECK(inst.capacity(0, 0) > inst.capacity(2, 0));
    CHECK(inst.capacity(2, 0) > inst.capacity(3, 0));
    CHECK(inst.capacity(3, 0) > inst.capacity(1, 0));
}

TEST_CASE("seeded realizations are reproducible") {
    const auto cfg = paper_fig2_scenario();
    auto r1 = realization_rng(cfg.rng_seed, 3);
    auto r2 = realization_rng(cfg.rng_seed, 3);
    auto r3 = realization_rng(cfg.rng_seed, 4);
    const auto a = realize_instance(cfg, {"A"}, r1);
    const auto b = realize_instance(cfg, {"A"}, r2);
    const auto c = realize_instance(cfg, {"A"}, r3);
    CHECK(a.capacity == b.capacity);
    CHECK_FALSE(a.capacity == c.capacity);
}

TEST_CASE("adding an interferer never raises capacity") {
    const auto cfg = paper_fig2_scenario();
    for (std::uint64_t r = 0; r < 20; ++r) {
        auto rng = realization_rng(cfg.rng_seed, r);
        const auto g = realize_gains(cfg, rng);
        const auto none = build_instance(cfg, g, interference_matrix(cfg, {}), 4);
        const auto a = build_instance(cfg, g, interference_matrix(cfg, {"A"}), 4);
        const auto ab = build_instance(cfg, g, interference_matrix(cfg, {"A", "B"}), 4);
        for (std::size_t l = 0; l < 4; ++l)
            for (std::size_t m = 0; m < 12; ++m) {
                CHECK(a.capacity(l, m) <= none.capacity(l, m));
                CHECK(ab.capacity(l, m) <= a.capacity(l, m));
            }
    }
}

TEST_CASE("reallocation experiment") {
    const auto cfg = paper_fig2_scenario();
    SUBCASE("unchanged interference leaves nothing to recover") {
        auto rng = realization_rng(cfg.rng_seed, 0);
        const auto res = reallocation_experiment(cfg, {}, InterfererSet{}, 4, rng);
        CHECK(res.conditions.front().frozen.maxmin == res.conditions.front().reallocated.maxmin);
        CHECK(res.baseline.maxmin == res.conditions.front().frozen.maxmin);
    }
    SUBCASE("re-solving never loses to the frozen allocation") {
        for (std::uint64_t r = 0; r < 10; ++r) {
            auto rng = realization_rng(cfg.rng_seed, r);
            const auto res =
                reallocation_experiment(cfg, {}, std::vector<InterfererSet>{{"A"}, {"C"}, {"A", "B", "C"}}, 4, rng);
            REQUIRE(res.conditions.size() == 3);
            for (const auto& c : res.conditions) {
                CHECK(c.reallocated.maxmin >= c.frozen.maxmin);
                CHECK(c.frozen.maxmin <= res.baseline.maxmin);
                CHECK(verify_solution(c.instance, c.reallocated));
            }
        }
    }
}

TEST_CASE("sweep") {
    const auto cfg = paper_fig2_scenario();
    const std::vector<std::size_t> bounds{3, 4, 5, 6};
    const auto res = sweep(cfg, {"A", "B", "C"}, bounds, 4);
    REQUIRE(res.curve.size() == 4);
    CHECK(res.unproven == 0);
    for (const auto& row : res.per_realization)
        for (std::size_t i = 1; i < row.size(); ++i) CHECK(row[i] >= row[i - 1]);

    SweepOptions threaded;
    threaded.threads = 3;
    const auto again = sweep(cfg, {"A", "B", "C"}, bounds, 4, threaded);
    CHECK(again.per_realization == res.per_realization);

    SweepOptions strict;
    strict.strict_bounds = true;
    CHECK_THROWS_AS(sweep(cfg, {}, {2, 3}, 1, strict), InvalidInput);
    CHECK_NOTHROW(sweep(cfg, {}, {2}, 1));
    CHECK_THROWS_AS(sweep(cfg, {}, {13}, 1), InvalidInput);
}
