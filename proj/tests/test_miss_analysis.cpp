#include <doctest.h>

#include <cmath>

#include "dagreserve/miss_analysis.hpp"
#include "testutil.hpp"

using namespace dagreserve;

TEST_CASE("validate_task accepts the example and flags broken specs") {
    TaskSpec task = testutil::example_task();
    CHECK(validate_task(task).empty());

    SUBCASE("deadline beyond period") {
        task.deadline = 30.0;
        CHECK(!validate_task(task).empty());
    }
    SUBCASE("non-positive tardiness bound") {
        task.tardiness_bound = 0.0;
        CHECK(!validate_task(task).empty());
    }
    SUBCASE("duplicate constraint k") {
        task.constraints.push_back({2, 0.5});
        CHECK(!validate_task(task).empty());
    }
    SUBCASE("period override below the deadline") {
        task.reservation_period = 10.0;
        CHECK(!validate_task(task).empty());
    }
    SUBCASE("dag violations propagate") {
        task.dag->nodes[0].exec_time = -1.0;
        CHECK(!validate_task(task).empty());
    }
}

TEST_CASE("analyze reproduces the hand-computed example values") {
    // Per-atom bounds at m=2, E=3, P=5, rho=2 (hot backlog 4):
    //   hot:  (13,12)->26.5  (14,14)->30  (10,9)->21.5  (11,11)->25
    //   cold: (13,12)->24.5  (14,14)->26  (10,9)->19.5  (11,11)->21
    const TaskSpec task = testutil::example_task();
    const ReservationConfig cfg{2, 3.0, 5.0};
    const MissReport rep = analyze(task, cfg);

    CHECK(rep.p_miss_hot == doctest::Approx(0.60).epsilon(1e-12));
    CHECK(rep.p_miss_cold == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(rep.stable);
    REQUIRE(rep.k_bounds.size() == 1);
    CHECK(rep.k_bounds[0].k == 2);
    CHECK(rep.k_bounds[0].tight_bound == doctest::Approx(0.6 * 0.18).epsilon(1e-12));
    CHECK(rep.k_bounds[0].simple_bound == doctest::Approx(0.36).epsilon(1e-12));
}

TEST_CASE("generous deadline gives zero bounds, tiny budget kills stability") {
    TaskSpec task = testutil::example_task();

    SUBCASE("deadline above the worst hot bound") {
        task.deadline = 1000.0;
        task.period = 1000.0;
        const MissReport rep = analyze(task, {2, 3.0, 5.0});
        CHECK(rep.p_miss_hot == 0.0);
        CHECK(rep.p_miss_cold == 0.0);
        CHECK(rep.stable);
        for (const KBound& b : rep.k_bounds) {
            CHECK(b.tight_bound == 0.0);
            CHECK(b.simple_bound == 0.0);
        }
    }
    SUBCASE("tiny budget misses every atom") {
        const MissReport rep = analyze(task, {1, 0.01, 25.0});
        CHECK(rep.p_miss_hot == 1.0);
        CHECK_FALSE(rep.stable);
        CHECK(rep.k_bounds[0].simple_bound == 1.0);
    }
}

TEST_CASE("check_constraints compares the chain bound against theta") {
    TaskSpec task = testutil::example_task();

    SUBCASE("theta of one always passes when stable") {
        task.constraints = {{3, 1.0}};
        const MissReport rep = analyze(task, {2, 3.0, 5.0});
        CHECK(check_constraints(task, rep).pass);
    }
    SUBCASE("zero theta with a positive cold miss fails") {
        task.constraints = {{1, 0.0}};
        const MissReport rep = analyze(task, {2, 3.0, 5.0});
        const ConstraintCheck check = check_constraints(task, rep);
        CHECK_FALSE(check.pass);
        REQUIRE(check.verdicts.size() == 1);
        CHECK(check.verdicts[0].bound == doctest::Approx(0.18).epsilon(1e-12));
    }
    SUBCASE("worked verdict arithmetic") {
        task.constraints = {{2, 0.04}};
        MissReport rep;
        rep.p_miss_hot = 0.2;
        rep.p_miss_cold = 0.1;
        rep.stable = true;
        rep.k_bounds = {{2, 0.2 * 0.1, 0.04}};
        CHECK(check_constraints(task, rep, true).pass);
        // The plain power bound 0.04 still passes, but only marginally.
        CHECK(check_constraints(task, rep, false).pass);
        task.constraints = {{2, 0.039}};
        rep.k_bounds = {{2, 0.02, 0.04}};
        CHECK(check_constraints(task, rep, true).pass);
        CHECK_FALSE(check_constraints(task, rep, false).pass);
    }
    SUBCASE("instability fails the overall check") {
        task.constraints = {{3, 1.0}};
        const MissReport rep = analyze(task, {1, 0.01, 25.0});
        CHECK_FALSE(check_constraints(task, rep).pass);
    }
}

TEST_CASE("bound chain properties") {
    testutil::Rng rng(71);
    for (int iter = 0; iter < 60; ++iter) {
        const JointDistribution d = testutil::random_distribution(rng);
        ReservationConfig cfg = testutil::random_config(rng);
        const double deadline = rng.uniform(1.0, 120.0);
        const double rho = rng.uniform(0.1, 10.0);
        const std::vector<MissConstraint> ks = {{1, 1.0}, {2, 1.0}, {10, 1.0}, {100, 1.0}};
        const MissReport rep = analyze(d, deadline, rho, ks, cfg);

        CHECK(rep.p_miss_cold <= rep.p_miss_hot + 1e-15);
        for (const KBound& b : rep.k_bounds) {
            CHECK(b.tight_bound <= b.simple_bound + 1e-15);
            CHECK(b.tight_bound >= 0.0);
            CHECK(b.simple_bound <= 1.0);
        }
        if (rep.stable) {
            // The power bound decays with k.
            REQUIRE(rep.k_bounds.size() == 4);
            CHECK(rep.k_bounds[3].simple_bound <= rep.k_bounds[2].simple_bound + 1e-15);
            CHECK(rep.k_bounds[2].simple_bound <= rep.k_bounds[1].simple_bound + 1e-15);
            if (rep.p_miss_hot < 0.9) {
                CHECK(rep.k_bounds[3].simple_bound <= 1e-2 * rep.k_bounds[0].simple_bound + 1e-30);
            }
        }

        // Larger budgets never hurt.
        if (cfg.budget * 1.2 <= cfg.period) {
            ReservationConfig bigger = cfg;
            bigger.budget = cfg.budget * 1.2;
            const MissReport rep2 = analyze(d, deadline, rho, ks, bigger);
            CHECK(rep2.p_miss_hot <= rep.p_miss_hot + 1e-15);
        }
        // More tardiness headroom never lowers the hot miss probability.
        const MissReport rep3 = analyze(d, deadline, rho * 2.0, ks, cfg);
        CHECK(rep3.p_miss_hot >= rep.p_miss_hot - 1e-15);
    }
}
