#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dagreserve/dag_model.hpp"
#include "dagreserve/distribution.hpp"
#include "dagreserve/reservation.hpp"

namespace dagreserve {

/// Tolerated probability `theta` for k consecutive deadline misses.
struct MissConstraint {
    int k = 1;
    double theta = 1.0;
};

/// One task: its probabilistic workload (conditional DAG or explicit
/// distribution), timing parameters, and analysis knobs.
struct TaskSpec {
    std::string name;
    std::optional<ConditionalDag> dag;
    std::optional<JointDistribution> distribution;  // alternative to `dag`
    double deadline = 0.0;                          // D, constrained: D <= T
    double period = 0.0;                            // T, minimum inter-arrival
    double tardiness_bound = 0.0;                   // rho, abort threshold
    std::vector<MissConstraint> constraints;
    int parallelism_cap = 1;                        // Omega, search cap for m
    std::optional<double> reservation_period;       // per-task P override

    double reservation_period_or_default() const {
        return reservation_period ? *reservation_period : period;
    }
    /// Enumerates the dag (or passes the explicit atoms through).
    JointDistribution to_distribution() const;
};

/// Task-level invariant check (includes the embedded dag's violations).
std::vector<std::string> validate_task(const TaskSpec& task);

struct KBound {
    int k = 1;
    double tight_bound = 0.0;   // p_hot^(k-1) * p_cold
    double simple_bound = 0.0;  // p_hot^k
};

struct MissReport {
    double p_miss_cold = 0.0;  // P(R0 > D), no prior miss
    double p_miss_hot = 0.0;   // P(R1 > D), prior miss, backlog rho*m
    std::vector<KBound> k_bounds;
    bool stable = false;  // p_miss_hot < 1
};

/// Core analysis on an already-built distribution.
MissReport analyze(const JointDistribution& d, double deadline, double tardiness_bound,
                   const std::vector<MissConstraint>& constraints,
                   const ReservationConfig& cfg);

MissReport analyze(const TaskSpec& task, const ReservationConfig& cfg);

struct ConstraintVerdict {
    int k = 1;
    double theta = 1.0;
    double bound = 0.0;
    bool pass = true;
};

struct ConstraintCheck {
    bool pass = true;  // all per-k verdicts pass and the system is stable
    std::vector<ConstraintVerdict> verdicts;
};

/// Checks each (k, theta) against the chain bound (or the plain power
/// bound when use_tight is false).
ConstraintCheck check_constraints(const TaskSpec& task, const MissReport& report,
                                  bool use_tight = true);

}  // namespace dagreserve
