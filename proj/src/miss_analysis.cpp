#include "dagreserve/miss_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dagreserve {

namespace {

// k-th power by repeated squaring; probabilities stay in [0,1].
double pow_int(double base, int exp) {
    double result = 1.0;
    double b = base;
    int e = exp;
    while (e > 0) {
        if (e & 1) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

}  // namespace

JointDistribution TaskSpec::to_distribution() const {
    if (distribution) return *distribution;
    if (!dag) throw std::invalid_argument("task '" + name + "' has no dag or distribution");
    return from_realizations(enumerate_realizations(*dag));
}

std::vector<std::string> validate_task(const TaskSpec& task) {
    std::vector<std::string> out;
    if (!(task.deadline > 0.0)) out.push_back("deadline must be positive");
    if (!(task.period > 0.0)) out.push_back("period must be positive");
    if (task.deadline > task.period) {
        out.push_back("deadline exceeds period (constrained-deadline model)");
    }
    if (!(task.tardiness_bound > 0.0)) out.push_back("tardiness bound must be positive");
    if (task.parallelism_cap < 1) out.push_back("omega must be a positive integer");
    if (task.reservation_period && *task.reservation_period < task.deadline) {
        out.push_back("reservation period override is below the deadline");
    }
    std::set<int> ks;
    for (const MissConstraint& c : task.constraints) {
        if (c.k < 1) out.push_back("constraint k must be a positive integer");
        if (c.theta < 0.0 || c.theta > 1.0) out.push_back("constraint theta must lie in [0,1]");
        if (!ks.insert(c.k).second) {
            out.push_back("duplicate constraint for k=" + std::to_string(c.k));
        }
    }
    if (task.dag.has_value() == task.distribution.has_value()) {
        out.push_back("exactly one of dag/distribution must be given");
    }
    if (task.dag) {
        for (const Violation& v : validate(*task.dag)) out.push_back(to_string(v));
    }
    if (task.distribution) {
        double total = 0.0;
        for (const Atom& a : task.distribution->atoms) {
            total += a.probability;
            if (!(a.probability > 0.0) || a.probability > 1.0) {
                out.push_back("distribution atom probability outside (0,1]");
            }
            if (a.volume < 0.0 || a.length < 0.0 || a.length > a.volume + 1e-9) {
                out.push_back("distribution atom needs 0 <= length <= volume");
            }
        }
        if (std::abs(total - 1.0) > kProbabilityTolerance) {
            out.push_back("distribution atom probabilities do not sum to 1");
        }
    }
    return out;
}

MissReport analyze(const JointDistribution& d, double deadline, double tardiness_bound,
                   const std::vector<MissConstraint>& constraints,
                   const ReservationConfig& cfg) {
    require_valid(cfg);
    const double hot_backlog = tardiness_bound * cfg.parallelism;
    MissReport rep;
    rep.p_miss_hot = exceedance(response_time_rv(d, cfg, hot_backlog), deadline);
    rep.p_miss_cold = exceedance(response_time_rv(d, cfg, 0.0), deadline);
    rep.stable = rep.p_miss_hot < 1.0;
    std::vector<int> ks;
    for (const MissConstraint& c : constraints) ks.push_back(c.k);
    std::sort(ks.begin(), ks.end());
    for (int k : ks) {
        KBound b;
        b.k = k;
        b.tight_bound = pow_int(rep.p_miss_hot, k - 1) * rep.p_miss_cold;
        b.simple_bound = pow_int(rep.p_miss_hot, k);
        rep.k_bounds.push_back(b);
    }
    return rep;
}

MissReport analyze(const TaskSpec& task, const ReservationConfig& cfg) {
    return analyze(task.to_distribution(), task.deadline, task.tardiness_bound,
                   task.constraints, cfg);
}

ConstraintCheck check_constraints(const TaskSpec& task, const MissReport& report,
                                  bool use_tight) {
    ConstraintCheck check;
    for (const MissConstraint& c : task.constraints) {
        const KBound* kb = nullptr;
        for (const KBound& b : report.k_bounds) {
            if (b.k == c.k) kb = &b;
        }
        if (!kb) {
            throw std::invalid_argument("report was produced without constraint k=" +
                                        std::to_string(c.k));
        }
        ConstraintVerdict v;
        v.k = c.k;
        v.theta = c.theta;
        v.bound = use_tight ? kb->tight_bound : kb->simple_bound;
        v.pass = v.bound <= c.theta;
        check.pass = check.pass && v.pass;
        check.verdicts.push_back(v);
    }
    check.pass = check.pass && report.stable;
    return check;
}

}  // namespace dagreserve
