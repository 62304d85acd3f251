#include "dagreserve/optimizer.hpp"

#include <algorithm>
#include <stdexcept>

namespace dagreserve {

namespace {

bool feasible(const JointDistribution& d, const TaskSpec& task, const ReservationConfig& cfg,
              bool use_tight, MissReport* out_report) {
    MissReport rep = analyze(d, task.deadline, task.tardiness_bound, task.constraints, cfg);
    bool ok = rep.stable;
    for (std::size_t i = 0; i < task.constraints.size() && ok; ++i) {
        double bound = 0.0;
        for (const KBound& b : rep.k_bounds) {
            if (b.k == task.constraints[i].k) {
                bound = use_tight ? b.tight_bound : b.simple_bound;
            }
        }
        ok = bound <= task.constraints[i].theta;
    }
    if (out_report) *out_report = std::move(rep);
    return ok;
}

}  // namespace

std::vector<MenuEntry> optimize_task(const TaskSpec& task, const OptimizeOptions& opts) {
    const std::vector<std::string> problems = validate_task(task);
    if (!problems.empty()) {
        throw std::invalid_argument("invalid task '" + task.name + "': " + problems.front());
    }
    const double period = task.reservation_period_or_default();
    const double budget_cap = std::min(task.deadline, period);
    const double eps = opts.eps_factor * period;
    const JointDistribution d = task.to_distribution();

    std::vector<MenuEntry> menu;
    for (int m = 1; m <= task.parallelism_cap; ++m) {
        auto is_feasible = [&](double budget, MissReport* rep = nullptr) {
            return feasible(d, task, {m, budget, period}, opts.tight_bound, rep);
        };
        if (!is_feasible(budget_cap)) continue;  // no budget in (0, cap] works

        // The miss bounds are non-increasing in E, so feasibility is
        // monotone and the bracket [lo=infeasible, hi=feasible] shrinks to
        // the jump point; the feasible upper end is returned.
        double lo = 0.0;
        double hi = budget_cap;
        while (hi - lo > eps) {
            const double mid = 0.5 * (lo + hi);
            if (is_feasible(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }

        MissReport rep;
        is_feasible(hi, &rep);
        MenuEntry entry;
        entry.parallelism = m;
        entry.budget = hi;
        entry.period = period;
        entry.p_miss_hot = rep.p_miss_hot;
        for (const KBound& b : rep.k_bounds) entry.satisfied_ks.push_back(b.k);
        menu.push_back(std::move(entry));
    }
    return menu;
}

std::size_t select_config(const std::vector<MenuEntry>& menu) {
    if (menu.empty()) throw std::invalid_argument("infeasible: empty configuration menu");
    std::size_t best = 0;
    for (std::size_t i = 1; i < menu.size(); ++i) {
        const double u = menu[i].config().utilization();
        const double b = menu[best].config().utilization();
        if (u < b || (u == b && menu[i].parallelism < menu[best].parallelism)) best = i;
    }
    return best;
}

}  // namespace dagreserve
