#pragma once

#include <cstddef>
#include <vector>

#include "dagreserve/miss_analysis.hpp"

namespace dagreserve {

struct OptimizeOptions {
    bool tight_bound = false;    // default matches the plain power bound
    double eps_factor = 1e-6;    // bracket width = eps_factor * P
};

struct MenuEntry {
    int parallelism = 1;
    double budget = 0.0;  // minimal feasible E for this m
    double period = 0.0;
    double p_miss_hot = 0.0;
    std::vector<int> satisfied_ks;

    ReservationConfig config() const { return {parallelism, budget, period}; }
};

/// For m = 1..parallelism_cap, binary-searches the minimal service budget
/// E in (0, min(D, P)] whose miss bounds satisfy every constraint and keep
/// the system stable. Infeasible m values are skipped; an empty menu means
/// the task is infeasible under its cap.
std::vector<MenuEntry> optimize_task(const TaskSpec& task, const OptimizeOptions& opts = {});

/// Picks the entry with minimal reserved utilization m*E/P, breaking ties
/// toward smaller m. Throws std::invalid_argument on an empty menu.
std::size_t select_config(const std::vector<MenuEntry>& menu);

}  // namespace dagreserve
