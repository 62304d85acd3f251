#pragma once

#include <string>
#include <vector>

namespace dagreserve {

/// An m-in-parallel reservation system: `parallelism` servers, each
/// guaranteeing `budget` units of service in every window of `period`.
struct ReservationConfig {
    int parallelism = 1;  // m
    double budget = 0.0;  // E
    double period = 0.0;  // P

    bool valid() const {
        return parallelism >= 1 && budget > 0.0 && budget <= period;
    }
    double utilization() const { return parallelism * budget / period; }
};

/// Throws std::invalid_argument when the config violates 0 < E <= P, m >= 1.
void require_valid(const ReservationConfig& cfg);

/// Worst-case guaranteed supply in any interval of length t: zero up to
/// 2(P-E), then alternating slope-m ramps of width E and plateaus of
/// width P-E.
double sbf(const ReservationConfig& cfg, double t);

/// Smallest t > 0 with sbf(t) >= workload; closed form
/// (ceil(W/(mE)) + 1)(P-E) + W/m. Requires workload > 0.
double inverse_sbf(const ReservationConfig& cfg, double workload);

/// Response-time bound for one DAG instance: inverse_sbf applied to
/// volume + (m-1)*length + backlog, or 0 when that workload is 0.
double response_time_bound(const ReservationConfig& cfg, double volume,
                           double length, double backlog);

struct UtilizationReport {
    double total_utilization = 0.0;
    int max_parallelism = 0;
    int processors = 0;
    bool fits = true;  // advisory only, not a feasibility proof
};

UtilizationReport utilization_hint(const std::vector<ReservationConfig>& configs,
                                   int processors);

}  // namespace dagreserve
