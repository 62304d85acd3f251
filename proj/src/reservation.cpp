#include "dagreserve/reservation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dagreserve {

void require_valid(const ReservationConfig& cfg) {
    if (!cfg.valid()) {
        throw std::invalid_argument("reservation config requires m >= 1 and 0 < E <= P");
    }
}

double sbf(const ReservationConfig& cfg, double t) {
    require_valid(cfg);
    if (!(t >= 0.0)) throw std::invalid_argument("sbf requires t >= 0");
    const double dead = 2.0 * (cfg.period - cfg.budget);
    if (t <= dead) return 0.0;
    // Past the dead zone the supply repeats every P: a slope-m ramp of
    // width E followed by a plateau of width P-E.
    const double s = t - dead;
    const double cycles = std::floor(s / cfg.period);
    const double rest = s - cycles * cfg.period;
    return cfg.parallelism * (cycles * cfg.budget + std::min(rest, cfg.budget));
}

double inverse_sbf(const ReservationConfig& cfg, double workload) {
    require_valid(cfg);
    if (!(workload > 0.0)) throw std::invalid_argument("inverse_sbf requires W > 0");
    const double window_supply = cfg.parallelism * cfg.budget;
    const double q = std::ceil(workload / window_supply);
    return (q + 1.0) * (cfg.period - cfg.budget) + workload / cfg.parallelism;
}

double response_time_bound(const ReservationConfig& cfg, double volume, double length,
                           double backlog) {
    require_valid(cfg);
    if (!(volume >= 0.0) || !(length >= 0.0) || !(backlog >= 0.0)) {
        throw std::invalid_argument("volume, length and backlog must be non-negative");
    }
    if (length > volume * (1.0 + 1e-12) + 1e-9) {
        throw std::invalid_argument("length must not exceed volume");
    }
    const double workload = volume + (cfg.parallelism - 1) * length + backlog;
    if (workload == 0.0) return 0.0;
    return inverse_sbf(cfg, workload);
}

UtilizationReport utilization_hint(const std::vector<ReservationConfig>& configs,
                                   int processors) {
    UtilizationReport rep;
    rep.processors = processors;
    for (const ReservationConfig& cfg : configs) {
        require_valid(cfg);
        rep.total_utilization += cfg.utilization();
        rep.max_parallelism = std::max(rep.max_parallelism, cfg.parallelism);
    }
    rep.fits = rep.total_utilization <= static_cast<double>(processors);
    return rep;
}

}  // namespace dagreserve
