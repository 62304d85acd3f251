#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dagreserve/miss_analysis.hpp"

namespace dagreserve {

/// Placement of the E service units inside each replenishment window
/// [jP, (j+1)P). worst_case puts the service early in window 0 and late in
/// every later window, which realizes the maximal 2(P-E) supply gap.
enum class SupplyPattern { front, back, worst_case };

std::string to_string(SupplyPattern p);
std::optional<SupplyPattern> supply_pattern_from_string(const std::string& s);

struct SimConfig {
    TaskSpec task;  // must be dag-backed
    ReservationConfig cfg;
    std::int64_t num_jobs = 1;
    std::uint64_t seed = 0;
    SupplyPattern supply = SupplyPattern::worst_case;
    bool record_internals = false;  // keep per-event data for the lemma check
};

struct JobRecord {
    std::int64_t index = 0;
    double release = 0.0;
    std::int32_t atom = 0;     // realization index in enumeration order
    bool aborted = false;
    double response = 0.0;     // meaningful only when !aborted
    double tardiness = 0.0;    // delta(l), capped at rho on abort
    double backlog = 0.0;      // pending work of earlier jobs at release
    bool missed = false;       // delta(l) > 0
};

/// Counters for k-consecutive-miss runs, k in {1,2,3}: events[k-1] counts
/// positions that start k straight misses right after a hit (or at job 0),
/// eligible[k-1] counts all such run-start positions with a full window.
struct ConsecutiveMissStats {
    std::array<std::int64_t, 3> events{};
    std::array<std::int64_t, 3> eligible{};
};

/// Per-event cumulative processed work and provided service, plus the
/// busy window of every job, recorded when SimConfig::record_internals.
struct SimInternals {
    std::vector<double> event_times;  // strictly increasing
    std::vector<double> cum_work;
    std::vector<double> cum_serv;
    struct JobWindow {
        std::int64_t job = 0;
        std::size_t first_event = 0;  // index of the release event
        std::size_t last_event = 0;   // index of the completion/abort event
        double length = 0.0;          // critical-path length of the instance
    };
    std::vector<JobWindow> windows;
    int parallelism = 1;
};

struct SimTrace {
    std::string generator = "mt19937_64";
    std::vector<JobRecord> jobs;
    std::int64_t miss_count = 0;
    std::int64_t abort_count = 0;
    ConsecutiveMissStats consec;
    double max_tardiness = 0.0;
    double max_backlog = 0.0;
    std::int64_t dominance_violations = 0;  // response above the analytic bound
    std::int64_t backlog_violations = 0;    // backlog at release above rho*m
    bool work_conserving = true;
    std::optional<SimInternals> internals;

    double miss_rate() const {
        return jobs.empty() ? 0.0 : static_cast<double>(miss_count) / jobs.size();
    }
};

/// Deterministic discrete-event simulation of one task on its reservation
/// system: periodic releases at T, seeded i.i.d. realization draws, FIFO
/// service of one job at a time, list scheduling of ready subjobs onto the
/// m-wide supply, tardiness accounting, and the rho abort rule. Identical
/// configs produce identical traces.
SimTrace run(const SimConfig& sim);

struct LemmaCounterexample {
    std::int64_t job = 0;
    double time = 0.0;  // offset from the job's release
    double work = 0.0;
    double serv = 0.0;
    double allowed_deficit = 0.0;  // (m-1) * length
};

/// Verifies work(r, r+t) >= serv(r, r+t) - (m-1)*length at every recorded
/// event of every job window. Returns the first violation, if any.
std::optional<LemmaCounterexample> check_work_service_lemma(const SimInternals& internals);

}  // namespace dagreserve
