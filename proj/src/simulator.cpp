#include "dagreserve/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

namespace dagreserve {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRemainingEps = 1e-9;   // sub-unit slack for finished subjobs
constexpr double kCheckTolerance = 1e-6;  // slack for trace-level inequality checks

// Static description of one realization, indexed by position (ascending
// NodeId, so position order matches the dispatch tie-break).
struct Shape {
    std::vector<NodeId> ids;
    std::vector<double> exec;
    std::vector<std::vector<int>> succ;
    std::vector<int> pred_count;
    double volume = 0.0;
    double length = 0.0;
};

Shape make_shape(const DagRealization& r) {
    Shape s;
    s.volume = r.volume;
    s.length = r.length;
    const std::size_t n = r.subjobs.size();
    s.ids.reserve(n);
    s.exec.reserve(n);
    for (const auto& [id, t] : r.subjobs) {  // already sorted by id
        s.ids.push_back(id);
        s.exec.push_back(t);
    }
    s.succ.resize(n);
    s.pred_count.assign(n, 0);
    auto pos_of = [&s](NodeId id) {
        return static_cast<int>(std::lower_bound(s.ids.begin(), s.ids.end(), id) -
                                s.ids.begin());
    };
    for (const Edge& e : r.edges) {
        const int a = pos_of(e.first);
        const int b = pos_of(e.second);
        s.succ[a].push_back(b);
        ++s.pred_count[b];
    }
    return s;
}

// Service windows [jP, (j+1)P) with the E service units placed per pattern.
struct SupplySchedule {
    double period = 0.0;
    double budget = 0.0;
    SupplyPattern pattern = SupplyPattern::worst_case;
    bool always_on = false;

    double seg_start(std::int64_t j) const {
        switch (pattern) {
            case SupplyPattern::front:
                return static_cast<double>(j) * period;
            case SupplyPattern::back:
                return static_cast<double>(j + 1) * period - budget;
            case SupplyPattern::worst_case:
                return j == 0 ? 0.0 : static_cast<double>(j + 1) * period - budget;
        }
        return 0.0;
    }
    double seg_end(std::int64_t j) const {
        switch (pattern) {
            case SupplyPattern::front:
                return static_cast<double>(j) * period + budget;
            case SupplyPattern::back:
            case SupplyPattern::worst_case:
                if (pattern == SupplyPattern::worst_case && j == 0) return budget;
                return static_cast<double>(j + 1) * period;
        }
        return 0.0;
    }
};

struct JobState {
    std::int64_t index = 0;
    double release = 0.0;
    std::int32_t atom = 0;
    const Shape* shape = nullptr;
    std::vector<double> remaining;
    std::vector<int> preds_left;
    std::vector<char> done;
    std::set<int> ready;  // positions; ordered by NodeId by construction
    int unfinished = 0;
    double backlog_at_release = 0.0;
    double abort_at = kInf;  // set at activation
    std::size_t release_row = 0;

    double remaining_volume() const {
        double v = 0.0;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            if (!done[i]) v += remaining[i];
        }
        return v;
    }
};

struct Engine {
    const SimConfig& sim;
    const std::vector<DagRealization>& realizations;
    std::vector<Shape> shapes;
    std::vector<double> cum_prob;
    SupplySchedule supply;
    std::mt19937_64 rng;

    double now = 0.0;
    std::int64_t next_release_index = 0;
    std::int64_t resolved = 0;
    double delta_prev = 0.0;  // tardiness of the last resolved job

    std::deque<JobState> inflight;  // front = lowest unresolved index
    bool active_started = false;
    std::vector<int> running;  // positions of the active job

    bool in_service = false;
    std::int64_t seg = 0;

    double cum_work = 0.0;
    double cum_serv = 0.0;

    SimTrace trace;

    Engine(const SimConfig& s, const std::vector<DagRealization>& rs)
        : sim(s), realizations(rs), rng(s.seed) {
        shapes.reserve(rs.size());
        double acc = 0.0;
        for (const DagRealization& r : rs) {
            shapes.push_back(make_shape(r));
            acc += r.probability;
            cum_prob.push_back(acc);
        }
        supply = {s.cfg.period, s.cfg.budget, s.supply,
                  s.cfg.budget == s.cfg.period};
        if (s.record_internals) {
            trace.internals.emplace();
            trace.internals->parallelism = s.cfg.parallelism;
        }
    }

    std::int32_t sample_atom() {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        for (std::size_t i = 0; i < cum_prob.size(); ++i) {
            if (u < cum_prob[i]) return static_cast<std::int32_t>(i);
        }
        return static_cast<std::int32_t>(cum_prob.size() - 1);
    }

    void resync_supply() {
        if (supply.always_on) {
            in_service = true;
            return;
        }
        while (supply.seg_end(seg) <= now) ++seg;
        in_service = supply.seg_start(seg) <= now;
    }

    double next_supply_boundary() const {
        if (supply.always_on) return kInf;
        return in_service ? supply.seg_end(seg) : supply.seg_start(seg);
    }

    JobState* active() {
        return (!inflight.empty() && active_started) ? &inflight.front() : nullptr;
    }

    // Completes the subjob at `pos` of the active job and releases its
    // successors.
    void finish_subjob(JobState& job, int pos) {
        job.done[pos] = 1;
        --job.unfinished;
        for (int s : job.shape->succ[pos]) {
            if (--job.preds_left[s] == 0) job.ready.insert(s);
        }
    }

    // Zero-work subjobs complete without occupying a server.
    void settle(JobState& job) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto it = job.ready.begin(); it != job.ready.end();) {
                if (job.remaining[*it] <= kRemainingEps) {
                    const int pos = *it;
                    it = job.ready.erase(it);
                    finish_subjob(job, pos);
                    changed = true;
                } else {
                    ++it;
                }
            }
        }
    }

    void record_resolution(JobState& job, bool aborted, std::size_t row) {
        JobRecord rec;
        rec.index = job.index;
        rec.release = job.release;
        rec.atom = job.atom;
        rec.aborted = aborted;
        rec.backlog = job.backlog_at_release;
        if (aborted) {
            rec.tardiness = sim.task.tardiness_bound;
            rec.missed = true;
            ++trace.abort_count;
        } else {
            rec.response = now - job.release;
            rec.tardiness = std::max(delta_prev + (rec.response - sim.task.deadline), 0.0);
            rec.missed = rec.tardiness > 0.0;
            const Shape& sh = *job.shape;
            const double bound = response_time_bound(sim.cfg, sh.volume, sh.length,
                                                     job.backlog_at_release);
            if (rec.response > bound + kCheckTolerance) ++trace.dominance_violations;
        }
        if (rec.missed) ++trace.miss_count;
        delta_prev = rec.tardiness;
        trace.max_tardiness = std::max(trace.max_tardiness, rec.tardiness);
        if (trace.internals && !aborted) {
            trace.internals->windows.push_back(
                {job.index, job.release_row, row, job.shape->length});
        }
        trace.jobs.push_back(rec);
        ++resolved;
        inflight.pop_front();
        active_started = false;
        running.clear();
    }

    // Moves the FIFO head into service; may resolve it on the spot (zero
    // work, or a tardiness budget that expired while it was queued).
    void activate_ready_jobs(std::size_t row) {
        while (!inflight.empty() && !active_started) {
            JobState& job = inflight.front();
            active_started = true;
            job.abort_at =
                job.release + sim.task.deadline + (sim.task.tardiness_bound - delta_prev);
            settle(job);
            if (job.unfinished == 0) {
                record_resolution(job, false, row);
                continue;
            }
            if (now >= job.abort_at) record_resolution(job, true, row);
        }
    }

    void dispatch() {
        JobState* job = active();
        if (!job || !in_service) return;
        while (static_cast<int>(running.size()) < sim.cfg.parallelism && !job->ready.empty()) {
            const int pos = *job->ready.begin();
            job->ready.erase(job->ready.begin());
            running.push_back(pos);
        }
        if (!job->ready.empty() && static_cast<int>(running.size()) < sim.cfg.parallelism) {
            trace.work_conserving = false;
        }
    }

    void run() {
        // Every job resolves within D + rho of its release, so per-job
        // events are bounded by its subjobs plus the supply toggles in that
        // span.
        std::size_t max_subjobs = 1;
        for (const Shape& sh : shapes) max_subjobs = std::max(max_subjobs, sh.ids.size());
        const double busy_span = sim.task.deadline + sim.task.tardiness_bound;
        std::int64_t guard = 0;
        const std::int64_t guard_limit =
            1024 + sim.num_jobs * (static_cast<std::int64_t>(max_subjobs) + 16 +
                                   2 * static_cast<std::int64_t>(
                                           std::ceil(busy_span / sim.cfg.period) + 2));
        resync_supply();
        while (resolved < sim.num_jobs) {
            if (++guard > guard_limit) {
                throw std::runtime_error("simulation exceeded its event budget");
            }

            // Idle: jump straight to the next release.
            if (inflight.empty()) {
                now = static_cast<double>(next_release_index) * sim.task.period;
                resync_supply();
            }

            double t_next = kInf;
            if (!running.empty()) {
                double min_rem = kInf;
                for (int pos : running) {
                    min_rem = std::min(min_rem, inflight.front().remaining[pos]);
                }
                t_next = std::min(t_next, now + min_rem);
            }
            if (!inflight.empty()) t_next = std::min(t_next, next_supply_boundary());
            if (next_release_index < sim.num_jobs) {
                t_next = std::min(t_next,
                                  static_cast<double>(next_release_index) * sim.task.period);
            }
            if (JobState* job = active()) t_next = std::min(t_next, job->abort_at);

            // Advance; rates are constant on (now, t_next).
            const double dt = t_next - now;
            if (dt > 0.0) {
                cum_work += dt * static_cast<double>(running.size());
                if (in_service) cum_serv += dt * sim.cfg.parallelism;
                if (!running.empty()) {
                    JobState& job = inflight.front();
                    for (int pos : running) job.remaining[pos] -= dt;
                }
                now = t_next;
            }

            std::size_t row = 0;
            if (trace.internals) {
                row = trace.internals->event_times.size();
                trace.internals->event_times.push_back(now);
                trace.internals->cum_work.push_back(cum_work);
                trace.internals->cum_serv.push_back(cum_serv);
            }

            // 1. Subjob completions (and the cascade they unlock).
            if (!running.empty()) {
                JobState& job = inflight.front();
                bool finished_any = false;
                for (std::size_t i = 0; i < running.size();) {
                    if (job.remaining[running[i]] <= kRemainingEps) {
                        finish_subjob(job, running[i]);
                        running[i] = running.back();
                        running.pop_back();
                        finished_any = true;
                    } else {
                        ++i;
                    }
                }
                if (finished_any) {
                    settle(job);
                    if (job.unfinished == 0) record_resolution(job, false, row);
                }
            }

            // 2. Abort of the active job at its tardiness budget.
            if (JobState* job = active()) {
                if (now >= job->abort_at && job->unfinished > 0) {
                    record_resolution(*job, true, row);
                }
            }

            // 3. Supply boundaries; suspended subjobs rejoin the ready pool.
            if (!supply.always_on) {
                while (true) {
                    if (in_service && supply.seg_end(seg) == now) {
                        in_service = false;
                        if (!running.empty()) {
                            JobState& job = inflight.front();
                            for (int pos : running) job.ready.insert(pos);
                            running.clear();
                        }
                        ++seg;
                    } else if (!in_service && supply.seg_start(seg) == now) {
                        in_service = true;
                    } else {
                        break;
                    }
                }
            }

            // 4. Releases at this instant.
            while (next_release_index < sim.num_jobs &&
                   static_cast<double>(next_release_index) * sim.task.period == now) {
                JobState job;
                job.index = next_release_index;
                job.release = now;
                job.atom = sample_atom();
                const Shape& sh = shapes[job.atom];
                job.shape = &sh;
                job.remaining = sh.exec;
                job.preds_left = sh.pred_count;
                job.done.assign(sh.ids.size(), 0);
                job.unfinished = static_cast<int>(sh.ids.size());
                for (std::size_t i = 0; i < sh.ids.size(); ++i) {
                    if (sh.pred_count[i] == 0) job.ready.insert(static_cast<int>(i));
                }
                double backlog = 0.0;
                for (const JobState& other : inflight) backlog += other.remaining_volume();
                job.backlog_at_release = backlog;
                job.release_row = row;
                trace.max_backlog = std::max(trace.max_backlog, backlog);
                if (backlog > sim.task.tardiness_bound * sim.cfg.parallelism + kCheckTolerance) {
                    ++trace.backlog_violations;
                }
                inflight.push_back(std::move(job));
                ++next_release_index;
            }

            // 5. FIFO head activation, then list-scheduling dispatch.
            activate_ready_jobs(row);
            dispatch();
        }
    }
};

void finalize_consecutive_stats(SimTrace& trace) {
    const std::int64_t n = static_cast<std::int64_t>(trace.jobs.size());
    for (int k = 1; k <= 3; ++k) {
        for (std::int64_t j = 0; j + k <= n; ++j) {
            const bool run_start = j == 0 || !trace.jobs[j - 1].missed;
            if (!run_start) continue;
            ++trace.consec.eligible[k - 1];
            bool all_missed = true;
            for (std::int64_t i = j; i < j + k; ++i) all_missed &= trace.jobs[i].missed;
            if (all_missed) ++trace.consec.events[k - 1];
        }
    }
}

}  // namespace

std::string to_string(SupplyPattern p) {
    switch (p) {
        case SupplyPattern::front:
            return "front";
        case SupplyPattern::back:
            return "back";
        case SupplyPattern::worst_case:
            return "worst_case";
    }
    return "worst_case";
}

std::optional<SupplyPattern> supply_pattern_from_string(const std::string& s) {
    if (s == "front") return SupplyPattern::front;
    if (s == "back") return SupplyPattern::back;
    if (s == "worst_case") return SupplyPattern::worst_case;
    return std::nullopt;
}

SimTrace run(const SimConfig& sim) {
    require_valid(sim.cfg);
    if (sim.num_jobs < 1) throw std::invalid_argument("num_jobs must be >= 1");
    if (!sim.task.dag) {
        throw std::invalid_argument("simulation needs a dag-backed task");
    }
    const std::vector<std::string> problems = validate_task(sim.task);
    if (!problems.empty()) {
        throw std::invalid_argument("invalid task '" + sim.task.name +
                                    "': " + problems.front());
    }
    const std::vector<DagRealization> realizations = enumerate_realizations(*sim.task.dag);

    Engine engine(sim, realizations);
    engine.run();
    SimTrace trace = std::move(engine.trace);
    finalize_consecutive_stats(trace);
    return trace;
}

std::optional<LemmaCounterexample> check_work_service_lemma(const SimInternals& internals) {
    for (const SimInternals::JobWindow& w : internals.windows) {
        const double allowed = (internals.parallelism - 1) * w.length;
        const double work0 = internals.cum_work[w.first_event];
        const double serv0 = internals.cum_serv[w.first_event];
        for (std::size_t i = w.first_event; i <= w.last_event; ++i) {
            const double work = internals.cum_work[i] - work0;
            const double serv = internals.cum_serv[i] - serv0;
            if (work < serv - allowed - kCheckTolerance) {
                return LemmaCounterexample{
                    w.job, internals.event_times[i] - internals.event_times[w.first_event],
                    work, serv, allowed};
            }
        }
    }
    return std::nullopt;
}

}  // namespace dagreserve
