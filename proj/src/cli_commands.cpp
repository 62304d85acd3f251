#include "dagreserve/cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "dagreserve/json_io.hpp"
#include "dagreserve/optimizer.hpp"

namespace dagreserve::cli {

namespace {

const TaskSpec* find_task(const TaskSet& set, const std::string& name) {
    for (const TaskSpec& t : set.tasks) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

// Rows are printed by descending probability, then ascending volume.
std::vector<DagRealization> sorted_rows(std::vector<DagRealization> rs) {
    std::stable_sort(rs.begin(), rs.end(),
                     [](const DagRealization& a, const DagRealization& b) {
                         if (a.probability != b.probability) {
                             return a.probability > b.probability;
                         }
                         return a.volume < b.volume;
                     });
    return rs;
}

ReservationConfig make_config(const TaskSpec& task, int m, double e,
                              const std::optional<double>& p) {
    double period = task.reservation_period_or_default();
    if (p) period = *p;
    return {m, e, period};
}

}  // namespace

int cmd_validate(const std::string& input, std::ostream& out, std::ostream& err) {
    TaskSet set;
    try {
        set = load_taskset_file(input);
    } catch (const ParseError& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitIoError;
    }
    bool all_valid = true;
    for (const TaskSpec& task : set.tasks) {
        for (const std::string& problem : validate_task(task)) {
            out << "E: " << task.name << ": " << problem << "\n";
            all_valid = false;
        }
    }
    if (all_valid) out << "ok: " << set.tasks.size() << " task(s) valid\n";
    return all_valid ? kExitPass : kExitFail;
}

namespace {

struct ExpectedRow {
    double probability;
    double length;
    double volume;
};

std::vector<ExpectedRow> load_expect_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    Json j = Json::parse(buf.str(), nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("rows") || !j["rows"].is_array()) {
        throw ParseError("expect file needs {\"rows\":[{\"p\":..,\"length\":..,\"volume\":..}]}");
    }
    std::vector<ExpectedRow> rows;
    for (const Json& rj : j["rows"]) {
        rows.push_back({rj.at("p").get<double>(), rj.at("length").get<double>(),
                        rj.at("volume").get<double>()});
    }
    return rows;
}

}  // namespace

int cmd_enumerate(const EnumerateArgs& args, std::ostream& out, std::ostream& err) {
    TaskSet set;
    std::vector<ExpectedRow> expected;
    try {
        set = load_taskset_file(args.input);
        if (args.expect_file) expected = load_expect_file(*args.expect_file);
    } catch (const ParseError& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitIoError;
    }
    const TaskSpec* task = find_task(set, args.task);
    if (!task) {
        err << "error: unknown task '" << args.task << "'\n";
        return kExitFail;
    }
    if (!task->dag) {
        err << "error: task '" << args.task << "' has no dag to enumerate\n";
        return kExitFail;
    }
    std::vector<DagRealization> rows;
    try {
        rows = sorted_rows(enumerate_realizations(*task->dag));
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitFail;
    }

    auto expect_mismatch = [&expected](const DagRealization& r) -> const ExpectedRow* {
        for (const ExpectedRow& e : expected) {
            if (std::abs(e.probability - r.probability) <= 1e-9 &&
                std::abs(e.volume - r.volume) <= 1e-9 &&
                std::abs(e.length - r.length) > 1e-9) {
                return &e;
            }
        }
        return nullptr;
    };

    if (args.json_output) {
        Json rows_json = Json::array();
        for (const DagRealization& r : rows) {
            Json row = realization_row_json(r);
            if (const ExpectedRow* e = expect_mismatch(r)) row["expected_length"] = e->length;
            rows_json.push_back(std::move(row));
        }
        out << Json{{"task", task->name}, {"realizations", std::move(rows_json)}}.dump()
            << "\n";
    } else {
        out << std::left << std::setw(14) << "PROBABILITY" << std::setw(10) << "LENGTH"
            << std::setw(10) << "VOLUME" << "\n";
        bool flagged = false;
        for (const DagRealization& r : rows) {
            std::ostringstream prob, len, vol;
            prob << r.probability;
            len << r.length;
            if (expect_mismatch(r)) {
                len << " *";
                flagged = true;
            }
            vol << r.volume;
            out << std::left << std::setw(14) << prob.str() << std::setw(10) << len.str()
                << std::setw(10) << vol.str() << "\n";
        }
        if (flagged) {
            out << "* length differs from the reference value in " << *args.expect_file
                << "; the computed critical path is reported\n";
        }
    }
    return kExitPass;
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
    TaskSet set;
    try {
        set = load_taskset_file(args.input);
    } catch (const ParseError& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitIoError;
    }
    const TaskSpec* task = find_task(set, args.task);
    if (!task) {
        err << "error: unknown task '" << args.task << "'\n";
        return kExitFail;
    }
    const std::vector<std::string> problems = validate_task(*task);
    if (!problems.empty()) {
        for (const std::string& p : problems) err << "E: " << task->name << ": " << p << "\n";
        return kExitFail;
    }
    const ReservationConfig cfg = make_config(*task, args.m, args.e, args.p);
    if (!cfg.valid()) {
        err << "error: invalid reservation config (need m >= 1 and 0 < E <= P)\n";
        return kExitFail;
    }
    try {
        const MissReport report = analyze(*task, cfg);
        const ConstraintCheck check = check_constraints(*task, report);
        out << miss_report_json(*task, cfg, report, check).dump() << "\n";
        return check.pass ? kExitPass : kExitFail;
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitFail;
    }
}

int cmd_optimize(const OptimizeArgs& args, std::ostream& out, std::ostream& err) {
    TaskSet set;
    try {
        set = load_taskset_file(args.input);
    } catch (const ParseError& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitIoError;
    }

    Json tasks_json = Json::array();
    std::vector<ReservationConfig> selected_configs;
    bool all_feasible = true;
    try {
        for (const TaskSpec& task : set.tasks) {
            OptimizeOptions opts;
            opts.tight_bound = args.tight_bound;
            if (args.eps) {
                opts.eps_factor = *args.eps / task.reservation_period_or_default();
            }
            const std::vector<MenuEntry> menu = optimize_task(task, opts);
            std::optional<std::size_t> selected;
            if (!menu.empty()) {
                selected = select_config(menu);
                selected_configs.push_back(menu[*selected].config());
            } else {
                all_feasible = false;
            }
            tasks_json.push_back(config_menu_json(task.name, menu, selected));
        }
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitFail;
    }

    Json result{{"tasks", std::move(tasks_json)}};
    if (set.processors) {
        result["utilization_hint"] =
            utilization_report_json(utilization_hint(selected_configs, *set.processors));
    }
    const std::string text = result.dump();
    std::ofstream file(args.output);
    if (!file) {
        err << "error: cannot write '" << args.output << "'\n";
        return kExitIoError;
    }
    file << text << "\n";
    out << text << "\n";
    return all_feasible ? kExitPass : kExitFail;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    TaskSet set;
    try {
        set = load_taskset_file(args.input);
    } catch (const ParseError& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitIoError;
    }
    const TaskSpec* task = find_task(set, args.task);
    if (!task) {
        err << "error: unknown task '" << args.task << "'\n";
        return kExitFail;
    }
    const std::optional<SupplyPattern> pattern = supply_pattern_from_string(args.supply);
    if (!pattern) {
        err << "error: --supply must be front, back or worst_case\n";
        return kExitFail;
    }

    SimConfig sim;
    sim.task = *task;
    sim.cfg = make_config(*task, args.m, args.e, args.p);
    sim.num_jobs = args.jobs;
    sim.supply = *pattern;
    sim.record_internals = args.check_lemma;
    if (args.seed) {
        sim.seed = *args.seed;
    } else if (const char* env = std::getenv("DAGRESERVE_SEED")) {
        sim.seed = std::strtoull(env, nullptr, 10);
    }
    if (!sim.cfg.valid()) {
        err << "error: invalid reservation config (need m >= 1 and 0 < E <= P)\n";
        return kExitFail;
    }
    if (sim.num_jobs < 1) {
        err << "error: --jobs must be >= 1\n";
        return kExitFail;
    }

    SimTrace trace;
    try {
        trace = run(sim);
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitFail;
    }

    std::optional<LemmaCounterexample> lemma_violation;
    if (args.check_lemma && trace.internals) {
        lemma_violation = check_work_service_lemma(*trace.internals);
    }

    std::ofstream file(args.output);
    if (!file) {
        err << "error: cannot write '" << args.output << "'\n";
        return kExitIoError;
    }
    file << trace_header_json(sim).dump() << "\n";
    for (const JobRecord& job : trace.jobs) file << trace_job_json(job).dump() << "\n";
    Json aggregate = trace_aggregate_json(trace);
    if (args.check_lemma) aggregate["lemma_holds"] = !lemma_violation.has_value();
    file << aggregate.dump() << "\n";

    bool ok = trace.dominance_violations == 0 && trace.backlog_violations == 0 &&
              trace.work_conserving && !lemma_violation;
    out << "jobs=" << trace.jobs.size() << " misses=" << trace.miss_count
        << " aborted=" << trace.abort_count << " miss_rate=" << trace.miss_rate()
        << " max_tardiness=" << trace.max_tardiness << " max_backlog=" << trace.max_backlog
        << (ok ? " checks=pass" : " checks=FAIL") << "\n";
    if (lemma_violation) {
        err << "error: work/service inequality violated for job " << lemma_violation->job
            << " at offset " << lemma_violation->time << "\n";
    }
    if (trace.dominance_violations > 0) {
        err << "error: " << trace.dominance_violations
            << " job(s) exceeded the analytic response-time bound\n";
    }
    if (trace.backlog_violations > 0) {
        err << "error: " << trace.backlog_violations
            << " release(s) saw backlog above rho*m\n";
    }
    return ok ? kExitPass : kExitFail;
}

}  // namespace dagreserve::cli
