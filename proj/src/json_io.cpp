#include "dagreserve/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dagreserve {

namespace {

void require_object(const Json& j, const std::string& what) {
    if (!j.is_object()) throw ParseError(what + " must be a JSON object");
}

void reject_unknown_fields(const Json& j, const std::set<std::string>& allowed,
                           const std::string& what) {
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw ParseError("unknown field '" + item.key() + "' in " + what);
        }
    }
}

const Json& require_field(const Json& j, const std::string& key, const std::string& what) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(what + " is missing field '" + key + "'");
    return *it;
}

double as_number(const Json& j, const std::string& what) {
    if (!j.is_number()) throw ParseError(what + " must be a number");
    return j.get<double>();
}

NodeId as_node_id(const Json& j, const std::string& what) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
        throw ParseError(what + " must be a non-negative integer");
    }
    return static_cast<NodeId>(j.get<std::int64_t>());
}

std::int64_t as_integer(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) throw ParseError(what + " must be an integer");
    return j.get<std::int64_t>();
}

}  // namespace

ConditionalDag parse_graph_json(const Json& j) {
    require_object(j, "graph");
    reject_unknown_fields(j, {"nodes", "edges"}, "graph");
    const Json& nodes = require_field(j, "nodes", "graph");
    const Json& edges = require_field(j, "edges", "graph");
    if (!nodes.is_array() || !edges.is_array()) {
        throw ParseError("graph 'nodes' and 'edges' must be arrays");
    }

    ConditionalDag dag;
    for (const Json& nj : nodes) {
        require_object(nj, "node");
        const Json& type_field = require_field(nj, "type", "node");
        if (!type_field.is_string()) throw ParseError("node 'type' must be a string");
        const std::string type = type_field.get<std::string>();
        Node node;
        node.id = as_node_id(require_field(nj, "id", "node"), "node 'id'");
        if (type == "subjob") {
            reject_unknown_fields(nj, {"id", "type", "exec"}, "subjob node");
            node.kind = NodeKind::subjob;
            node.exec_time = as_number(require_field(nj, "exec", "subjob node"), "'exec'");
        } else if (type == "condition") {
            reject_unknown_fields(nj, {"id", "type", "branches"}, "condition node");
            node.kind = NodeKind::condition;
            const Json& branches = require_field(nj, "branches", "condition node");
            if (!branches.is_array()) throw ParseError("'branches' must be an array");
            for (const Json& bj : branches) {
                require_object(bj, "branch");
                reject_unknown_fields(bj, {"p", "target"}, "branch");
                Branch b;
                b.probability = as_number(require_field(bj, "p", "branch"), "branch 'p'");
                b.target = as_node_id(require_field(bj, "target", "branch"), "branch 'target'");
                node.branches.push_back(b);
            }
        } else {
            throw ParseError("node 'type' must be 'subjob' or 'condition'");
        }
        dag.nodes.push_back(std::move(node));
    }

    for (const Json& ej : edges) {
        if (!ej.is_array() || ej.size() != 2) {
            throw ParseError("each edge must be a [src, dst] pair");
        }
        dag.edges.emplace_back(as_node_id(ej[0], "edge source"),
                               as_node_id(ej[1], "edge target"));
    }
    return dag;
}

ConditionalDag parse_graph_string(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("graph is not valid JSON");
    return parse_graph_json(j);
}

namespace {

TaskSpec parse_task_json(const Json& j) {
    require_object(j, "task");
    reject_unknown_fields(j,
                          {"name", "dag", "distribution", "deadline", "period",
                           "tardiness_bound", "constraints", "omega", "p"},
                          "task");
    TaskSpec task;
    const Json& name = require_field(j, "name", "task");
    if (!name.is_string()) throw ParseError("task 'name' must be a string");
    task.name = name.get<std::string>();

    if (j.contains("dag")) task.dag = parse_graph_json(j.at("dag"));
    if (j.contains("distribution")) {
        const Json& dist = j.at("distribution");
        if (!dist.is_array()) throw ParseError("'distribution' must be an array");
        JointDistribution d;
        for (const Json& aj : dist) {
            require_object(aj, "distribution atom");
            reject_unknown_fields(aj, {"p", "volume", "length"}, "distribution atom");
            Atom a;
            a.probability = as_number(require_field(aj, "p", "atom"), "atom 'p'");
            a.volume = as_number(require_field(aj, "volume", "atom"), "atom 'volume'");
            a.length = as_number(require_field(aj, "length", "atom"), "atom 'length'");
            d.atoms.push_back(a);
        }
        std::sort(d.atoms.begin(), d.atoms.end(), [](const Atom& a, const Atom& b) {
            return a.volume != b.volume ? a.volume < b.volume : a.length < b.length;
        });
        task.distribution = std::move(d);
    }
    if (!task.dag && !task.distribution) {
        throw ParseError("task '" + task.name + "' needs a 'dag' or a 'distribution'");
    }

    task.deadline = as_number(require_field(j, "deadline", "task"), "'deadline'");
    task.period = as_number(require_field(j, "period", "task"), "'period'");
    task.tardiness_bound =
        as_number(require_field(j, "tardiness_bound", "task"), "'tardiness_bound'");
    const std::int64_t omega = as_integer(require_field(j, "omega", "task"), "'omega'");
    task.parallelism_cap = static_cast<int>(omega);
    if (j.contains("constraints")) {
        const Json& cs = j.at("constraints");
        if (!cs.is_array()) throw ParseError("'constraints' must be an array");
        for (const Json& cj : cs) {
            require_object(cj, "constraint");
            reject_unknown_fields(cj, {"k", "theta"}, "constraint");
            MissConstraint c;
            c.k = static_cast<int>(as_integer(require_field(cj, "k", "constraint"), "'k'"));
            c.theta = as_number(require_field(cj, "theta", "constraint"), "'theta'");
            task.constraints.push_back(c);
        }
    }
    if (j.contains("p")) task.reservation_period = as_number(j.at("p"), "task 'p'");
    return task;
}

}  // namespace

TaskSet parse_taskset_json(const Json& j) {
    require_object(j, "task set");
    reject_unknown_fields(j, {"tasks", "processors"}, "task set");
    const Json& tasks = require_field(j, "tasks", "task set");
    if (!tasks.is_array()) throw ParseError("'tasks' must be an array");
    TaskSet out;
    std::set<std::string> names;
    for (const Json& tj : tasks) {
        TaskSpec task = parse_task_json(tj);
        if (!names.insert(task.name).second) {
            throw ParseError("duplicate task name '" + task.name + "'");
        }
        out.tasks.push_back(std::move(task));
    }
    if (j.contains("processors")) {
        const std::int64_t m = as_integer(j.at("processors"), "'processors'");
        if (m < 1) throw ParseError("'processors' must be a positive integer");
        out.processors = static_cast<int>(m);
    }
    return out;
}

TaskSet parse_taskset_string(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("task set is not valid JSON");
    return parse_taskset_json(j);
}

TaskSet load_taskset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_taskset_string(buf.str());
}

Json realization_row_json(const DagRealization& r) {
    return Json{{"p", r.probability}, {"length", r.length}, {"volume", r.volume}};
}

Json miss_report_json(const TaskSpec& task, const ReservationConfig& cfg,
                      const MissReport& report, const ConstraintCheck& check) {
    Json bounds = Json::array();
    for (const KBound& b : report.k_bounds) {
        Json entry{{"k", b.k},
                   {"tight_bound", b.tight_bound},
                   {"simple_bound", b.simple_bound}};
        for (const ConstraintVerdict& v : check.verdicts) {
            if (v.k == b.k) {
                entry["theta"] = v.theta;
                entry["pass"] = v.pass;
            }
        }
        bounds.push_back(std::move(entry));
    }
    return Json{{"task", task.name},
                {"config", Json{{"m", cfg.parallelism}, {"E", cfg.budget}, {"P", cfg.period}}},
                {"p_miss_cold", report.p_miss_cold},
                {"p_miss_hot", report.p_miss_hot},
                {"k_bounds", std::move(bounds)},
                {"stable", report.stable},
                {"pass", check.pass}};
}

Json config_menu_json(const std::string& task_name, const std::vector<MenuEntry>& menu,
                      std::optional<std::size_t> selected) {
    Json options = Json::array();
    for (const MenuEntry& e : menu) {
        options.push_back(Json{{"m", e.parallelism},
                               {"E", e.budget},
                               {"P", e.period},
                               {"p_miss_hot", e.p_miss_hot}});
    }
    Json out{{"task", task_name}, {"options", std::move(options)}};
    if (selected) out["selected"] = *selected;
    return out;
}

Json utilization_report_json(const UtilizationReport& rep) {
    return Json{{"total_utilization", rep.total_utilization},
                {"max_parallelism", rep.max_parallelism},
                {"processors", rep.processors},
                {"advisory_pass", rep.fits}};
}

Json trace_header_json(const SimConfig& sim) {
    return Json{{"type", "header"},
                {"task", sim.task.name},
                {"m", sim.cfg.parallelism},
                {"E", sim.cfg.budget},
                {"P", sim.cfg.period},
                {"deadline", sim.task.deadline},
                {"period", sim.task.period},
                {"tardiness_bound", sim.task.tardiness_bound},
                {"jobs", sim.num_jobs},
                {"seed", sim.seed},
                {"supply", to_string(sim.supply)},
                {"generator", "mt19937_64"}};
}

Json trace_job_json(const JobRecord& job) {
    Json out{{"job", job.index},
             {"release", job.release},
             {"atom", job.atom},
             {"resp", nullptr},
             {"tard", job.tardiness},
             {"backlog", job.backlog}};
    if (job.aborted) {
        out["aborted"] = true;
    } else {
        out["resp"] = job.response;
    }
    return out;
}

Json trace_aggregate_json(const SimTrace& trace) {
    Json consec = Json::object();
    for (int k = 1; k <= 3; ++k) {
        consec[std::to_string(k)] = Json{{"events", trace.consec.events[k - 1]},
                                         {"eligible", trace.consec.eligible[k - 1]}};
    }
    return Json{{"type", "aggregate"},
                {"jobs", static_cast<std::int64_t>(trace.jobs.size())},
                {"misses", trace.miss_count},
                {"miss_rate", trace.miss_rate()},
                {"aborted", trace.abort_count},
                {"consecutive_misses", std::move(consec)},
                {"max_tardiness", trace.max_tardiness},
                {"max_backlog", trace.max_backlog},
                {"dominance_violations", trace.dominance_violations},
                {"backlog_violations", trace.backlog_violations},
                {"work_conserving", trace.work_conserving}};
}

}  // namespace dagreserve
