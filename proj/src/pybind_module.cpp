#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dagreserve/json_io.hpp"
#include "dagreserve/optimizer.hpp"
#include "dagreserve/simulator.hpp"

namespace py = pybind11;
using namespace dagreserve;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Probabilistic conditional DAG tasks on reservation systems: "
              "enumeration, response-time bounds, miss analysis, reservation "
              "synthesis and a deterministic simulator.";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<ConditionalDag>(m, "ConditionalDag")
        .def("__repr__", [](const ConditionalDag& d) {
            return "<ConditionalDag with " + std::to_string(d.nodes.size()) + " nodes, " +
                   std::to_string(d.edges.size()) + " edges>";
        });

    py::class_<DagRealization>(m, "DagRealization")
        .def_readonly("probability", &DagRealization::probability)
        .def_readonly("volume", &DagRealization::volume)
        .def_readonly("length", &DagRealization::length)
        .def_readonly("subjobs", &DagRealization::subjobs)
        .def_readonly("edges", &DagRealization::edges);

    py::class_<Atom>(m, "Atom")
        .def_readonly("probability", &Atom::probability)
        .def_readonly("volume", &Atom::volume)
        .def_readonly("length", &Atom::length);

    py::class_<JointDistribution>(m, "JointDistribution")
        .def_readonly("atoms", &JointDistribution::atoms);

    py::class_<WeightedValue>(m, "WeightedValue")
        .def_readonly("probability", &WeightedValue::probability)
        .def_readonly("value", &WeightedValue::value);

    py::class_<DiscreteRV>(m, "DiscreteRV").def_readonly("atoms", &DiscreteRV::atoms);

    py::class_<ReservationConfig>(m, "ReservationConfig")
        .def(py::init<int, double, double>(), py::arg("m"), py::arg("budget"),
             py::arg("period"))
        .def_readwrite("m", &ReservationConfig::parallelism)
        .def_readwrite("budget", &ReservationConfig::budget)
        .def_readwrite("period", &ReservationConfig::period)
        .def("utilization", &ReservationConfig::utilization)
        .def("__repr__", [](const ReservationConfig& c) {
            return "<ReservationConfig m=" + std::to_string(c.parallelism) +
                   " E=" + std::to_string(c.budget) + " P=" + std::to_string(c.period) + ">";
        });

    py::class_<MissConstraint>(m, "MissConstraint")
        .def(py::init<int, double>(), py::arg("k"), py::arg("theta"))
        .def_readwrite("k", &MissConstraint::k)
        .def_readwrite("theta", &MissConstraint::theta);

    py::class_<TaskSpec>(m, "TaskSpec")
        .def_readonly("name", &TaskSpec::name)
        .def_readwrite("deadline", &TaskSpec::deadline)
        .def_readwrite("period", &TaskSpec::period)
        .def_readwrite("tardiness_bound", &TaskSpec::tardiness_bound)
        .def_readwrite("constraints", &TaskSpec::constraints)
        .def_readwrite("omega", &TaskSpec::parallelism_cap)
        .def("__repr__",
             [](const TaskSpec& t) { return "<TaskSpec '" + t.name + "'>"; });

    py::class_<KBound>(m, "KBound")
        .def_readonly("k", &KBound::k)
        .def_readonly("tight_bound", &KBound::tight_bound)
        .def_readonly("simple_bound", &KBound::simple_bound);

    py::class_<MissReport>(m, "MissReport")
        .def_readonly("p_miss_cold", &MissReport::p_miss_cold)
        .def_readonly("p_miss_hot", &MissReport::p_miss_hot)
        .def_readonly("k_bounds", &MissReport::k_bounds)
        .def_readonly("stable", &MissReport::stable);

    py::class_<ConstraintVerdict>(m, "ConstraintVerdict")
        .def_readonly("k", &ConstraintVerdict::k)
        .def_readonly("theta", &ConstraintVerdict::theta)
        .def_readonly("bound", &ConstraintVerdict::bound)
        .def_readonly("passed", &ConstraintVerdict::pass);

    py::class_<MenuEntry>(m, "MenuEntry")
        .def_readonly("m", &MenuEntry::parallelism)
        .def_readonly("budget", &MenuEntry::budget)
        .def_readonly("period", &MenuEntry::period)
        .def_readonly("p_miss_hot", &MenuEntry::p_miss_hot)
        .def("config", &MenuEntry::config);

    py::class_<JobRecord>(m, "JobRecord")
        .def_readonly("index", &JobRecord::index)
        .def_readonly("release", &JobRecord::release)
        .def_readonly("atom", &JobRecord::atom)
        .def_readonly("aborted", &JobRecord::aborted)
        .def_readonly("response", &JobRecord::response)
        .def_readonly("tardiness", &JobRecord::tardiness)
        .def_readonly("backlog", &JobRecord::backlog)
        .def_readonly("missed", &JobRecord::missed);

    py::class_<SimTrace>(m, "SimTrace")
        .def_readonly("generator", &SimTrace::generator)
        .def_readonly("jobs", &SimTrace::jobs)
        .def_readonly("miss_count", &SimTrace::miss_count)
        .def_readonly("abort_count", &SimTrace::abort_count)
        .def_readonly("max_tardiness", &SimTrace::max_tardiness)
        .def_readonly("max_backlog", &SimTrace::max_backlog)
        .def_readonly("dominance_violations", &SimTrace::dominance_violations)
        .def_readonly("backlog_violations", &SimTrace::backlog_violations)
        .def_readonly("work_conserving", &SimTrace::work_conserving)
        .def("miss_rate", &SimTrace::miss_rate)
        .def("lemma_holds", [](const SimTrace& t) -> py::object {
            if (!t.internals) return py::none();
            return py::bool_(!check_work_service_lemma(*t.internals).has_value());
        });

    m.def("parse_graph", &parse_graph_string, py::arg("text"),
          "Parse the strict graph JSON schema into a ConditionalDag.");
    m.def(
        "validate",
        [](const ConditionalDag& dag) {
            std::vector<std::string> out;
            for (const Violation& v : dagreserve::validate(dag)) out.push_back(to_string(v));
            return out;
        },
        py::arg("dag"), "All violated invariants; an empty list means valid.");
    m.def("enumerate_realizations", &enumerate_realizations, py::arg("dag"));
    m.def("longest_path", &longest_path, py::arg("subjobs"), py::arg("edges"));

    m.def("from_realizations", &from_realizations, py::arg("realizations"));
    m.def("joint_cdf", &joint_cdf, py::arg("distribution"), py::arg("u"), py::arg("v"));
    m.def("workload_rv", &workload_rv, py::arg("distribution"), py::arg("m"),
          py::arg("backlog"));
    m.def("response_time_rv", &response_time_rv, py::arg("distribution"), py::arg("config"),
          py::arg("backlog"));
    m.def("exceedance", &exceedance, py::arg("rv"), py::arg("threshold"));
    m.def("response_time_cdf", &response_time_cdf_formula, py::arg("distribution"),
          py::arg("config"), py::arg("backlog"), py::arg("u"));

    m.def("sbf", &sbf, py::arg("config"), py::arg("t"));
    m.def("inverse_sbf", &inverse_sbf, py::arg("config"), py::arg("workload"));
    m.def("response_time_bound", &response_time_bound, py::arg("config"), py::arg("volume"),
          py::arg("length"), py::arg("backlog"));

    m.def(
        "parse_taskset",
        [](const std::string& text) { return parse_taskset_string(text).tasks; },
        py::arg("text"), "Parse a task-set JSON document into a list of TaskSpec.");
    m.def("validate_task", &validate_task, py::arg("task"));
    m.def(
        "analyze",
        [](const TaskSpec& task, const ReservationConfig& cfg) { return analyze(task, cfg); },
        py::arg("task"), py::arg("config"));
    m.def(
        "check_constraints",
        [](const TaskSpec& task, const MissReport& rep, bool use_tight) {
            const ConstraintCheck check = check_constraints(task, rep, use_tight);
            return py::make_tuple(check.pass, check.verdicts);
        },
        py::arg("task"), py::arg("report"), py::arg("use_tight") = true);

    m.def(
        "optimize_task",
        [](const TaskSpec& task, bool tight_bound, double eps_factor) {
            OptimizeOptions opts;
            opts.tight_bound = tight_bound;
            opts.eps_factor = eps_factor;
            return optimize_task(task, opts);
        },
        py::arg("task"), py::arg("tight_bound") = false, py::arg("eps_factor") = 1e-6);
    m.def("select_config", &select_config, py::arg("menu"));

    m.def(
        "simulate",
        [](const TaskSpec& task, const ReservationConfig& cfg, std::int64_t jobs,
           std::uint64_t seed, const std::string& supply, bool check_lemma) {
            SimConfig sim;
            sim.task = task;
            sim.cfg = cfg;
            sim.num_jobs = jobs;
            sim.seed = seed;
            const std::optional<SupplyPattern> pattern = supply_pattern_from_string(supply);
            if (!pattern) throw std::invalid_argument("supply must be front|back|worst_case");
            sim.supply = *pattern;
            sim.record_internals = check_lemma;
            return run(sim);
        },
        py::arg("task"), py::arg("config"), py::arg("jobs"), py::arg("seed") = 0,
        py::arg("supply") = "worst_case", py::arg("check_lemma") = false,
        "Deterministic discrete-event simulation; identical arguments give "
        "identical traces.");
}
