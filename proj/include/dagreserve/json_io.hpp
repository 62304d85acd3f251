#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dagreserve/dag_model.hpp"
#include "dagreserve/miss_analysis.hpp"
#include "dagreserve/optimizer.hpp"
#include "dagreserve/simulator.hpp"

namespace dagreserve {

using Json = nlohmann::ordered_json;

/// Raised on malformed input: bad JSON, unknown fields, wrong types.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Strict graph schema:
/// {"nodes":[{"id":1,"type":"subjob","exec":3.0},
///           {"id":8,"type":"condition","branches":[{"p":0.7,"target":4}]}],
///  "edges":[[1,2]]}
/// Unknown fields are rejected.
ConditionalDag parse_graph_json(const Json& j);
ConditionalDag parse_graph_string(const std::string& text);

struct TaskSet {
    std::vector<TaskSpec> tasks;
    std::optional<int> processors;
};

/// Task-set schema: {"tasks":[{"name":..., "dag":{...} | "distribution":[...],
/// "deadline":..., "period":..., "tardiness_bound":...,
/// "constraints":[{"k":2,"theta":0.05}], "omega":4, "p":25.0}],
/// "processors":4}. "constraints", "p" and "processors" are optional.
TaskSet parse_taskset_json(const Json& j);
TaskSet parse_taskset_string(const std::string& text);
TaskSet load_taskset_file(const std::string& path);  // throws ParseError on I/O too

Json realization_row_json(const DagRealization& r);
Json miss_report_json(const TaskSpec& task, const ReservationConfig& cfg,
                      const MissReport& report, const ConstraintCheck& check);
Json config_menu_json(const std::string& task_name, const std::vector<MenuEntry>& menu,
                      std::optional<std::size_t> selected);
Json utilization_report_json(const UtilizationReport& rep);

Json trace_header_json(const SimConfig& sim);
Json trace_job_json(const JobRecord& job);
Json trace_aggregate_json(const SimTrace& trace);

}  // namespace dagreserve
