#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dagreserve {

using NodeId = std::uint32_t;

/// One probabilistic alternative of a condition node.
struct Branch {
    double probability = 0.0;
    NodeId target = 0;
};

enum class NodeKind { subjob, condition };

/// A graph node: either a subjob with an execution time or a condition
/// node that releases exactly one of its branch targets at runtime.
struct Node {
    NodeId id = 0;
    NodeKind kind = NodeKind::subjob;
    double exec_time = 0.0;        // subjob nodes
    std::vector<Branch> branches;  // condition nodes
};

using Edge = std::pair<NodeId, NodeId>;

/// Probabilistic conditional DAG: subjob/condition nodes plus precedence
/// edges. Branch targets are held inside the condition nodes, not in
/// `edges`.
struct ConditionalDag {
    std::vector<Node> nodes;
    std::vector<Edge> edges;

    const Node* find(NodeId id) const;
};

struct Violation {
    NodeId node = 0;  // subject node; edge source for edge rules
    int rule = 0;
    std::string message;
};

std::string to_string(const Violation& v);

/// Checks every structural invariant; an empty result means the graph is
/// valid. Ordered by (node id, rule id) so output is reproducible.
std::vector<Violation> validate(const ConditionalDag& dag);

/// One concrete DAG instance drawn from the conditional structure.
struct DagRealization {
    double probability = 1.0;
    std::vector<std::pair<NodeId, double>> subjobs;  // (id, exec), sorted by id
    std::vector<Edge> edges;                         // sorted
    double volume = 0.0;
    double length = 0.0;
};

/// Expands all branch combinations of the reachable condition nodes.
/// Output order is lexicographic in the branch-choice indices (condition
/// nodes visited in ascending id order). Throws std::invalid_argument if
/// the graph fails validate().
std::vector<DagRealization> enumerate_realizations(const ConditionalDag& dag);

/// Critical-path length of a plain weighted DAG: maximum summed execution
/// time over any precedence chain. Throws std::invalid_argument on cycles.
double longest_path(const std::vector<std::pair<NodeId, double>>& subjobs,
                    const std::vector<Edge>& edges);

}  // namespace dagreserve
