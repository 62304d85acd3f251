#include "dagreserve/dag_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dagreserve {

namespace {

constexpr double kBranchSumTolerance = 1e-9;

// Rule ids define the per-node ordering of violations.
enum Rule {
    kRuleNegativeExec = 1,
    kRuleBranchProbability = 2,
    kRuleBranchSum = 3,
    kRuleBranchTargetsDistinct = 4,
    kRuleBranchTargetMissing = 5,
    kRuleSharedBranchTarget = 6,
    kRuleDuplicateNodeId = 7,
    kRuleEdgeEndpointMissing = 8,
    kRuleSelfLoop = 9,
    kRuleDuplicateEdge = 10,
    kRuleCycle = 11,
};

std::string describe(const Node& n) {
    std::ostringstream os;
    os << (n.kind == NodeKind::subjob ? "subjob " : "condition ") << n.id;
    return os.str();
}

}  // namespace

const Node* ConditionalDag::find(NodeId id) const {
    for (const Node& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

std::string to_string(const Violation& v) {
    std::ostringstream os;
    os << "node " << v.node << " rule " << v.rule << ": " << v.message;
    return os.str();
}

std::vector<Violation> validate(const ConditionalDag& dag) {
    std::vector<Violation> out;
    auto add = [&out](NodeId node, int rule, std::string msg) {
        out.push_back({node, rule, std::move(msg)});
    };

    std::map<NodeId, const Node*> index;
    for (const Node& n : dag.nodes) {
        if (!index.emplace(n.id, &n).second) {
            add(n.id, kRuleDuplicateNodeId, "duplicate node id " + std::to_string(n.id));
        }
    }

    // Branch ownership: each node may be the target of at most one condition.
    std::map<NodeId, int> target_owners;
    for (const Node& n : dag.nodes) {
        if (n.kind != NodeKind::condition) continue;
        for (const Branch& b : n.branches) ++target_owners[b.target];
    }

    for (const Node& n : dag.nodes) {
        if (n.kind == NodeKind::subjob) {
            if (!(n.exec_time >= 0.0) || !std::isfinite(n.exec_time)) {
                add(n.id, kRuleNegativeExec,
                    describe(n) + " has a negative or non-finite execution time");
            }
            continue;
        }
        double sum = 0.0;
        std::set<NodeId> seen;
        for (const Branch& b : n.branches) {
            if (!(b.probability > 0.0) || b.probability > 1.0 || !std::isfinite(b.probability)) {
                add(n.id, kRuleBranchProbability,
                    describe(n) + " branch probability outside (0,1]");
            }
            sum += b.probability;
            if (!seen.insert(b.target).second) {
                add(n.id, kRuleBranchTargetsDistinct,
                    describe(n) + " has duplicate branch target " + std::to_string(b.target));
            }
            if (index.find(b.target) == index.end()) {
                add(n.id, kRuleBranchTargetMissing,
                    describe(n) + " branch target " + std::to_string(b.target) +
                        " is not in the graph");
            }
        }
        if (std::abs(sum - 1.0) > kBranchSumTolerance) {
            std::ostringstream os;
            os << describe(n) << " branch probabilities sum to " << sum << ", expected 1";
            add(n.id, kRuleBranchSum, os.str());
        }
    }

    for (const auto& [target, owners] : target_owners) {
        if (owners > 1 && index.count(target)) {
            add(target, kRuleSharedBranchTarget,
                "node " + std::to_string(target) + " is the branch target of " +
                    std::to_string(owners) + " condition nodes");
        }
    }

    std::set<Edge> seen_edges;
    for (const Edge& e : dag.edges) {
        if (index.find(e.first) == index.end() || index.find(e.second) == index.end()) {
            add(e.first, kRuleEdgeEndpointMissing,
                "edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                    ") references a missing node");
            continue;
        }
        if (e.first == e.second) {
            add(e.first, kRuleSelfLoop, "self-loop on node " + std::to_string(e.first));
        }
        if (!seen_edges.insert(e).second) {
            add(e.first, kRuleDuplicateEdge,
                "duplicate edge (" + std::to_string(e.first) + "," +
                    std::to_string(e.second) + ")");
        }
    }

    // Cycle check over precedence edges plus branch edges (a chosen branch
    // executes after its condition resolves). A condition's regular
    // successors additionally wait for whichever subjob its choice lands
    // on, so those landing edges take part in the check too; otherwise a
    // branch choice could turn an acyclic graph into a cyclic instance.
    if (out.empty()) {
        std::map<NodeId, std::set<NodeId>> landing_memo;
        std::set<NodeId> landing_stack;
        std::function<std::set<NodeId>(const Node&)> landing = [&](const Node& cond) {
            auto it = landing_memo.find(cond.id);
            if (it != landing_memo.end()) return it->second;
            if (!landing_stack.insert(cond.id).second) {
                return std::set<NodeId>{};  // branch cycle; Kahn flags it below
            }
            std::set<NodeId> lands;
            for (const Branch& b : cond.branches) {
                const Node* target = index.at(b.target);
                if (target->kind == NodeKind::subjob) {
                    lands.insert(target->id);
                } else {
                    const std::set<NodeId> nested = landing(*target);
                    lands.insert(nested.begin(), nested.end());
                }
            }
            landing_stack.erase(cond.id);
            landing_memo.emplace(cond.id, lands);
            return lands;
        };

        std::map<NodeId, std::vector<NodeId>> succ;
        std::map<NodeId, int> indegree;
        for (const Node& n : dag.nodes) indegree[n.id] = 0;
        auto add_edge = [&](NodeId a, NodeId b) {
            succ[a].push_back(b);
            ++indegree[b];
        };
        for (const Edge& e : dag.edges) {
            add_edge(e.first, e.second);
            const Node* src = index.at(e.first);
            if (src->kind == NodeKind::condition) {
                for (NodeId w : landing(*src)) add_edge(w, e.second);
            }
        }
        for (const Node& n : dag.nodes) {
            if (n.kind != NodeKind::condition) continue;
            for (const Branch& b : n.branches) add_edge(n.id, b.target);
        }
        std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
        for (const auto& [id, deg] : indegree) {
            if (deg == 0) ready.push(id);
        }
        std::size_t visited = 0;
        while (!ready.empty()) {
            NodeId id = ready.top();
            ready.pop();
            ++visited;
            for (NodeId s : succ[id]) {
                if (--indegree[s] == 0) ready.push(s);
            }
        }
        if (visited != dag.nodes.size()) {
            NodeId lowest = 0;
            bool first = true;
            for (const auto& [id, deg] : indegree) {
                if (deg > 0 && (first || id < lowest)) {
                    lowest = id;
                    first = false;
                }
            }
            add(lowest, kRuleCycle, "graph contains a cycle through node " +
                                        std::to_string(lowest));
        }
    }

    std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        return a.node != b.node ? a.node < b.node : a.rule < b.rule;
    });
    return out;
}

double longest_path(const std::vector<std::pair<NodeId, double>>& subjobs,
                    const std::vector<Edge>& edges) {
    if (subjobs.empty()) return 0.0;
    std::map<NodeId, double> exec;
    std::map<NodeId, std::vector<NodeId>> succ;
    std::map<NodeId, int> indegree;
    for (const auto& [id, t] : subjobs) {
        exec[id] = t;
        indegree[id] = 0;
    }
    for (const Edge& e : edges) {
        if (!exec.count(e.first) || !exec.count(e.second)) {
            throw std::invalid_argument("edge endpoint outside the subjob set");
        }
        succ[e.first].push_back(e.second);
        ++indegree[e.second];
    }

    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (const auto& [id, deg] : indegree) {
        if (deg == 0) ready.push(id);
    }
    std::map<NodeId, double> dist;  // heaviest chain ending at the node
    std::size_t visited = 0;
    double best = 0.0;
    while (!ready.empty()) {
        NodeId id = ready.top();
        ready.pop();
        ++visited;
        double d = dist[id] + exec[id];
        best = std::max(best, d);
        for (NodeId s : succ[id]) {
            dist[s] = std::max(dist[s], d);
            if (--indegree[s] == 0) ready.push(s);
        }
    }
    if (visited != subjobs.size()) throw std::invalid_argument("not a DAG");
    return best;
}

namespace {

// Enumeration state: conditions picked so far, keyed by node id.
struct Enumerator {
    const ConditionalDag& dag;
    std::map<NodeId, const Node*> index;
    std::vector<const Node*> conditions;  // ascending id
    std::map<NodeId, NodeId> owner;       // branch target -> owning condition
    std::map<NodeId, std::size_t> choice;  // condition id -> branch index
    std::vector<DagRealization> out;

    explicit Enumerator(const ConditionalDag& d) : dag(d) {
        for (const Node& n : dag.nodes) index.emplace(n.id, &n);
        for (const Node& n : dag.nodes) {
            if (n.kind != NodeKind::condition) continue;
            conditions.push_back(&n);
            for (const Branch& b : n.branches) owner.emplace(b.target, n.id);
        }
        std::sort(conditions.begin(), conditions.end(),
                  [](const Node* a, const Node* b) { return a->id < b->id; });
    }

    // A node is included when it is nobody's branch target, or when its
    // owning condition is included and currently chooses it.
    bool included(NodeId id) const {
        auto it = owner.find(id);
        if (it == owner.end()) return true;
        NodeId cond = it->second;
        if (!included(cond)) return false;
        auto ch = choice.find(cond);
        if (ch == choice.end()) return false;  // owner not decided yet
        return index.at(cond)->branches[ch->second].target == id;
    }

    // Included conditions resolve to the subjob their chosen branch
    // eventually lands on; nested conditions contract transitively.
    NodeId resolve(NodeId id) const {
        const Node* n = index.at(id);
        while (n->kind == NodeKind::condition) {
            n = index.at(n->branches[choice.at(n->id)].target);
        }
        return n->id;
    }

    void emit() {
        DagRealization r;
        for (const auto& [cond, idx] : choice) {
            if (included(cond)) r.probability *= index.at(cond)->branches[idx].probability;
        }
        for (const Node& n : dag.nodes) {
            if (n.kind == NodeKind::subjob && included(n.id)) {
                r.subjobs.emplace_back(n.id, n.exec_time);
            }
        }
        std::sort(r.subjobs.begin(), r.subjobs.end());
        std::set<Edge> edges;
        for (const Edge& e : dag.edges) {
            if (!included(e.first) || !included(e.second)) continue;
            NodeId a = resolve(e.first);
            NodeId b = resolve(e.second);
            if (a != b) edges.insert({a, b});
        }
        r.edges.assign(edges.begin(), edges.end());
        r.volume = 0.0;
        for (const auto& [id, t] : r.subjobs) r.volume += t;
        r.length = longest_path(r.subjobs, r.edges);
        out.push_back(std::move(r));
    }

    void recurse() {
        // Smallest-id condition that is included but not yet decided.
        const Node* next = nullptr;
        for (const Node* c : conditions) {
            if (!choice.count(c->id) && included(c->id)) {
                next = c;
                break;
            }
        }
        if (!next) {
            emit();
            return;
        }
        for (std::size_t i = 0; i < next->branches.size(); ++i) {
            choice[next->id] = i;
            recurse();
        }
        choice.erase(next->id);
    }
};

}  // namespace

std::vector<DagRealization> enumerate_realizations(const ConditionalDag& dag) {
    std::vector<Violation> violations = validate(dag);
    if (!violations.empty()) {
        throw std::invalid_argument("invalid conditional DAG: " +
                                    to_string(violations.front()));
    }
    Enumerator e(dag);
    e.recurse();
    return std::move(e.out);
}

}  // namespace dagreserve
