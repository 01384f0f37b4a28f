#pragma once

#include <map>
#include <string>
#include <vector>

#include "spillnet/gfevd.hpp"

namespace spillnet {

struct NetworkNode {
    std::string ticker;
    std::string subsector;
    std::string country;
    double node_weight = 0.0;  // contribution to others of the unpruned matrix
};

struct NetworkEdge {
    std::size_t source = 0;  // shock origin j
    std::size_t target = 0;  // receiver i
    double weight = 0.0;     // theta_norm(i, j)
};

struct SpilloverNetwork {
    std::vector<NetworkNode> nodes;
    std::vector<NetworkEdge> edges;
    bool directed = true;
};

struct NodeMeta {
    std::string subsector;
    std::string country;
};

// One directed edge j -> i per positive off-diagonal entry; node weights
// are the to-others contributions of the full (unpruned) matrix.
SpilloverNetwork build_network(const SpilloverMatrix& m,
                               const std::map<std::string, NodeMeta>& meta);

// Drops edges whose |weight| falls below the q-quantile (inclusive linear
// interpolation) of the |weight| distribution. Nodes are never removed.
SpilloverNetwork prune_edges(const SpilloverNetwork& net, double q = 0.75);

// Undirected edge {i,j} whenever either directed edge exists; weight is
// the sum of the existing directed weights.
SpilloverNetwork to_undirected(const SpilloverNetwork& net);

struct CommunityPartition {
    std::vector<int> assignment;  // node index -> community id (0-based, dense)
    double modularity = 0.0;
    std::map<int, std::size_t> sizes;
};

// Two-phase greedy modularity maximization at resolution 1. The node sweep
// order is fixed by sorted ticker, so the outcome is deterministic.
CommunityPartition louvain(const SpilloverNetwork& net);

// Modularity of an explicit assignment on an undirected network (used by
// louvain itself and by the brute-force test oracle).
double modularity(const SpilloverNetwork& net, const std::vector<int>& assignment);

// Largest community per partition (ties: higher total node weight, then
// lexicographically smallest member), intersected across partitions.
std::vector<std::string> central_intersection(
    const std::vector<SpilloverNetwork>& nets,
    const std::vector<CommunityPartition>& partitions);

enum class GraphFormat { GraphML, DOT, JSON };

void export_graph(const SpilloverNetwork& net, GraphFormat format, const std::string& path);
SpilloverNetwork import_graph_json(const std::string& path);

}  // namespace spillnet
