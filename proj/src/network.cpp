#include "spillnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "spillnet/csv.hpp"
#include "spillnet/errors.hpp"
#include "spillnet/numerics.hpp"

namespace spillnet {

SpilloverNetwork build_network(const SpilloverMatrix& m,
                               const std::map<std::string, NodeMeta>& meta) {
    const Eigen::Index n = m.theta_norm.rows();
    const SpilloverSummary summary = summarize(m);
    SpilloverNetwork net;
    net.directed = true;
    net.nodes.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::string& ticker = m.labels[static_cast<std::size_t>(i)];
        auto it = meta.find(ticker);
        if (it == meta.end())
            throw DataError("build_network: no metadata for label \"" + ticker + "\"");
        net.nodes.push_back({ticker, it->second.subsector, it->second.country, summary.to_others(i)});
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const double w = m.theta_norm(i, j);
            if (w > 0.0)
                net.edges.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>(i), w});
        }
    return net;
}

SpilloverNetwork prune_edges(const SpilloverNetwork& net, double q) {
    if (net.edges.empty() || q <= 0.0) return net;
    std::vector<double> magnitudes;
    magnitudes.reserve(net.edges.size());
    for (const auto& e : net.edges) magnitudes.push_back(std::abs(e.weight));
    const double threshold = quantile(std::move(magnitudes), q);
    SpilloverNetwork out;
    out.nodes = net.nodes;
    out.directed = net.directed;
    for (const auto& e : net.edges)
        if (!(std::abs(e.weight) < threshold)) out.edges.push_back(e);
    return out;
}

SpilloverNetwork to_undirected(const SpilloverNetwork& net) {
    SpilloverNetwork out;
    out.nodes = net.nodes;
    out.directed = false;
    std::map<std::pair<std::size_t, std::size_t>, double> merged;
    for (const auto& e : net.edges) {
        auto key = std::minmax(e.source, e.target);
        merged[{key.first, key.second}] += e.weight;
    }
    for (const auto& [key, weight] : merged) out.edges.push_back({key.first, key.second, weight});
    return out;
}

namespace {

// Symmetric adjacency view: every undirected edge appears in both lists;
// self-loop weight kept separate (matrix diagonal convention).
struct Adjacency {
    std::vector<std::vector<std::pair<int, double>>> neighbors;
    std::vector<double> self_loop;
    std::vector<double> strength;  // k_i = sum_j A_ij (self-loop once)
    double two_m = 0.0;            // sum_i k_i
};

Adjacency make_adjacency(int n, const std::vector<NetworkEdge>& edges) {
    Adjacency adj;
    adj.neighbors.resize(static_cast<std::size_t>(n));
    adj.self_loop.assign(static_cast<std::size_t>(n), 0.0);
    adj.strength.assign(static_cast<std::size_t>(n), 0.0);
    for (const auto& e : edges) {
        const int a = static_cast<int>(e.source);
        const int b = static_cast<int>(e.target);
        if (a == b) {
            adj.self_loop[static_cast<std::size_t>(a)] += e.weight;
        } else {
            adj.neighbors[static_cast<std::size_t>(a)].push_back({b, e.weight});
            adj.neighbors[static_cast<std::size_t>(b)].push_back({a, e.weight});
        }
    }
    for (int i = 0; i < n; ++i) {
        // a self-loop of weight w counts as A_ii = 2w, which keeps the
        // aggregated graph's strengths equal to the community strength sums
        double k = 2.0 * adj.self_loop[static_cast<std::size_t>(i)];
        for (const auto& [j, w] : adj.neighbors[static_cast<std::size_t>(i)]) k += w;
        adj.strength[static_cast<std::size_t>(i)] = k;
        adj.two_m += k;
    }
    return adj;
}

// One local-move phase; returns the community of each node. `order` fixes
// the sweep sequence.
std::vector<int> local_moves(const Adjacency& adj, const std::vector<int>& order) {
    const int n = static_cast<int>(adj.neighbors.size());
    std::vector<int> community(static_cast<std::size_t>(n));
    std::iota(community.begin(), community.end(), 0);
    std::vector<double> sigma_tot = adj.strength;  // per community
    if (adj.two_m <= 0.0) return community;

    bool moved = true;
    int guard = 0;
    while (moved && guard++ < 1000) {
        moved = false;
        for (int node : order) {
            const auto u = static_cast<std::size_t>(node);
            const int old_c = community[u];
            // weights from `node` into each adjacent community
            std::map<int, double> links;
            links[old_c] += 0.0;
            for (const auto& [j, w] : adj.neighbors[u]) links[community[static_cast<std::size_t>(j)]] += w;

            sigma_tot[static_cast<std::size_t>(old_c)] -= adj.strength[u];
            const double k = adj.strength[u];
            int best_c = old_c;
            double best_gain = links[old_c] - sigma_tot[static_cast<std::size_t>(old_c)] * k / adj.two_m;
            for (const auto& [c, w_in] : links) {
                if (c == old_c) continue;
                const double gain = w_in - sigma_tot[static_cast<std::size_t>(c)] * k / adj.two_m;
                if (gain > best_gain + 1e-12 ||
                    (std::abs(gain - best_gain) <= 1e-12 && c < best_c)) {
                    best_gain = gain;
                    best_c = c;
                }
            }
            sigma_tot[static_cast<std::size_t>(best_c)] += adj.strength[u];
            if (best_c != old_c) {
                community[u] = best_c;
                moved = true;
            }
        }
    }
    return community;
}

std::vector<int> renumber(std::vector<int> community) {
    std::map<int, int> dense;
    for (int c : community)
        if (!dense.count(c)) dense[c] = static_cast<int>(dense.size());
    for (int& c : community) c = dense[c];
    return community;
}

}  // namespace

double modularity(const SpilloverNetwork& net, const std::vector<int>& assignment) {
    if (net.directed) throw DataError("modularity: undirected network required");
    const Adjacency adj = make_adjacency(static_cast<int>(net.nodes.size()), net.edges);
    if (adj.two_m <= 0.0) return 0.0;
    std::map<int, double> sigma_in, sigma_tot;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
        sigma_tot[assignment[i]] += adj.strength[i];
        sigma_in[assignment[i]] += 2.0 * adj.self_loop[i];
        for (const auto& [j, w] : adj.neighbors[i])
            if (assignment[static_cast<std::size_t>(j)] == assignment[i]) sigma_in[assignment[i]] += w;
    }
    double q = 0.0;
    for (const auto& [c, s_in] : sigma_in) {
        const double s_tot = sigma_tot[c];
        q += s_in / adj.two_m - (s_tot / adj.two_m) * (s_tot / adj.two_m);
    }
    return q;
}

CommunityPartition louvain(const SpilloverNetwork& net) {
    if (net.directed) throw DataError("louvain: undirected network required");
    const int n = static_cast<int>(net.nodes.size());

    // level-0 sweep order: sorted tickers
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return net.nodes[static_cast<std::size_t>(a)].ticker <
               net.nodes[static_cast<std::size_t>(b)].ticker;
    });

    std::vector<int> assignment(static_cast<std::size_t>(n));
    std::iota(assignment.begin(), assignment.end(), 0);
    std::vector<NetworkEdge> edges = net.edges;
    int level_nodes = n;
    double best_q = modularity(net, assignment);

    for (int level = 0; level < 64; ++level) {
        const Adjacency adj = make_adjacency(level_nodes, edges);
        std::vector<int> community = renumber(local_moves(adj, order));

        // map the aggregate partition back to the original nodes
        std::vector<int> next_assignment(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            next_assignment[static_cast<std::size_t>(i)] =
                community[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])];
        const double q = modularity(net, next_assignment);
        if (q <= best_q + 1e-12) break;
        best_q = q;
        assignment = next_assignment;

        const int n_communities =
            1 + *std::max_element(community.begin(), community.end());
        if (n_communities == level_nodes) break;  // no aggregation possible

        // aggregate: community graph with summed weights; internal edges
        // become self-loops
        std::map<std::pair<int, int>, double> agg;
        for (const auto& e : edges) {
            int a = community[e.source];
            int b = community[e.target];
            if (a > b) std::swap(a, b);
            agg[{a, b}] += e.weight;
        }
        edges.clear();
        for (const auto& [key, w] : agg)
            edges.push_back({static_cast<std::size_t>(key.first),
                             static_cast<std::size_t>(key.second), w});
        level_nodes = n_communities;
        order.resize(static_cast<std::size_t>(level_nodes));
        std::iota(order.begin(), order.end(), 0);
    }

    CommunityPartition out;
    out.assignment = renumber(assignment);
    out.modularity = modularity(net, out.assignment);
    for (int c : out.assignment) ++out.sizes[c];
    return out;
}

std::vector<std::string> central_intersection(
    const std::vector<SpilloverNetwork>& nets,
    const std::vector<CommunityPartition>& partitions) {
    if (nets.size() != partitions.size())
        throw DataError("central_intersection: one partition per network required");
    std::set<std::string> intersection;
    bool first = true;
    for (std::size_t k = 0; k < nets.size(); ++k) {
        const auto& net = nets[k];
        const auto& part = partitions[k];
        if (part.assignment.size() != net.nodes.size())
            throw DataError("central_intersection: partition/network size mismatch");

        struct Group {
            std::size_t count = 0;
            double weight = 0.0;
            std::string min_ticker;
        };
        std::map<int, Group> groups;
        for (std::size_t i = 0; i < net.nodes.size(); ++i) {
            Group& g = groups[part.assignment[i]];
            ++g.count;
            g.weight += net.nodes[i].node_weight;
            if (g.min_ticker.empty() || net.nodes[i].ticker < g.min_ticker)
                g.min_ticker = net.nodes[i].ticker;
        }
        int best_c = -1;
        const Group* best = nullptr;
        for (const auto& [c, g] : groups) {
            if (!best || g.count > best->count ||
                (g.count == best->count &&
                 (g.weight > best->weight ||
                  (g.weight == best->weight && g.min_ticker < best->min_ticker)))) {
                best = &g;
                best_c = c;
            }
        }
        std::set<std::string> members;
        for (std::size_t i = 0; i < net.nodes.size(); ++i)
            if (part.assignment[i] == best_c) members.insert(net.nodes[i].ticker);

        if (first) {
            intersection = std::move(members);
            first = false;
        } else {
            std::set<std::string> kept;
            std::set_intersection(intersection.begin(), intersection.end(), members.begin(),
                                  members.end(), std::inserter(kept, kept.begin()));
            intersection = std::move(kept);
        }
    }
    return {intersection.begin(), intersection.end()};
}

namespace {

// sorted node order with an old-index -> new-index map, for diffable output
struct SortedView {
    std::vector<std::size_t> order;      // new position -> old index
    std::vector<std::size_t> position;   // old index -> new position
};

SortedView sorted_view(const SpilloverNetwork& net) {
    SortedView v;
    v.order.resize(net.nodes.size());
    std::iota(v.order.begin(), v.order.end(), std::size_t{0});
    std::sort(v.order.begin(), v.order.end(), [&](std::size_t a, std::size_t b) {
        return net.nodes[a].ticker < net.nodes[b].ticker;
    });
    v.position.resize(net.nodes.size());
    for (std::size_t pos = 0; pos < v.order.size(); ++pos) v.position[v.order[pos]] = pos;
    return v;
}

std::vector<NetworkEdge> sorted_edges(const SpilloverNetwork& net, const SortedView& v) {
    std::vector<NetworkEdge> edges;
    edges.reserve(net.edges.size());
    for (const auto& e : net.edges)
        edges.push_back({v.position[e.source], v.position[e.target], e.weight});
    std::sort(edges.begin(), edges.end(), [](const NetworkEdge& a, const NetworkEdge& b) {
        if (a.source != b.source) return a.source < b.source;
        if (a.target != b.target) return a.target < b.target;
        return a.weight < b.weight;
    });
    return edges;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

void write_graphml(std::ofstream& out, const SpilloverNetwork& net) {
    const SortedView v = sorted_view(net);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    out << "  <key id=\"d0\" for=\"node\" attr.name=\"subsector\" attr.type=\"string\"/>\n";
    out << "  <key id=\"d1\" for=\"node\" attr.name=\"country\" attr.type=\"string\"/>\n";
    out << "  <key id=\"d2\" for=\"node\" attr.name=\"to_others\" attr.type=\"double\"/>\n";
    out << "  <key id=\"d3\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
    out << "  <graph id=\"G\" edgedefault=\"" << (net.directed ? "directed" : "undirected")
        << "\">\n";
    for (auto idx : v.order) {
        const auto& node = net.nodes[idx];
        out << "    <node id=\"" << xml_escape(node.ticker) << "\">\n";
        out << "      <data key=\"d0\">" << xml_escape(node.subsector) << "</data>\n";
        out << "      <data key=\"d1\">" << xml_escape(node.country) << "</data>\n";
        out << "      <data key=\"d2\">" << format_double(node.node_weight) << "</data>\n";
        out << "    </node>\n";
    }
    for (const auto& e : sorted_edges(net, v)) {
        out << "    <edge source=\"" << xml_escape(net.nodes[v.order[e.source]].ticker)
            << "\" target=\"" << xml_escape(net.nodes[v.order[e.target]].ticker) << "\">"
            << "<data key=\"d3\">" << format_double(e.weight) << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out += "\"";
    return out;
}

void write_dot(std::ofstream& out, const SpilloverNetwork& net) {
    const SortedView v = sorted_view(net);
    out << (net.directed ? "digraph" : "graph") << " spillovers {\n";
    for (auto idx : v.order) {
        const auto& node = net.nodes[idx];
        out << "  " << dot_quote(node.ticker) << " [subsector=" << dot_quote(node.subsector)
            << ", country=" << dot_quote(node.country)
            << ", to_others=" << format_double(node.node_weight) << "];\n";
    }
    const char* arrow = net.directed ? " -> " : " -- ";
    for (const auto& e : sorted_edges(net, v)) {
        out << "  " << dot_quote(net.nodes[v.order[e.source]].ticker) << arrow
            << dot_quote(net.nodes[v.order[e.target]].ticker)
            << " [weight=" << format_double(e.weight) << "];\n";
    }
    out << "}\n";
}

void write_json(std::ofstream& out, const SpilloverNetwork& net) {
    const SortedView v = sorted_view(net);
    nlohmann::json j;
    j["directed"] = net.directed;
    j["nodes"] = nlohmann::json::array();
    for (auto idx : v.order) {
        const auto& node = net.nodes[idx];
        j["nodes"].push_back({{"id", node.ticker},
                              {"subsector", node.subsector},
                              {"country", node.country},
                              {"to_others", node.node_weight}});
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& e : sorted_edges(net, v)) {
        j["edges"].push_back({{"source", net.nodes[v.order[e.source]].ticker},
                              {"target", net.nodes[v.order[e.target]].ticker},
                              {"weight", e.weight}});
    }
    out << j.dump(2) << "\n";
}

}  // namespace

void export_graph(const SpilloverNetwork& net, GraphFormat format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IngestError("export_graph: cannot write " + path);
    switch (format) {
        case GraphFormat::GraphML: write_graphml(out, net); break;
        case GraphFormat::DOT: write_dot(out, net); break;
        case GraphFormat::JSON: write_json(out, net); break;
    }
    if (!out) throw IngestError("export_graph: write failed for " + path);
}

SpilloverNetwork import_graph_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("import_graph_json: cannot open " + path);
    nlohmann::json j;
    in >> j;
    SpilloverNetwork net;
    net.directed = j.at("directed").get<bool>();
    std::map<std::string, std::size_t> index;
    for (const auto& node : j.at("nodes")) {
        NetworkNode n;
        n.ticker = node.at("id").get<std::string>();
        n.subsector = node.at("subsector").get<std::string>();
        n.country = node.at("country").get<std::string>();
        n.node_weight = node.at("to_others").get<double>();
        index[n.ticker] = net.nodes.size();
        net.nodes.push_back(std::move(n));
    }
    for (const auto& edge : j.at("edges")) {
        NetworkEdge e;
        e.source = index.at(edge.at("source").get<std::string>());
        e.target = index.at(edge.at("target").get<std::string>());
        e.weight = edge.at("weight").get<double>();
        net.edges.push_back(e);
    }
    return net;
}

}  // namespace spillnet
