#pragma once

#include <random>
#include <tuple>
#include <vector>

#include "lagswarm/dynamics.hpp"
#include "lagswarm/graph.hpp"

namespace testutil {

// Random digraph over {0..node_count-1} that contains a spanning tree rooted
// at node 0: every node i >= 1 gets a parent among {0..i-1}, plus optional
// extra edges that never point into the root.
inline lagswarm::DirectedGraph random_rooted_graph(std::mt19937_64& rng, int node_count,
                                                   double extra_edge_prob = 0.2) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> wdist(0.5, 5.0);
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 1; i < node_count; ++i) {
        std::uniform_int_distribution<int> parent(0, i - 1);
        edges.emplace_back(parent(rng), i, wdist(rng));
    }
    for (int src = 0; src < node_count; ++src) {
        for (int dst = 1; dst < node_count; ++dst) {
            if (src != dst && unit(rng) < extra_edge_prob) {
                edges.emplace_back(src, dst, wdist(rng));
            }
        }
    }
    return lagswarm::DirectedGraph::from_edges(node_count, edges);
}

// Reachability oracle by boolean transitive closure.
inline bool reaches_all(const lagswarm::DirectedGraph& g, int root) {
    const int m = g.node_count();
    std::vector<std::vector<char>> reach(m, std::vector<char>(m, 0));
    for (int i = 0; i < m; ++i) {
        reach[i][i] = 1;
        for (int j = 0; j < m; ++j) {
            if (g.weight(i, j) > 0.0) reach[j][i] = 1;  // j -> i traversal: from j
        }
    }
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
            }
        }
    }
    for (int i = 0; i < m; ++i) {
        if (!reach[root][i]) return false;
    }
    return true;
}

inline const std::vector<lagswarm::TwoLinkArmParams>& reference_arm_params() {
    static const std::vector<lagswarm::TwoLinkArmParams> params = {
        {0.5, 0.4, 0.4, 0.3, 0.2, 0.15, 0.1, 0.05},
        {0.2, 0.4, 0.6, 0.1, 0.35, 0.08, 0.15, 0.08},
        {0.5, 0.4, 0.4, 0.3, 0.2, 0.15, 0.1, 0.05},
        {1.0, 0.6, 0.45, 0.8, 0.2, 0.4, 0.15, 0.5},
        {0.25, 0.4, 0.8, 0.5, 0.3, 0.1, 0.45, 0.15},
    };
    return params;
}

}  // namespace testutil
