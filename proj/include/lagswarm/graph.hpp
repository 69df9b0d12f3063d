#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lagswarm {

struct NoSpanningTree : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Weighted directed graph over nodes {v0, ..., vn}. Node 0 is the leader.
/// weights(i, j) > 0 means there is an edge v_j -> v_i, i.e. node i can
/// read information from node j.
class DirectedGraph {
public:
    explicit DirectedGraph(Eigen::MatrixXd weights);

    static DirectedGraph from_edges(int node_count,
                                    const std::vector<std::tuple<int, int, double>>& edges);

    /// Parses "src dst weight" lines. Blank lines and '#' comments allowed.
    /// Node count is max referenced index + 1 unless a larger hint is given.
    static DirectedGraph parse(std::istream& in, int min_node_count = 0);
    static DirectedGraph load(const std::string& path, int min_node_count = 0);

    void serialize(std::ostream& out) const;

    int node_count() const { return static_cast<int>(weights_.rows()); }
    int follower_count() const { return node_count() - 1; }
    const Eigen::MatrixXd& weights() const { return weights_; }
    double weight(int dst, int src) const { return weights_(dst, src); }

private:
    Eigen::MatrixXd weights_;
};

/// Laplacian with leader-first block layout:
///   [ l00  row0 ]
///   [ L21  L22  ]
/// For a graph with no edges incoming to the leader, the top row is zero.
struct LaplacianPartition {
    Eigen::MatrixXd full;   // (n+1) x (n+1)
    Eigen::VectorXd L21;    // n x 1 (coupling of followers to the leader)
    Eigen::MatrixXd L22;    // n x n (follower-follower block)
};

LaplacianPartition laplacian(const DirectedGraph& g);

/// True iff every node is reachable from `root` along directed edges.
bool has_rooted_spanning_tree(const DirectedGraph& g, int root);

/// Positive diagonal scaling Gamma with Gamma*L22 + L22^T*Gamma > 0,
/// normalized so that max_i gamma_i == 1.
struct GammaCertificate {
    Eigen::VectorXd gamma;   // diagonal entries, all in (0, 1]
    double min_eig = 0.0;    // lambda_min(Gamma*L22 + L22^T*Gamma) after rescaling
    double gamma_bar = 1.0;  // max_i gamma_i (== 1 by normalization)
    double gamma_underbar = 0.0;
};

/// Throws NoSpanningTree when L22 is not a nonsingular M-matrix (the graph
/// lacks a spanning tree rooted at the leader), NumericalFailure when no
/// certificate can be produced.
GammaCertificate solve_gamma(const LaplacianPartition& part);

/// Piecewise-constant topology schedule. Right-continuous: a switch at time t
/// belongs to the new topology.
class SwitchingSignal {
public:
    SwitchingSignal(std::vector<DirectedGraph> topologies,
                    std::vector<std::pair<double, int>> schedule,
                    double dwell_floor = 0.0);

    /// Round-robin over all topologies with the given period, starting at t=0.
    static SwitchingSignal periodic(std::vector<DirectedGraph> topologies,
                                    double period, double t_end);

    const DirectedGraph& topology_at(double t) const;
    int index_at(double t) const;

    const std::vector<DirectedGraph>& topologies() const { return topologies_; }
    const std::vector<std::pair<double, int>>& schedule() const { return schedule_; }
    double dwell_floor() const { return dwell_floor_; }

private:
    std::vector<DirectedGraph> topologies_;
    std::vector<std::pair<double, int>> schedule_;
    double dwell_floor_;
};

}  // namespace lagswarm
