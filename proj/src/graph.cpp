#include "lagswarm/graph.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <tuple>

namespace lagswarm {

DirectedGraph::DirectedGraph(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
    if (weights_.rows() < 1 || weights_.rows() != weights_.cols()) {
        throw std::invalid_argument("adjacency matrix must be square and nonempty");
    }
    for (int i = 0; i < weights_.rows(); ++i) {
        if (weights_(i, i) != 0.0) {
            throw std::invalid_argument("adjacency diagonal must be zero");
        }
        for (int j = 0; j < weights_.cols(); ++j) {
            if (!(weights_(i, j) >= 0.0)) {
                throw std::invalid_argument("adjacency weights must be nonnegative");
            }
        }
    }
}

DirectedGraph DirectedGraph::from_edges(int node_count,
                                        const std::vector<std::tuple<int, int, double>>& edges) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(node_count, node_count);
    for (const auto& [src, dst, weight] : edges) {
        if (src < 0 || src >= node_count || dst < 0 || dst >= node_count) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        w(dst, src) = weight;
    }
    return DirectedGraph(std::move(w));
}

DirectedGraph DirectedGraph::parse(std::istream& in, int min_node_count) {
    std::vector<std::tuple<int, int, double>> edges;
    int max_node = min_node_count - 1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int src, dst;
        double w;
        if (!(ls >> src)) continue;  // blank line
        if (!(ls >> dst >> w)) {
            throw std::invalid_argument("bad edge line " + std::to_string(lineno) +
                                        ": expected 'src dst weight'");
        }
        edges.emplace_back(src, dst, w);
        max_node = std::max({max_node, src, dst});
    }
    return from_edges(max_node + 1, edges);
}

DirectedGraph DirectedGraph::load(const std::string& path, int min_node_count) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return parse(in, min_node_count);
}

void DirectedGraph::serialize(std::ostream& out) const {
    for (int dst = 0; dst < node_count(); ++dst) {
        for (int src = 0; src < node_count(); ++src) {
            if (weights_(dst, src) > 0.0) {
                out << src << ' ' << dst << ' ' << weights_(dst, src) << '\n';
            }
        }
    }
}

LaplacianPartition laplacian(const DirectedGraph& g) {
    const int m = g.node_count();
    const Eigen::MatrixXd& a = g.weights();
    Eigen::MatrixXd L = -a;
    for (int i = 0; i < m; ++i) {
        L(i, i) = a.row(i).sum();
    }
    LaplacianPartition part;
    part.full = L;
    const int n = m - 1;
    part.L21 = L.block(1, 0, n, 1);
    part.L22 = L.block(1, 1, n, n);
    return part;
}

bool has_rooted_spanning_tree(const DirectedGraph& g, int root) {
    const int m = g.node_count();
    if (root < 0 || root >= m) throw std::invalid_argument("root out of range");
    std::vector<char> reached(m, 0);
    reached[root] = 1;
    std::vector<int> frontier{root};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int j : frontier) {
            for (int i = 0; i < m; ++i) {
                if (!reached[i] && g.weight(i, j) > 0.0) {
                    reached[i] = 1;
                    next.push_back(i);
                }
            }
        }
        frontier = std::move(next);
    }
    return std::all_of(reached.begin(), reached.end(), [](char c) { return c != 0; });
}

namespace {

double scaled_min_eig(const Eigen::MatrixXd& L22, const Eigen::VectorXd& gamma) {
    Eigen::MatrixXd s = gamma.asDiagonal() * L22;
    s += s.transpose().eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

GammaCertificate finalize(const Eigen::MatrixXd& L22, Eigen::VectorXd gamma) {
    gamma /= gamma.maxCoeff();
    GammaCertificate cert;
    cert.gamma = gamma;
    cert.min_eig = scaled_min_eig(L22, gamma);
    cert.gamma_bar = gamma.maxCoeff();
    cert.gamma_underbar = gamma.minCoeff();
    return cert;
}

}  // namespace

GammaCertificate solve_gamma(const LaplacianPartition& part) {
    const Eigen::MatrixXd& L22 = part.L22;
    const int n = static_cast<int>(L22.rows());

    // Nonsingular M-matrix check: L22^T p = 1 must have a strictly positive
    // solution. This holds exactly when the graph has a spanning tree rooted
    // at the leader with no edges incoming to it.
    Eigen::FullPivLU<Eigen::MatrixXd> lu(L22.transpose());
    if (!lu.isInvertible()) {
        throw NoSpanningTree("follower block is singular: no spanning tree rooted at the leader");
    }
    Eigen::VectorXd p = lu.solve(Eigen::VectorXd::Ones(n));
    if (p.minCoeff() <= 0.0) {
        throw NoSpanningTree("no positive diagonal scaling exists: leader does not reach all followers");
    }

    if (scaled_min_eig(L22, p) > 0.0) {
        return finalize(L22, p);
    }

    // Fallback: randomized coordinate ascent on lambda_min over the diagonal.
    std::mt19937_64 rng(0x6c6167737761726dULL);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    Eigen::VectorXd best = p;
    double best_eig = scaled_min_eig(L22, best);
    for (int restart = 0; restart < 50 && best_eig <= 0.0; ++restart) {
        Eigen::VectorXd cand(n);
        for (int i = 0; i < n; ++i) cand(i) = unit(rng);
        double cand_eig = scaled_min_eig(L22, cand);
        for (int sweep = 0; sweep < 40; ++sweep) {
            bool improved = false;
            for (int i = 0; i < n; ++i) {
                for (double factor : {0.5, 0.8, 1.25, 2.0}) {
                    Eigen::VectorXd trial = cand;
                    trial(i) = std::clamp(trial(i) * factor, 1e-8, 1.0);
                    double e = scaled_min_eig(L22, trial);
                    if (e > cand_eig) {
                        cand = trial;
                        cand_eig = e;
                        improved = true;
                    }
                }
            }
            if (!improved) break;
        }
        if (cand_eig > best_eig) {
            best = cand;
            best_eig = cand_eig;
        }
    }
    if (best_eig <= 0.0) {
        throw NumericalFailure("could not certify a positive diagonal scaling");
    }
    return finalize(L22, best);
}

SwitchingSignal::SwitchingSignal(std::vector<DirectedGraph> topologies,
                                 std::vector<std::pair<double, int>> schedule,
                                 double dwell_floor)
    : topologies_(std::move(topologies)),
      schedule_(std::move(schedule)),
      dwell_floor_(dwell_floor) {
    if (topologies_.empty() || schedule_.empty()) {
        throw std::invalid_argument("switching signal needs at least one topology and one segment");
    }
    double prev = -1.0;
    for (const auto& [t, idx] : schedule_) {
        if (idx < 0 || idx >= static_cast<int>(topologies_.size())) {
            throw std::invalid_argument("schedule references unknown topology index");
        }
        if (prev >= 0.0 && !(t - prev > dwell_floor_)) {
            throw std::invalid_argument("schedule violates the dwell floor");
        }
        if (t < prev) throw std::invalid_argument("schedule times must be nondecreasing");
        prev = t;
    }
}

SwitchingSignal SwitchingSignal::periodic(std::vector<DirectedGraph> topologies,
                                          double period, double t_end) {
    if (period <= 0.0) throw std::invalid_argument("period must be positive");
    std::vector<std::pair<double, int>> schedule;
    const int m = static_cast<int>(topologies.size());
    int k = 0;
    for (double t = 0.0; t <= t_end; t = ++k * period) {
        schedule.emplace_back(t, k % m);
    }
    return SwitchingSignal(std::move(topologies), std::move(schedule), 0.0);
}

int SwitchingSignal::index_at(double t) const {
    if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
    // Last segment with switch_time <= t; before the first switch, segment 0.
    int idx = schedule_.front().second;
    for (const auto& [st, ti] : schedule_) {
        if (st <= t) idx = ti;
        else break;
    }
    return idx;
}

const DirectedGraph& SwitchingSignal::topology_at(double t) const {
    return topologies_[static_cast<size_t>(index_at(t))];
}

}  // namespace lagswarm
