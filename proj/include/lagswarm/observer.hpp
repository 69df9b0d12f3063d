#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "lagswarm/graph.hpp"

namespace lagswarm {

/// Elementwise sign with sgn(0) = 0.
Eigen::VectorXd sgn(const Eigen::VectorXd& x);

/// Boundary-layer direction x / (||x||_2 + eps); z(0) = 0, ||z||_2 < 1.
Eigen::VectorXd boundary_layer(const Eigen::VectorXd& x, double eps);

/// Per-follower estimates of the leader state. Row i holds follower i+1's
/// estimate (followers are nodes 1..n of the communication graph).
struct ObserverState {
    Eigen::MatrixXd r_hat;  // n x p position estimates
    Eigen::MatrixXd v_hat;  // n x p velocity estimates
    double omega1 = 1.0;
    double omega2 = 1.0;
};

struct ObserverRates {
    Eigen::MatrixXd r_hat_dot;
    Eigen::MatrixXd v_hat_dot;
};

/// Consensus-observer right-hand side driven by the communication graph.
/// A positive weight on node 0 pins a follower to the true leader state.
/// epsilon == 0 uses the exact sign; epsilon > 0 smooths every sign argument
/// with the boundary layer so the full right-hand side is continuous.
ObserverRates observer_rhs(const ObserverState& state, const DirectedGraph& g_b,
                           const Eigen::VectorXd& leader_pos, const Eigen::VectorXd& leader_vel,
                           double epsilon = 0.0);

/// True iff omega2 > k_q / n, the observer gain condition.
bool check_observer_gain(double omega2, double k_q, int n_followers);

/// First sample time after which both error series stay below tol through the
/// end of the trace. Empty optional when the condition is never sustained.
std::optional<double> detect_convergence(const std::vector<double>& times,
                                         const std::vector<double>& pos_err,
                                         const std::vector<double>& vel_err, double tol);

}  // namespace lagswarm
