#include "lagswarm/observer.hpp"

#include <cmath>
#include <stdexcept>

namespace lagswarm {

Eigen::VectorXd sgn(const Eigen::VectorXd& x) {
    Eigen::VectorXd s(x.size());
    for (int i = 0; i < x.size(); ++i) {
        s(i) = (x(i) > 0.0) ? 1.0 : (x(i) < 0.0 ? -1.0 : 0.0);
    }
    return s;
}

Eigen::VectorXd boundary_layer(const Eigen::VectorXd& x, double eps) {
    return x / (x.norm() + eps);
}

ObserverRates observer_rhs(const ObserverState& state, const DirectedGraph& g_b,
                           const Eigen::VectorXd& leader_pos, const Eigen::VectorXd& leader_vel,
                           double epsilon) {
    const int n = static_cast<int>(state.r_hat.rows());
    const int p = static_cast<int>(state.r_hat.cols());
    if (g_b.node_count() != n + 1) {
        throw std::invalid_argument("communication graph node count does not match observer");
    }
    if (state.omega1 <= 0.0 || state.omega2 <= 0.0) {
        throw std::invalid_argument("observer gains must be positive");
    }

    ObserverRates rates;
    rates.r_hat_dot.resize(n, p);
    rates.v_hat_dot.resize(n, p);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd pos_dis = Eigen::VectorXd::Zero(p);
        Eigen::VectorXd vel_dis = Eigen::VectorXd::Zero(p);
        const int node = i + 1;
        for (int j = 0; j <= n; ++j) {
            const double b = g_b.weight(node, j);
            if (b <= 0.0) continue;
            if (j == 0) {
                pos_dis += b * (state.r_hat.row(i).transpose() - leader_pos);
                vel_dis += b * (state.v_hat.row(i).transpose() - leader_vel);
            } else {
                pos_dis += b * (state.r_hat.row(i) - state.r_hat.row(j - 1)).transpose();
                vel_dis += b * (state.v_hat.row(i) - state.v_hat.row(j - 1)).transpose();
            }
        }
        const Eigen::VectorXd pos_dir =
            epsilon > 0.0 ? boundary_layer(pos_dis, epsilon) : sgn(pos_dis);
        const Eigen::VectorXd vel_dir =
            epsilon > 0.0 ? boundary_layer(vel_dis, epsilon) : sgn(vel_dis);
        rates.r_hat_dot.row(i) = (state.v_hat.row(i).transpose() - state.omega1 * pos_dir).transpose();
        rates.v_hat_dot.row(i) = (-state.omega2 * vel_dir).transpose();
    }
    return rates;
}

bool check_observer_gain(double omega2, double k_q, int n_followers) {
    if (omega2 <= 0.0 || k_q <= 0.0 || n_followers <= 0) {
        throw std::invalid_argument("observer gain inputs must be positive");
    }
    return omega2 > k_q / n_followers;
}

std::optional<double> detect_convergence(const std::vector<double>& times,
                                         const std::vector<double>& pos_err,
                                         const std::vector<double>& vel_err, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
    if (times.size() != pos_err.size() || times.size() != vel_err.size()) {
        throw std::invalid_argument("trace series lengths differ");
    }
    // Scan backwards for the last sample that violates the tolerance.
    std::ptrdiff_t last_bad = -1;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(times.size()) - 1; i >= 0; --i) {
        if (pos_err[static_cast<size_t>(i)] >= tol || vel_err[static_cast<size_t>(i)] >= tol) {
            last_bad = i;
            break;
        }
    }
    const size_t first_good = static_cast<size_t>(last_bad + 1);
    if (first_good >= times.size()) return std::nullopt;
    return times[first_good];
}

}  // namespace lagswarm
