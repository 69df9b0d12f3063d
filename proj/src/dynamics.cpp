#include "lagswarm/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace lagswarm {

TwoLinkArm::TwoLinkArm(TwoLinkArmParams params, int agent_index, double gravity_accel)
    : params_(params), agent_index_(agent_index), gravity_accel_(gravity_accel) {
    if (params_.m1 <= 0 || params_.m2 <= 0 || params_.l1 <= 0 || params_.l2 <= 0 ||
        params_.lc1 <= 0 || params_.lc2 <= 0 || params_.I1 <= 0 || params_.I2 <= 0) {
        throw std::invalid_argument("arm masses, lengths and inertias must be positive");
    }
}

Eigen::MatrixXd TwoLinkArm::inertia(const Eigen::VectorXd& q) const {
    const auto& p = params_;
    const double c2 = std::cos(q(1));
    Eigen::MatrixXd m(2, 2);
    m(0, 0) = p.m1 * p.lc1 * p.lc1 +
              p.m2 * (p.l1 * p.l1 + p.lc2 * p.lc2 + 2.0 * p.l1 * p.lc2 * c2) + p.I1 + p.I2;
    m(0, 1) = p.m2 * (p.lc2 * p.lc2 + p.l1 * p.lc2 * c2) + p.I2;
    m(1, 0) = m(0, 1);
    m(1, 1) = p.m2 * p.lc2 * p.lc2 + p.I2;
    return m;
}

Eigen::MatrixXd TwoLinkArm::coriolis(const Eigen::VectorXd& q, const Eigen::VectorXd& qd) const {
    const auto& p = params_;
    const double h = -p.m2 * p.l1 * p.lc2 * std::sin(q(1));
    Eigen::MatrixXd c(2, 2);
    c(0, 0) = h * qd(1);
    c(0, 1) = h * (qd(0) + qd(1));
    c(1, 0) = -h * qd(0);
    c(1, 1) = 0.0;
    return c;
}

Eigen::VectorXd TwoLinkArm::gravity(const Eigen::VectorXd& q) const {
    const auto& p = params_;
    const double gbar = gravity_accel_;
    Eigen::VectorXd g(2);
    g(0) = (p.m1 * p.lc1 + p.m2 * p.l1) * gbar * std::cos(q(0)) +
           p.m2 * p.lc2 * gbar * std::cos(q(0) + q(1));
    g(1) = p.m2 * p.lc2 * gbar * std::cos(q(0) + q(1));
    return g;
}

Eigen::VectorXd TwoLinkArm::disturbance(double t) const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
    if (agent_index_ > 0) {
        z(0) = std::sin(agent_index_ * 0.1 * t);
        z(1) = std::cos(agent_index_ * 0.1 * t);
    }
    return z;
}

DynamicsEval eval_dynamics(const AgentModel& model, const Eigen::VectorXd& q,
                           const Eigen::VectorXd& qd, double t) {
    return DynamicsEval{model.inertia(q), model.coriolis(q, qd), model.gravity(q),
                        model.disturbance(t)};
}

Eigen::VectorXd forward_accel(const AgentModel& model, const Eigen::VectorXd& q,
                              const Eigen::VectorXd& qd, const Eigen::VectorXd& tau, double t) {
    const Eigen::MatrixXd m = model.inertia(q);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (!lu.isInvertible()) {
        throw SingularInertia("inertia matrix is numerically singular");
    }
    return lu.solve(tau - model.coriolis(q, qd) * qd - model.gravity(q) - model.disturbance(t));
}

namespace {

Eigen::VectorXd sample_box(const Box& box, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd v(box.lo.size());
    for (int i = 0; i < v.size(); ++i) {
        v(i) = box.lo(i) + unit(rng) * (box.hi(i) - box.lo(i));
    }
    return v;
}

}  // namespace

BoundConstants estimate_bounds(const AgentModel& model, const Box& q_box, const Box& qdot_box,
                               int samples, std::mt19937_64& rng, double safety_factor) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    double min_eig = std::numeric_limits<double>::infinity();
    double max_eig = 0.0;
    double max_c_gain = 0.0;
    double max_g = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Eigen::VectorXd q = sample_box(q_box, rng);
        const Eigen::VectorXd qd = sample_box(qdot_box, rng);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.inertia(q), Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
        max_eig = std::max(max_eig, eig.eigenvalues().maxCoeff());
        const double speed = qd.norm();
        if (speed > 1e-12) {
            const Eigen::MatrixXd c = model.coriolis(q, qd);
            const double c_norm = c.jacobiSvd().singularValues()(0);
            max_c_gain = std::max(max_c_gain, c_norm / speed);
        }
        max_g = std::max(max_g, model.gravity(q).norm());
    }
    BoundConstants b;
    b.k_m = min_eig / safety_factor;
    b.k_M = max_eig * safety_factor;
    b.k_C = std::max(max_c_gain * safety_factor, 1e-9);
    b.k_g = std::max(max_g * safety_factor, 1e-9);
    return b;
}

double check_skew(const AgentModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                  double fd_step, std::mt19937_64& rng, int probes) {
    if (fd_step <= 0.0) throw std::invalid_argument("fd_step must be positive");
    const Eigen::MatrixXd m_plus = model.inertia(q + fd_step * qd);
    const Eigen::MatrixXd m_minus = model.inertia(q - fd_step * qd);
    const Eigen::MatrixXd mdot = (m_plus - m_minus) / (2.0 * fd_step);
    const Eigen::MatrixXd c = model.coriolis(q, qd);
    const Eigen::MatrixXd residual_mat = mdot - c - c.transpose();
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < probes; ++i) {
        Eigen::VectorXd x(q.size());
        for (int k = 0; k < x.size(); ++k) x(k) = gauss(rng);
        if (x.norm() < 1e-12) continue;
        x.normalize();
        worst = std::max(worst, std::abs(x.dot(residual_mat * x)));
    }
    return worst;
}

Eigen::VectorXd HarmonicLeader::position(double t) const {
    Eigen::VectorXd q(dof());
    for (int k = 0; k < dof(); ++k) {
        double v = 0.0;
        for (const Term& term : terms_[static_cast<size_t>(k)]) {
            v += term.amplitude * std::sin(term.frequency * t);
        }
        q(k) = v;
    }
    return q;
}

Eigen::VectorXd HarmonicLeader::velocity(double t) const {
    Eigen::VectorXd q(dof());
    for (int k = 0; k < dof(); ++k) {
        double v = 0.0;
        for (const Term& term : terms_[static_cast<size_t>(k)]) {
            v += term.amplitude * term.frequency * std::cos(term.frequency * t);
        }
        q(k) = v;
    }
    return q;
}

Eigen::VectorXd HarmonicLeader::acceleration(double t) const {
    Eigen::VectorXd q(dof());
    for (int k = 0; k < dof(); ++k) {
        double v = 0.0;
        for (const Term& term : terms_[static_cast<size_t>(k)]) {
            v -= term.amplitude * term.frequency * term.frequency * std::sin(term.frequency * t);
        }
        q(k) = v;
    }
    return q;
}

std::shared_ptr<HarmonicLeader> default_harmonic_leader() {
    std::vector<std::vector<HarmonicLeader::Term>> terms{
        {{0.5, 1.0}, {-0.2, 0.5}},
        {{0.8, 1.0}, {0.2, 2.0}, {0.4 / 3.0, 3.0}, {0.1, 4.0}},
    };
    return std::make_shared<HarmonicLeader>(std::move(terms));
}

std::pair<double, double> leader_rate_bounds(const LeaderTrajectory& leader, int n_followers,
                                             double t_end, int samples, double safety_factor) {
    double max_vel = 0.0;
    double max_acc = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double t = t_end * i / samples;
        max_vel = std::max(max_vel, leader.velocity(t).norm());
        max_acc = std::max(max_acc, leader.acceleration(t).norm());
    }
    const double stack = std::sqrt(static_cast<double>(n_followers));
    return {stack * max_vel * safety_factor, stack * max_acc * safety_factor};
}

}  // namespace lagswarm
