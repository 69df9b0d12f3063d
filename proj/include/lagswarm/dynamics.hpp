#pragma once

#include <Eigen/Dense>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

namespace lagswarm {

struct SingularInertia : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Euler-Lagrange agent: M(q) qdd + C(q, qd) qd + g(q) + zeta(t) = tau.
/// Evaluators are pure; implementations must keep M symmetric positive
/// definite and C consistent with dM/dt = C + C^T.
class AgentModel {
public:
    virtual ~AgentModel() = default;
    virtual int dof() const = 0;
    virtual Eigen::MatrixXd inertia(const Eigen::VectorXd& q) const = 0;
    virtual Eigen::MatrixXd coriolis(const Eigen::VectorXd& q,
                                     const Eigen::VectorXd& qd) const = 0;
    virtual Eigen::VectorXd gravity(const Eigen::VectorXd& q) const = 0;
    virtual Eigen::VectorXd disturbance(double t) const = 0;
};

struct TwoLinkArmParams {
    double m1, m2;    // link masses [kg]
    double l1, l2;    // link lengths [m]
    double lc1, lc2;  // distances to link centers of mass [m]
    double I1, I2;    // link inertias [kg m^2]
};

/// Planar two-link revolute arm. `agent_index` selects the per-agent
/// sinusoidal disturbance zeta_i(t) = [sin(i*0.1t), cos(i*0.1t)];
/// index 0 disables it.
class TwoLinkArm : public AgentModel {
public:
    TwoLinkArm(TwoLinkArmParams params, int agent_index = 0, double gravity_accel = 9.81);

    int dof() const override { return 2; }
    Eigen::MatrixXd inertia(const Eigen::VectorXd& q) const override;
    Eigen::MatrixXd coriolis(const Eigen::VectorXd& q, const Eigen::VectorXd& qd) const override;
    Eigen::VectorXd gravity(const Eigen::VectorXd& q) const override;
    Eigen::VectorXd disturbance(double t) const override;

    const TwoLinkArmParams& params() const { return params_; }
    double gravity_accel() const { return gravity_accel_; }
    int agent_index() const { return agent_index_; }

private:
    TwoLinkArmParams params_;
    int agent_index_;
    double gravity_accel_;
};

/// Trivial p-DOF model with constant diagonal inertia; no Coriolis, gravity
/// or disturbance. Useful for pinned-down closed-form cases.
class PointMass : public AgentModel {
public:
    PointMass(int dof, double mass) : dof_(dof), mass_(mass) {}
    int dof() const override { return dof_; }
    Eigen::MatrixXd inertia(const Eigen::VectorXd&) const override {
        return mass_ * Eigen::MatrixXd::Identity(dof_, dof_);
    }
    Eigen::MatrixXd coriolis(const Eigen::VectorXd&, const Eigen::VectorXd&) const override {
        return Eigen::MatrixXd::Zero(dof_, dof_);
    }
    Eigen::VectorXd gravity(const Eigen::VectorXd&) const override {
        return Eigen::VectorXd::Zero(dof_);
    }
    Eigen::VectorXd disturbance(double) const override { return Eigen::VectorXd::Zero(dof_); }

private:
    int dof_;
    double mass_;
};

/// Scalar constants bounding the agent dynamics and the scenario:
///   k_m I <= M <= k_M I, ||C|| <= k_C ||qd||, ||g|| <= k_g, ||zeta_i|| <= k_zeta,
///   ||1_n (x) qd0|| <= k_p, ||1_n (x) qdd0|| <= k_q,
///   ||qtilde(0)|| <= k_a, ||qtilde_dot(0)|| <= k_b.
struct BoundConstants {
    double k_m = 0.0;
    double k_M = 0.0;
    double k_C = 0.0;
    double k_g = 0.0;
    double k_zeta = 0.0;
    double k_p = 0.0;
    double k_q = 0.0;
    double k_a = 0.0;
    double k_b = 0.0;
};

struct DynamicsEval {
    Eigen::MatrixXd M;
    Eigen::MatrixXd C;
    Eigen::VectorXd g;
    Eigen::VectorXd zeta;
};

DynamicsEval eval_dynamics(const AgentModel& model, const Eigen::VectorXd& q,
                           const Eigen::VectorXd& qd, double t);

/// qdd = M(q)^-1 (tau - C qd - g - zeta). Throws SingularInertia if M is
/// numerically singular, which signals a broken model.
Eigen::VectorXd forward_accel(const AgentModel& model, const Eigen::VectorXd& q,
                              const Eigen::VectorXd& qd, const Eigen::VectorXd& tau, double t);

/// Axis-aligned sampling box, one [lo, hi] interval per coordinate.
struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
};

/// Samples (q, qd) over the boxes and returns the sampled extrema of the
/// inertia spectrum, the Coriolis gain and the gravity norm, each inflated
/// by `safety_factor`. Only k_m, k_M, k_C, k_g are filled in.
BoundConstants estimate_bounds(const AgentModel& model, const Box& q_box, const Box& qdot_box,
                               int samples, std::mt19937_64& rng, double safety_factor = 1.1);

/// Max over random unit x of |x^T (Mdot_fd - C - C^T) x| with Mdot_fd the
/// central difference of M along the flow direction qd.
double check_skew(const AgentModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                  double fd_step, std::mt19937_64& rng, int probes = 8);

/// Leader reference with exact analytic derivatives.
class LeaderTrajectory {
public:
    virtual ~LeaderTrajectory() = default;
    virtual int dof() const = 0;
    virtual Eigen::VectorXd position(double t) const = 0;
    virtual Eigen::VectorXd velocity(double t) const = 0;
    virtual Eigen::VectorXd acceleration(double t) const = 0;
};

/// Per-coordinate sum of sinusoids: q0_k(t) = sum_j amp * sin(freq * t).
class HarmonicLeader : public LeaderTrajectory {
public:
    struct Term {
        double amplitude;
        double frequency;
    };
    explicit HarmonicLeader(std::vector<std::vector<Term>> terms) : terms_(std::move(terms)) {}

    int dof() const override { return static_cast<int>(terms_.size()); }
    Eigen::VectorXd position(double t) const override;
    Eigen::VectorXd velocity(double t) const override;
    Eigen::VectorXd acceleration(double t) const override;

    const std::vector<std::vector<Term>>& terms() const { return terms_; }

private:
    std::vector<std::vector<Term>> terms_;
};

/// Constant-velocity leader q0(t) = q_start + v * t.
class LinearLeader : public LeaderTrajectory {
public:
    LinearLeader(Eigen::VectorXd q_start, Eigen::VectorXd vel)
        : q_start_(std::move(q_start)), vel_(std::move(vel)) {}
    int dof() const override { return static_cast<int>(q_start_.size()); }
    Eigen::VectorXd position(double t) const override { return q_start_ + t * vel_; }
    Eigen::VectorXd velocity(double) const override { return vel_; }
    Eigen::VectorXd acceleration(double) const override {
        return Eigen::VectorXd::Zero(q_start_.size());
    }

private:
    Eigen::VectorXd q_start_;
    Eigen::VectorXd vel_;
};

/// The default two-coordinate swinging reference used by the bundled scenario.
std::shared_ptr<HarmonicLeader> default_harmonic_leader();

/// Sampled bounds k_p = sup ||1_n (x) qd0||, k_q = sup ||1_n (x) qdd0|| over
/// [0, t_end], inflated by `safety_factor`.
std::pair<double, double> leader_rate_bounds(const LeaderTrajectory& leader, int n_followers,
                                             double t_end, int samples = 4000,
                                             double safety_factor = 1.1);

}  // namespace lagswarm
