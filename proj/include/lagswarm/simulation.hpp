#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lagswarm/controller.hpp"
#include "lagswarm/dynamics.hpp"
#include "lagswarm/graph.hpp"
#include "lagswarm/observer.hpp"

namespace lagswarm {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One follower of a scenario: its arm parameters and initial state.
struct AgentSpec {
    TwoLinkArmParams params;
    Eigen::VectorXd q0;
    Eigen::VectorXd qd0;
};

struct IntegrationSpec {
    double dt = 1e-3;
    double t_end = 30.0;
    int record_stride = 10;  // record every record_stride-th step
};

/// Complete description of a simulation run, loadable from JSON.
struct ScenarioConfig {
    std::string name = "scenario";
    std::vector<AgentSpec> agents;
    std::vector<std::vector<HarmonicLeader::Term>> leader_terms;
    std::vector<DirectedGraph> sensing_graphs;  // switched round-robin
    std::vector<DirectedGraph> comm_graphs;     // switched in lockstep
    double switch_period = 1.0;
    std::optional<std::pair<double, double>> blackout;  // comm loss on [t0, t1)
    GainSet gains;
    double omega1 = 1.0;
    double omega2 = 5.0;
    IntegrationSpec integration;
    double convergence_tol = 5e-3;
    double gravity_accel = 9.81;

    static ScenarioConfig from_json_text(const std::string& text);
    static ScenarioConfig load(const std::string& path);
    std::string to_json_text() const;
    void save(const std::string& path) const;

    int follower_count() const { return static_cast<int>(agents.size()); }
    int dof() const { return agents.empty() ? 0 : static_cast<int>(agents[0].q0.size()); }
    void validate() const;  // throws ScenarioError on inconsistency
};

/// Recorded time series of one run. All per-agent blocks are n x p matrices.
struct SimTrace {
    int n = 0;
    int p = 0;
    std::vector<double> t;
    std::vector<Eigen::VectorXd> leader_q, leader_qd;
    std::vector<Eigen::MatrixXd> q, qd, r_hat, v_hat, tau;
    std::vector<double> lyapunov;

    size_t samples() const { return t.size(); }

    /// Stacked norm across agents of the observer estimation errors.
    std::vector<double> observer_pos_err() const;
    std::vector<double> observer_vel_err() const;
    /// Stacked norm across agents of the tracking errors against the leader.
    std::vector<double> tracking_pos_err() const;
    std::vector<double> tracking_vel_err() const;
    /// Per-agent tracking position error norm.
    std::vector<double> agent_pos_err(int agent) const;

    void save_csv(const std::string& path) const;
    static SimTrace load_csv(const std::string& path);
};

struct SimResult {
    SimTrace trace;
    bool diverged = false;     // a non-finite state was produced
    double diverged_time = 0.0;
};

/// Fixed-step RK4 integrator for the closed loop of followers, observer and
/// tracking law under the switched topologies. Sign terms are evaluated
/// pointwise at every substep state.
class Engine {
public:
    explicit Engine(ScenarioConfig config);

    SimResult run() const;

    const ScenarioConfig& config() const { return config_; }
    const SwitchingSignal& sensing_signal() const { return sensing_; }

    /// Lyapunov-like value of the tracking error under the topology active at
    /// time t; falls back to an identity scaling if the active follower block
    /// has no diagonal certificate.
    double lyapunov_value(double t, const Eigen::MatrixXd& q, const Eigen::MatrixXd& qd) const;

    Eigen::VectorXd initial_state() const;
    Eigen::VectorXd rhs(double t, const Eigen::VectorXd& x) const;

    /// Right-hand side with the switching decisions frozen at `t_frozen`.
    /// Integration steps freeze them at the step's left endpoint so a stage
    /// landing exactly on a switch instant stays on the segment being
    /// integrated; switches are grid-aligned, so none occur mid-step.
    Eigen::VectorXd rhs_frozen(double t, double t_frozen, const Eigen::VectorXd& x) const;

private:
    struct TopologyCache {
        Eigen::MatrixXd x_form;     // Gamma L22 + L22^T Gamma
        Eigen::VectorXd gamma;      // diagonal scaling (ones on fallback)
    };

    bool in_blackout(double t) const;

    ScenarioConfig config_;
    std::vector<std::shared_ptr<TwoLinkArm>> models_;
    std::shared_ptr<HarmonicLeader> leader_;
    SwitchingSignal sensing_;
    SwitchingSignal comm_;
    DirectedGraph comm_silent_;  // all-zero graph used during the blackout
    std::vector<TopologyCache> cache_;
};

/// The bundled five-arm reference scenario: heterogeneous two-link arms, three
/// rotating spanning-tree topologies at 1 Hz and a communication blackout on
/// [10, 20).
ScenarioConfig make_default_scenario();

}  // namespace lagswarm
