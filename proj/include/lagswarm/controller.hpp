#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "lagswarm/dynamics.hpp"
#include "lagswarm/graph.hpp"

namespace lagswarm {

struct IterationCap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Control gains of the tracking law. epsilon == 0 selects the exact signum
/// law, epsilon > 0 the boundary-layer approximation.
struct GainSet {
    double mu = 1.0;
    double eta = 2.0;   // assumed > 1
    double beta = 1.0;
    double epsilon = 0.0;
};

/// Relative state of one sensing neighbor (node j with edge weight a_ij).
struct Neighbor {
    double weight;
    Eigen::VectorXd q;
    Eigen::VectorXd qd;
};

/// tau_i = -eta * sum_j a_ij ((q_i - q_j) + mu (qd_i - qd_j))
///         - beta * dir((q_i - r_hat_i) + mu (qd_i - v_hat_i))
/// where dir is the elementwise signum (epsilon == 0) or the boundary-layer
/// direction (epsilon > 0).
Eigen::VectorXd tracking_control(const Eigen::VectorXd& q_i, const Eigen::VectorXd& qd_i,
                                 const std::vector<Neighbor>& neighbors,
                                 const Eigen::VectorXd& r_hat_i, const Eigen::VectorXd& v_hat_i,
                                 const GainSet& gains);

/// Every designed constant and derived bound of the gain-design chain, kept
/// for certification and reporting.
struct GainLedger {
    // Graph-dependent spectrum of X = (Gamma L22 + L22^T Gamma) (x) I_p.
    double lambda_min_X = 0.0;
    double lambda_max_X = 0.0;
    double gamma_underbar = 0.0;

    double delta = 0.0;  // small margin with k_m - delta > 0

    // Lower thresholds for mu, in the order they are derived.
    double mu1_star = 0.0;
    double mu2_star = 0.0;
    double mu3_star = 0.0;
    double mu4_star = 0.0;
    double mu5_star = 0.0;
    double mu6_star = 0.0;
    double eta1_star = 0.0;
    double eta2_star = 0.0;

    // Quadratic-form coefficients at mu3*, used for the initial-state boxes.
    double rho1 = 0.0;
    double rho2 = 0.0;
    double rho2_vel = 0.0;  // velocity-block analogue of rho2

    double v_bar_star = 0.0;
    double v_hat_star = 0.0;
    double cal_x1 = 0.0;
    double cal_y1 = 0.0;
    double cal_x = 0.0;  // state box: ||qtilde|| < cal_x for all t
    double cal_y = 0.0;  // state box: ||qtilde_dot|| < cal_y for all t
    double vartheta = 0.0;
    double eps_margin = 0.0;

    double xi = 0.0;       // k_g + k_zeta + k_M * k_q
    double beta_min = 0.0; // (k_C k_p^2 + xi) / gamma_underbar

    double phi = 0.0;           // phi(mu, eta) at the final gains
    double phi_required = 0.0;  // (2 k_C k_p)^2 / (2 eta lmin(X)) + k_C cal_x

    // Feasible coefficient split certifying positive definiteness of the
    // bounding form on the annular region (a = a* + a1, b = b* + b1).
    double split_a_star = 0.0;
    double split_a1 = 0.0;
    double split_b_star = 0.0;
    double split_b1 = 0.0;

    // Collapsed 2x2 envelope spectra of the Lyapunov-like form.
    double lambda_min_N = 0.0;
    double lambda_max_L = 0.0;

    double a3 = 0.0;   // decay-form floor over the invariant box
    double psi = 0.0;  // a3 / lambda_max_L

    // Switched-system quantities (filled by dwell_time across topologies).
    double kappa = 0.0;
    double big_lambda = 0.0;
    double dwell_min = 0.0;

    double omega_radius = 0.0;  // residual-set radius for the gains' epsilon
};

struct InequalityCheck {
    std::string id;
    bool satisfied = false;
    double slack = 0.0;  // lhs - rhs; positive means satisfied with margin
    double lhs = 0.0;
    double rhs = 0.0;
};

struct DesignResult {
    GainSet gains;
    GainLedger ledger;
};

/// Produces gains satisfying the full inequality chain for the given bound
/// constants and sensing-graph certificate, together with the ledger of every
/// derived quantity. Throws IterationCap if the search loop exceeds its bound.
DesignResult design_gains(const BoundConstants& bounds, const GammaCertificate& gamma,
                          const LaplacianPartition& part, int dof);

/// Independent re-evaluation of every inequality of the design chain from the
/// raw inputs. The margins (vartheta, eps_margin) and boxes are taken from the
/// ledger so overridden gains are judged against the designed regions.
std::vector<InequalityCheck> verify_gains(const GainSet& gains, const BoundConstants& bounds,
                                          const GammaCertificate& gamma,
                                          const LaplacianPartition& part, int dof,
                                          const GainLedger& ledger);

/// Recomputes the ledger's state-dependent quantities (phi, envelope spectra,
/// a3, psi, omega radius) for arbitrary gains, e.g. hand-adjusted ones. The
/// boxes and thresholds are carried over from `designed`.
GainLedger ledger_for_gains(const GainSet& gains, const BoundConstants& bounds,
                            const GammaCertificate& gamma, const LaplacianPartition& part,
                            int dof, const GainLedger& designed);

bool all_satisfied(const std::vector<InequalityCheck>& report);

void write_certificate(std::ostream& out, const GainSet& gains, const GainLedger& ledger,
                       const std::vector<InequalityCheck>& report);

/// Radius of the residual set the boundary-layer law converges to:
/// sqrt(beta * gamma_underbar * n * eps / (psi * lambda_min_N)).
double omega_radius(double beta, double gamma_underbar, int n_followers, double epsilon,
                    double psi, double lambda_min_N);

struct TopologyDecay {
    double lambda_min_N;
    double lambda_max_L;
    double a3;
};

struct DwellResult {
    double kappa;
    double big_lambda;
    double pi_d_min;  // log(kappa) / big_lambda
};

/// Dwell-time floor for a set of per-topology decay certificates.
DwellResult dwell_time(const std::vector<TopologyDecay>& topologies);

}  // namespace lagswarm
