#include "lagswarm/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace lagswarm {

BoundConstants scenario_bounds(const ScenarioConfig& config, uint64_t seed) {
    const int n = config.follower_count();
    const int p = config.dof();
    const HarmonicLeader leader(config.leader_terms);

    // Sampling boxes wide enough for the initial conditions and the leader.
    Eigen::VectorXd q_range = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd qd_range = Eigen::VectorXd::Zero(p);
    for (const AgentSpec& a : config.agents) {
        q_range = q_range.cwiseMax(a.q0.cwiseAbs());
        qd_range = qd_range.cwiseMax(a.qd0.cwiseAbs());
    }
    for (int s = 0; s <= 200; ++s) {
        const double t = config.integration.t_end * s / 200.0;
        q_range = q_range.cwiseMax(leader.position(t).cwiseAbs());
        qd_range = qd_range.cwiseMax(leader.velocity(t).cwiseAbs());
    }
    const Box q_box{-(q_range.array() + 1.0).matrix(), (q_range.array() + 1.0).matrix()};
    const Box qd_box{-(qd_range.array() + 2.0).matrix(), (qd_range.array() + 2.0).matrix()};

    std::mt19937_64 rng(seed);
    BoundConstants worst;
    worst.k_m = std::numeric_limits<double>::infinity();
    double max_zeta = 0.0;
    for (int i = 0; i < n; ++i) {
        const TwoLinkArm model(config.agents[static_cast<size_t>(i)].params, i + 1,
                               config.gravity_accel);
        const BoundConstants b = estimate_bounds(model, q_box, qd_box, 2000, rng);
        worst.k_m = std::min(worst.k_m, b.k_m);
        worst.k_M = std::max(worst.k_M, b.k_M);
        worst.k_C = std::max(worst.k_C, b.k_C);
        worst.k_g = std::max(worst.k_g, b.k_g);
        double z = 0.0;
        for (int s = 0; s <= 400; ++s) {
            z = std::max(z, model.disturbance(config.integration.t_end * s / 400.0).norm());
        }
        max_zeta = std::max(max_zeta, z);
    }
    worst.k_zeta = std::sqrt(static_cast<double>(n)) * std::max(max_zeta, 1e-9);

    const auto [k_p, k_q] = leader_rate_bounds(leader, n, config.integration.t_end);
    worst.k_p = k_p;
    worst.k_q = k_q;

    double a2 = 0.0, b2 = 0.0;
    const Eigen::VectorXd q0_lead = leader.position(0.0);
    const Eigen::VectorXd qd0_lead = leader.velocity(0.0);
    for (const AgentSpec& a : config.agents) {
        a2 += (a.q0 - q0_lead).squaredNorm();
        b2 += (a.qd0 - qd0_lead).squaredNorm();
    }
    worst.k_a = 1.1 * std::sqrt(a2) + 1e-6;
    worst.k_b = 1.1 * std::sqrt(b2) + 1e-6;
    return worst;
}

ScenarioCertificate certify_scenario(const ScenarioConfig& config, bool use_designed_gains,
                                     uint64_t seed) {
    ScenarioCertificate cert;
    cert.bounds = scenario_bounds(config, seed);
    cert.configured_dwell = config.switch_period;

    std::vector<TopologyDecay> decays;
    cert.all_ok = true;
    for (size_t g = 0; g < config.sensing_graphs.size(); ++g) {
        TopologyCertificate tc;
        tc.index = static_cast<int>(g);
        const LaplacianPartition part = laplacian(config.sensing_graphs[g]);
        tc.gamma = solve_gamma(part);

        const DesignResult designed = design_gains(cert.bounds, tc.gamma, part, config.dof());
        if (use_designed_gains) {
            tc.gains = designed.gains;
            tc.ledger = designed.ledger;
        } else {
            tc.gains = config.gains;
            tc.ledger = ledger_for_gains(config.gains, cert.bounds, tc.gamma, part, config.dof(),
                                         designed.ledger);
        }
        tc.checks = verify_gains(tc.gains, cert.bounds, tc.gamma, part, config.dof(), tc.ledger);
        tc.ok = all_satisfied(tc.checks);
        cert.all_ok = cert.all_ok && tc.ok;
        decays.push_back({tc.ledger.lambda_min_N, tc.ledger.lambda_max_L, tc.ledger.a3});
        cert.topologies.push_back(std::move(tc));
    }

    cert.dwell = dwell_time(decays);
    for (TopologyCertificate& tc : cert.topologies) {
        tc.ledger.kappa = cert.dwell.kappa;
        tc.ledger.big_lambda = cert.dwell.big_lambda;
        tc.ledger.dwell_min = cert.dwell.pi_d_min;
    }
    cert.dwell_ok = cert.configured_dwell >= cert.dwell.pi_d_min;
    return cert;
}

void write_scenario_certificate(std::ostream& out, const ScenarioCertificate& cert) {
    out << "scenario certificate\n";
    out << "bound constants: k_m = " << cert.bounds.k_m << ", k_M = " << cert.bounds.k_M
        << ", k_C = " << cert.bounds.k_C << ", k_g = " << cert.bounds.k_g
        << ", k_zeta = " << cert.bounds.k_zeta << "\n";
    out << "                 k_p = " << cert.bounds.k_p << ", k_q = " << cert.bounds.k_q
        << ", k_a = " << cert.bounds.k_a << ", k_b = " << cert.bounds.k_b << "\n";
    for (const TopologyCertificate& tc : cert.topologies) {
        out << "\ntopology " << tc.index << " (gamma_underbar = " << tc.gamma.gamma_underbar
            << ", min_eig = " << tc.gamma.min_eig << "):\n";
        write_certificate(out, tc.gains, tc.ledger, tc.checks);
    }
    out << "\nswitching: kappa = " << cert.dwell.kappa << ", Lambda = " << cert.dwell.big_lambda
        << ", dwell floor = " << cert.dwell.pi_d_min << ", configured dwell = "
        << cert.configured_dwell << " [" << (cert.dwell_ok ? "ok" : "VIOLATED") << "]\n";
    out << "verdict: " << (cert.all_ok ? "all inequalities satisfied" : "violations present")
        << "\n";
}

std::string certificate_to_json(const ScenarioCertificate& cert) {
    nlohmann::json j;
    j["bounds"] = {{"k_m", cert.bounds.k_m}, {"k_M", cert.bounds.k_M},
                   {"k_C", cert.bounds.k_C}, {"k_g", cert.bounds.k_g},
                   {"k_zeta", cert.bounds.k_zeta}, {"k_p", cert.bounds.k_p},
                   {"k_q", cert.bounds.k_q}, {"k_a", cert.bounds.k_a},
                   {"k_b", cert.bounds.k_b}};
    j["topologies"] = nlohmann::json::array();
    for (const TopologyCertificate& tc : cert.topologies) {
        nlohmann::json checks = nlohmann::json::array();
        for (const InequalityCheck& c : tc.checks) {
            checks.push_back({{"id", c.id}, {"satisfied", c.satisfied}, {"slack", c.slack},
                              {"lhs", c.lhs}, {"rhs", c.rhs}});
        }
        std::vector<double> gamma(tc.gamma.gamma.data(),
                                  tc.gamma.gamma.data() + tc.gamma.gamma.size());
        j["topologies"].push_back(
            {{"index", tc.index},
             {"gamma", gamma},
             {"gamma_min_eig", tc.gamma.min_eig},
             {"gains", {{"mu", tc.gains.mu}, {"eta", tc.gains.eta}, {"beta", tc.gains.beta},
                        {"epsilon", tc.gains.epsilon}}},
             {"ledger", {{"lambda_min_X", tc.ledger.lambda_min_X},
                         {"lambda_max_X", tc.ledger.lambda_max_X},
                         {"phi", tc.ledger.phi},
                         {"phi_required", tc.ledger.phi_required},
                         {"cal_x", tc.ledger.cal_x},
                         {"cal_y", tc.ledger.cal_y},
                         {"a3", tc.ledger.a3},
                         {"psi", tc.ledger.psi},
                         {"lambda_min_N", tc.ledger.lambda_min_N},
                         {"lambda_max_L", tc.ledger.lambda_max_L},
                         {"omega_radius", tc.ledger.omega_radius}}},
             {"ok", tc.ok},
             {"checks", checks}});
    }
    j["dwell"] = {{"kappa", cert.dwell.kappa}, {"Lambda", cert.dwell.big_lambda},
                  {"floor", cert.dwell.pi_d_min}, {"configured", cert.configured_dwell},
                  {"ok", cert.dwell_ok}};
    j["all_ok"] = cert.all_ok;
    return j.dump(2) + "\n";
}

}  // namespace lagswarm
