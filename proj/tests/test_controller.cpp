#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "lagswarm/controller.hpp"

using namespace lagswarm;

namespace {

// Small follower chain with healthy bound constants; feasible for the design
// search and cheap enough to run repeatedly.
struct DesignFixture {
    DirectedGraph g = DirectedGraph::from_edges(3, {{0, 1, 2.0}, {1, 2, 1.5}});
    LaplacianPartition part = laplacian(g);
    GammaCertificate cert = solve_gamma(part);
    BoundConstants bounds = [] {
        BoundConstants b;
        b.k_m = 0.05;
        b.k_M = 0.6;
        b.k_C = 0.3;
        b.k_g = 8.0;
        b.k_zeta = 1.5;
        b.k_p = 3.0;
        b.k_q = 4.0;
        b.k_a = 2.0;
        b.k_b = 2.0;
        return b;
    }();
};

}  // namespace

TEST_CASE("tracking control matches the written law") {
    GainSet gains{2.0, 3.0, 5.0, 0.0};
    Eigen::VectorXd q(2), qd(2), rh(2), vh(2);
    q << 1.0, -1.0;
    qd << 0.5, 0.0;
    rh << 0.0, -1.0;
    vh << 0.5, 1.0;
    std::vector<Neighbor> nbrs;
    nbrs.push_back({2.0, Eigen::Vector2d(0.5, 0.0), Eigen::Vector2d(0.0, 0.0)});

    Eigen::VectorXd tau = tracking_control(q, qd, nbrs, rh, vh, gains);

    // Consensus part: -eta * a * ((q - qj) + mu (qd - qdj))
    //   = -3 * 2 * ((0.5, -1) + 2 (0.5, 0)) = -6 * (1.5, -1).
    // Signum part: s = (q - rh) + mu (qd - vh) = (1, 0) + 2 (0, -1) = (1, -2),
    //   -beta * sgn(s) = -5 * (1, -1).
    CHECK(tau(0) == doctest::Approx(-6.0 * 1.5 - 5.0));
    CHECK(tau(1) == doctest::Approx(6.0 + 5.0));

    // Boundary-layer variant divides by ||s|| + eps instead.
    gains.epsilon = 0.5;
    Eigen::VectorXd tau_bl = tracking_control(q, qd, nbrs, rh, vh, gains);
    const double denom = std::sqrt(5.0) + 0.5;
    CHECK(tau_bl(0) == doctest::Approx(-6.0 * 1.5 - 5.0 * 1.0 / denom));
    CHECK(tau_bl(1) == doctest::Approx(6.0 + 5.0 * 2.0 / denom));
}

TEST_CASE("tracking control vanishes at perfect tracking") {
    GainSet gains{1.5, 16.0, 25.0, 0.0};
    Eigen::VectorXd q(2), qd(2);
    q << 0.3, -0.2;
    qd << 0.1, 0.1;
    std::vector<Neighbor> nbrs;
    nbrs.push_back({5.0, q, qd});
    Eigen::VectorXd tau = tracking_control(q, qd, nbrs, q, qd, gains);
    CHECK(tau.norm() == doctest::Approx(0.0));
}

TEST_CASE("designed gains pass independent verification") {
    DesignFixture f;
    DesignResult res = design_gains(f.bounds, f.cert, f.part, 2);

    CHECK(res.gains.mu > 0.0);
    CHECK(res.gains.eta > 1.0);
    CHECK(res.gains.beta > res.ledger.beta_min);
    CHECK(res.ledger.cal_x > res.ledger.vartheta);
    CHECK(res.ledger.phi > res.ledger.phi_required);
    CHECK(res.ledger.a3 > 0.0);

    auto report = verify_gains(res.gains, f.bounds, f.cert, f.part, 2, res.ledger);
    CHECK(all_satisfied(report));
    for (const auto& chk : report) {
        INFO(chk.id);
        CHECK(chk.satisfied);
        CHECK(chk.slack > 0.0);
    }
}

TEST_CASE("verification flags a broken beta") {
    DesignFixture f;
    DesignResult res = design_gains(f.bounds, f.cert, f.part, 2);
    GainSet weak = res.gains;
    weak.beta = 0.5 * res.ledger.beta_min;
    GainLedger ledger = ledger_for_gains(weak, f.bounds, f.cert, f.part, 2, res.ledger);
    auto report = verify_gains(weak, f.bounds, f.cert, f.part, 2, ledger);
    CHECK_FALSE(all_satisfied(report));
    bool beta_flagged = false;
    for (const auto& chk : report) {
        if (chk.id == "beta-floor") {
            beta_flagged = true;
            CHECK_FALSE(chk.satisfied);
        }
    }
    CHECK(beta_flagged);
}

TEST_CASE("verification flags an undersized mu") {
    DesignFixture f;
    DesignResult res = design_gains(f.bounds, f.cert, f.part, 2);
    GainSet weak = res.gains;
    weak.mu = 0.5 * res.ledger.mu4_star;
    GainLedger ledger = ledger_for_gains(weak, f.bounds, f.cert, f.part, 2, res.ledger);
    auto report = verify_gains(weak, f.bounds, f.cert, f.part, 2, ledger);
    CHECK_FALSE(all_satisfied(report));
}

TEST_CASE("certificate report writes one line per inequality") {
    DesignFixture f;
    DesignResult res = design_gains(f.bounds, f.cert, f.part, 2);
    auto report = verify_gains(res.gains, f.bounds, f.cert, f.part, 2, res.ledger);
    std::ostringstream out;
    write_certificate(out, res.gains, res.ledger, report);
    const std::string text = out.str();
    for (const auto& chk : report) {
        CHECK(text.find(chk.id) != std::string::npos);
    }
}

TEST_CASE("residual radius scales with the square root of epsilon") {
    const double r1 = omega_radius(25.0, 0.5, 5, 0.05, 2.0, 1.5);
    const double r4 = omega_radius(25.0, 0.5, 5, 0.20, 2.0, 1.5);
    CHECK(r4 == doctest::Approx(2.0 * r1));
    CHECK(r1 == doctest::Approx(std::sqrt(25.0 * 0.5 * 5.0 * 0.05 / (2.0 * 1.5))));
    CHECK(omega_radius(25.0, 0.5, 5, 0.0, 2.0, 1.5) == 0.0);
    CHECK_THROWS_AS(omega_radius(-1.0, 0.5, 5, 0.05, 2.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(omega_radius(25.0, 0.5, 5, 0.05, 0.0, 1.5), std::invalid_argument);
}

TEST_CASE("dwell time on a hand-computable case") {
    // kappa = e^2 and Lambda = 1 give pi_d = ln(e^2) / 1 = 2 exactly.
    const double e2 = std::exp(2.0);
    DwellResult d = dwell_time({{1.0, e2, e2}});
    CHECK(d.kappa == doctest::Approx(e2));
    CHECK(d.big_lambda == doctest::Approx(1.0));
    CHECK(d.pi_d_min == doctest::Approx(2.0));

    // Across topologies: kappa from the worst pair, Lambda from the slowest.
    DwellResult multi = dwell_time({{1.0, e2, e2}, {2.0, 4.0, 1.0}});
    CHECK(multi.kappa == doctest::Approx(e2 / 1.0));
    CHECK(multi.big_lambda == doctest::Approx(0.25));
    CHECK(multi.pi_d_min == doctest::Approx(2.0 / 0.25));

    CHECK_THROWS_AS(dwell_time({}), std::invalid_argument);
}
