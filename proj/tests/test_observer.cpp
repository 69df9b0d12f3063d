#include <doctest.h>

#include <cmath>

#include "lagswarm/observer.hpp"

using namespace lagswarm;

TEST_CASE("signum and boundary layer basics") {
    Eigen::VectorXd x(3);
    x << -2.0, 0.0, 0.5;
    Eigen::VectorXd s = sgn(x);
    CHECK(s(0) == -1.0);
    CHECK(s(1) == 0.0);
    CHECK(s(2) == 1.0);

    Eigen::VectorXd z = boundary_layer(x, 0.1);
    CHECK(z.norm() < 1.0);
    CHECK((z - x / (x.norm() + 0.1)).norm() == doctest::Approx(0.0));
    CHECK(boundary_layer(Eigen::VectorXd::Zero(3), 0.1).norm() == 0.0);

    // As eps -> 0 the boundary layer approaches the unit direction.
    Eigen::VectorXd tight = boundary_layer(x, 1e-12);
    CHECK(tight.norm() == doctest::Approx(1.0));
}

TEST_CASE("observer right-hand side follows the graph") {
    // Two followers; follower 1 pinned to the leader, follower 2 hears only
    // follower 1.
    DirectedGraph g = DirectedGraph::from_edges(3, {{0, 1, 2.0}, {1, 2, 1.0}});
    ObserverState st;
    st.r_hat.resize(2, 2);
    st.r_hat << 1.0, 0.0, -1.0, 2.0;
    st.v_hat.resize(2, 2);
    st.v_hat << 0.5, 0.5, 0.0, 0.0;
    st.omega1 = 2.0;
    st.omega2 = 3.0;
    Eigen::Vector2d leader_pos(0.0, 0.0);
    Eigen::Vector2d leader_vel(1.0, 0.0);

    ObserverRates rates = observer_rhs(st, g, leader_pos, leader_vel);

    // Follower 1 position: 2 * (r1 - r0) = (2, 0) -> sgn = (1, 0).
    CHECK(rates.r_hat_dot(0, 0) == doctest::Approx(st.v_hat(0, 0) - 2.0 * 1.0));
    CHECK(rates.r_hat_dot(0, 1) == doctest::Approx(st.v_hat(0, 1)));
    // Follower 1 velocity: 2 * (v1 - v0) = (-1, 1) -> sgn = (-1, 1).
    CHECK(rates.v_hat_dot(0, 0) == doctest::Approx(3.0));
    CHECK(rates.v_hat_dot(0, 1) == doctest::Approx(-3.0));
    // Follower 2 position: (r2 - r1) = (-2, 2) -> sgn = (-1, 1).
    CHECK(rates.r_hat_dot(1, 0) == doctest::Approx(st.v_hat(1, 0) + 2.0));
    CHECK(rates.r_hat_dot(1, 1) == doctest::Approx(st.v_hat(1, 1) - 2.0));
    // Follower 2 velocity: (v2 - v1) = (-0.5, -0.5) -> sgn = (-1, -1).
    CHECK(rates.v_hat_dot(1, 0) == doctest::Approx(3.0));
    CHECK(rates.v_hat_dot(1, 1) == doctest::Approx(3.0));
}

TEST_CASE("observer coasts when the graph goes silent") {
    DirectedGraph silent{Eigen::MatrixXd::Zero(3, 3)};
    ObserverState st;
    st.r_hat = Eigen::MatrixXd::Random(2, 2);
    st.v_hat = Eigen::MatrixXd::Random(2, 2);
    st.omega1 = 5.0;
    st.omega2 = 7.0;
    ObserverRates rates =
        observer_rhs(st, silent, Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(2.0, 2.0));
    CHECK((rates.r_hat_dot - st.v_hat).norm() == doctest::Approx(0.0));
    CHECK(rates.v_hat_dot.norm() == doctest::Approx(0.0));
}

TEST_CASE("boundary layer smooths the observer") {
    DirectedGraph g = DirectedGraph::from_edges(2, {{0, 1, 1.0}});
    ObserverState st;
    st.r_hat.resize(1, 2);
    st.r_hat << 1e-9, 0.0;
    st.v_hat = Eigen::MatrixXd::Zero(1, 2);
    st.omega1 = 1.0;
    st.omega2 = 1.0;
    // Exact sign jumps to magnitude 1 for any nonzero disagreement; the
    // smoothed version stays proportional to the tiny disagreement.
    ObserverRates hard = observer_rhs(st, g, Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero());
    ObserverRates soft =
        observer_rhs(st, g, Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), 0.5);
    CHECK(std::abs(hard.r_hat_dot(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(soft.r_hat_dot(0, 0)) < 1e-8);
    CHECK(std::abs(soft.v_hat_dot(0, 0)) < 1e-8);
}

TEST_CASE("observer gain condition") {
    CHECK(check_observer_gain(5.0, 4.0, 1));
    CHECK_FALSE(check_observer_gain(5.0, 5.0, 1));
    CHECK(check_observer_gain(2.0, 9.0, 5));
    CHECK_FALSE(check_observer_gain(1.0, 9.0, 5));
}

TEST_CASE("convergence detection on synthetic traces") {
    std::vector<double> t, pe, ve;
    for (int i = 0; i <= 100; ++i) {
        double ti = 0.1 * i;
        t.push_back(ti);
        pe.push_back(std::exp(-ti));
        ve.push_back(0.5 * std::exp(-ti));
    }
    auto hit = detect_convergence(t, pe, ve, 0.01);
    REQUIRE(hit.has_value());
    // exp(-t) < 0.01 from t = 4.7 onward on this grid.
    CHECK(*hit == doctest::Approx(4.7));

    auto never = detect_convergence(t, pe, ve, 1e-9);
    CHECK_FALSE(never.has_value());

    // A late spike pushes the sustained-convergence time past it.
    pe[80] = 1.0;
    auto later = detect_convergence(t, pe, ve, 0.01);
    REQUIRE(later.has_value());
    CHECK(*later > 8.0);
}
