#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "helpers.hpp"
#include "lagswarm/dynamics.hpp"

using namespace lagswarm;

namespace {

// Independent energy-based oracle for the planar arm. Builds kinetic and
// potential energy from link kinematics only and recovers the equations of
// motion by finite differences of the Lagrangian.
struct ArmOracle {
    TwoLinkArmParams p;
    double grav;

    double kinetic(const Eigen::Vector2d& q, const Eigen::Vector2d& qd) const {
        const double s1 = std::sin(q(0)), c1 = std::cos(q(0));
        const double s12 = std::sin(q(0) + q(1)), c12 = std::cos(q(0) + q(1));
        const Eigen::Vector2d vc1 = p.lc1 * qd(0) * Eigen::Vector2d(-s1, c1);
        const Eigen::Vector2d vc2 = p.l1 * qd(0) * Eigen::Vector2d(-s1, c1) +
                                    p.lc2 * (qd(0) + qd(1)) * Eigen::Vector2d(-s12, c12);
        return 0.5 * p.m1 * vc1.squaredNorm() + 0.5 * p.I1 * qd(0) * qd(0) +
               0.5 * p.m2 * vc2.squaredNorm() + 0.5 * p.I2 * (qd(0) + qd(1)) * (qd(0) + qd(1));
    }

    double potential(const Eigen::Vector2d& q) const {
        const double y1 = p.lc1 * std::sin(q(0));
        const double y2 = p.l1 * std::sin(q(0)) + p.lc2 * std::sin(q(0) + q(1));
        return grav * (p.m1 * y1 + p.m2 * y2);
    }

    Eigen::Matrix2d inertia(const Eigen::Vector2d& q) const {
        // Hessian of the kinetic energy in the velocities (exact up to FD
        // error because K is a quadratic form in qd).
        Eigen::Matrix2d m;
        const double h = 1e-4;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                Eigen::Vector2d pp = Eigen::Vector2d::Zero(), pm = pp, mp = pp, mm = pp;
                pp(i) += h; pp(j) += h;
                pm(i) += h; pm(j) -= h;
                mp(i) -= h; mp(j) += h;
                mm(i) -= h; mm(j) -= h;
                m(i, j) = (kinetic(q, pp) - kinetic(q, pm) - kinetic(q, mp) + kinetic(q, mm)) /
                          (4.0 * h * h);
            }
        }
        return m;
    }

    Eigen::Vector2d gravity(const Eigen::Vector2d& q) const {
        Eigen::Vector2d g;
        const double h = 1e-6;
        for (int i = 0; i < 2; ++i) {
            Eigen::Vector2d qp = q, qm = q;
            qp(i) += h;
            qm(i) -= h;
            g(i) = (potential(qp) - potential(qm)) / (2.0 * h);
        }
        return g;
    }

    // d/dt (dK/dqd) - dK/dq + dU/dq = tau  =>  qdd = M^-1 (tau - b - g)
    // with b_k = sum_ij (dM_kj/dq_i) qd_i qd_j - 1/2 sum_ij (dM_ij/dq_k) qd_i qd_j.
    Eigen::Vector2d accel(const Eigen::Vector2d& q, const Eigen::Vector2d& qd,
                          const Eigen::Vector2d& tau) const {
        const double h = 1e-6;
        Eigen::Matrix2d dm[2];
        for (int i = 0; i < 2; ++i) {
            Eigen::Vector2d qp = q, qm = q;
            qp(i) += h;
            qm(i) -= h;
            dm[i] = (inertia(qp) - inertia(qm)) / (2.0 * h);
        }
        Eigen::Vector2d b;
        for (int k = 0; k < 2; ++k) {
            double v = 0.0;
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    v += dm[i](k, j) * qd(i) * qd(j) - 0.5 * dm[k](i, j) * qd(i) * qd(j);
                }
            }
            b(k) = v;
        }
        return inertia(q).inverse() * (tau - b - gravity(q));
    }
};

}  // namespace

TEST_CASE("arm parameter validation") {
    TwoLinkArmParams p{0.5, 0.4, 0.4, 0.3, 0.2, 0.15, 0.1, 0.05};
    CHECK_NOTHROW(TwoLinkArm{p});
    p.m2 = -1.0;
    CHECK_THROWS_AS(TwoLinkArm{p}, std::invalid_argument);
}

TEST_CASE("inertia matches the energy oracle and is positive definite") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    for (const TwoLinkArmParams& p : testutil::reference_arm_params()) {
        TwoLinkArm arm(p);
        ArmOracle oracle{p, arm.gravity_accel()};
        for (int trial = 0; trial < 25; ++trial) {
            Eigen::Vector2d q(angle(rng), angle(rng));
            Eigen::Matrix2d m = arm.inertia(q);
            CHECK((m - m.transpose()).norm() == doctest::Approx(0.0));
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(m);
            CHECK(eig.eigenvalues().minCoeff() > 0.0);
            CHECK((m - oracle.inertia(q)).norm() < 1e-6);
        }
    }
}

TEST_CASE("gravity vector matches the potential-energy oracle") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    for (const TwoLinkArmParams& p : testutil::reference_arm_params()) {
        TwoLinkArm arm(p);
        ArmOracle oracle{p, arm.gravity_accel()};
        for (int trial = 0; trial < 25; ++trial) {
            Eigen::Vector2d q(angle(rng), angle(rng));
            CHECK((arm.gravity(q) - oracle.gravity(q)).norm() < 1e-6);
        }
    }
}

TEST_CASE("forward acceleration matches the Lagrangian oracle") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    std::uniform_real_distribution<double> rate(-2.0, 2.0);
    for (const TwoLinkArmParams& p : testutil::reference_arm_params()) {
        TwoLinkArm arm(p);  // agent index 0: no disturbance
        ArmOracle oracle{p, arm.gravity_accel()};
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::Vector2d q(angle(rng), angle(rng));
            Eigen::Vector2d qd(rate(rng), rate(rng));
            Eigen::Vector2d tau(rate(rng), rate(rng));
            Eigen::VectorXd got = forward_accel(arm, q, qd, tau, 0.0);
            CHECK((got - oracle.accel(q, qd, tau)).norm() < 1e-5);
        }
    }
}

TEST_CASE("coriolis consistency with the inertia rate") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    std::uniform_real_distribution<double> rate(-2.0, 2.0);
    for (const TwoLinkArmParams& p : testutil::reference_arm_params()) {
        TwoLinkArm arm(p);
        for (int trial = 0; trial < 50; ++trial) {
            Eigen::VectorXd q(2), qd(2);
            q << angle(rng), angle(rng);
            qd << rate(rng), rate(rng);
            CHECK(check_skew(arm, q, qd, 1e-6, rng) < 1e-6);
        }
    }
}

TEST_CASE("disturbance selector") {
    TwoLinkArmParams p = testutil::reference_arm_params()[0];
    TwoLinkArm quiet(p, 0);
    TwoLinkArm third(p, 3);
    CHECK(quiet.disturbance(2.0).norm() == 0.0);
    Eigen::VectorXd z = third.disturbance(2.0);
    CHECK(z(0) == doctest::Approx(std::sin(0.6)));
    CHECK(z(1) == doctest::Approx(std::cos(0.6)));
    CHECK(third.disturbance(123.4).norm() <= std::sqrt(2.0) + 1e-12);
}

TEST_CASE("bound estimation brackets a constant-inertia model") {
    PointMass pm(3, 2.5);
    std::mt19937_64 rng(15);
    Box qb{Eigen::VectorXd::Constant(3, -1.0), Eigen::VectorXd::Constant(3, 1.0)};
    Box vb{Eigen::VectorXd::Constant(3, -2.0), Eigen::VectorXd::Constant(3, 2.0)};
    BoundConstants b = estimate_bounds(pm, qb, vb, 200, rng);
    CHECK(b.k_m == doctest::Approx(2.5 / 1.1));
    CHECK(b.k_M == doctest::Approx(2.5 * 1.1));
    CHECK(b.k_C <= 1e-8);
    CHECK(b.k_g <= 1e-8);
}

TEST_CASE("bound estimation brackets the arm over a box") {
    TwoLinkArm arm(testutil::reference_arm_params()[0]);
    std::mt19937_64 rng(16);
    Box qb{Eigen::VectorXd::Constant(2, -3.0), Eigen::VectorXd::Constant(2, 3.0)};
    Box vb{Eigen::VectorXd::Constant(2, -2.0), Eigen::VectorXd::Constant(2, 2.0)};
    BoundConstants b = estimate_bounds(arm, qb, vb, 3000, rng);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    std::uniform_real_distribution<double> rate(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd q(2), qd(2);
        q << angle(rng), angle(rng);
        qd << rate(rng), rate(rng);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(arm.inertia(q));
        CHECK(eig.eigenvalues().minCoeff() >= b.k_m);
        CHECK(eig.eigenvalues().maxCoeff() <= b.k_M);
        CHECK(arm.gravity(q).norm() <= b.k_g);
        if (qd.norm() > 1e-9) {
            CHECK(arm.coriolis(q, qd).jacobiSvd().singularValues()(0) <= b.k_C * qd.norm() + 1e-9);
        }
    }
}

TEST_CASE("harmonic leader derivatives are consistent") {
    auto leader = default_harmonic_leader();
    const double h = 1e-6;
    for (double t : {0.0, 0.7, 2.3, 11.0}) {
        Eigen::VectorXd v_fd = (leader->position(t + h) - leader->position(t - h)) / (2.0 * h);
        Eigen::VectorXd a_fd = (leader->velocity(t + h) - leader->velocity(t - h)) / (2.0 * h);
        CHECK((leader->velocity(t) - v_fd).norm() < 1e-6);
        CHECK((leader->acceleration(t) - a_fd).norm() < 1e-6);
    }
    CHECK(leader->position(0.0).norm() == doctest::Approx(0.0));
    // First coordinate at t = pi/2: 0.5 sin(pi/2) - 0.2 sin(pi/4).
    const double t = M_PI / 2.0;
    CHECK(leader->position(t)(0) == doctest::Approx(0.5 - 0.2 * std::sin(M_PI / 4.0)));
}

TEST_CASE("leader rate bounds dominate the sampled trajectory") {
    auto leader = default_harmonic_leader();
    auto [k_p, k_q] = leader_rate_bounds(*leader, 5, 35.0);
    for (double t = 0.0; t <= 35.0; t += 0.01) {
        CHECK(std::sqrt(5.0) * leader->velocity(t).norm() <= k_p);
        CHECK(std::sqrt(5.0) * leader->acceleration(t).norm() <= k_q);
    }
    LinearLeader lin(Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(0.5, 0.0));
    auto [lp, lq] = leader_rate_bounds(lin, 4, 10.0);
    CHECK(lp == doctest::Approx(2.0 * 0.5 * 1.1));
    CHECK(lq == doctest::Approx(0.0));
}
