#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lagswarm/analysis.hpp"
#include "lagswarm/certify.hpp"
#include "lagswarm/controller.hpp"
#include "lagswarm/graph.hpp"
#include "lagswarm/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitCertification = 3;

int log_level() {
    // 0 = quiet, 1 = info (default), 2 = debug
    const char* env = std::getenv("LAGRANGE_SWARM_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << msg << "\n";
}

void debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[debug] " << msg << "\n";
}

struct Overrides {
    std::optional<double> dt, epsilon, mu, eta, beta;
};

lagswarm::ScenarioConfig load_scenario(const std::string& path, const Overrides& ov) {
    lagswarm::ScenarioConfig cfg =
        path.empty() ? lagswarm::make_default_scenario() : lagswarm::ScenarioConfig::load(path);
    if (ov.dt) cfg.integration.dt = *ov.dt;
    if (ov.epsilon) cfg.gains.epsilon = *ov.epsilon;
    if (ov.mu) cfg.gains.mu = *ov.mu;
    if (ov.eta) cfg.gains.eta = *ov.eta;
    if (ov.beta) cfg.gains.beta = *ov.beta;
    cfg.validate();
    return cfg;
}

void write_plot_files(const std::filesystem::path& dir, const lagswarm::SimTrace& trace) {
    {
        std::ofstream pos(dir / "positions.dat");
        std::ofstream vel(dir / "velocities.dat");
        pos << "# t";
        vel << "# t";
        for (int k = 0; k < trace.p; ++k) {
            pos << " q0_" << k + 1;
            vel << " qd0_" << k + 1;
        }
        for (int i = 0; i < trace.n; ++i) {
            for (int k = 0; k < trace.p; ++k) {
                pos << " q_" << i + 1 << "_" << k + 1;
                vel << " qd_" << i + 1 << "_" << k + 1;
            }
        }
        pos << "\n";
        vel << "\n";
        for (size_t s = 0; s < trace.samples(); ++s) {
            pos << trace.t[s];
            vel << trace.t[s];
            for (int k = 0; k < trace.p; ++k) {
                pos << ' ' << trace.leader_q[s](k);
                vel << ' ' << trace.leader_qd[s](k);
            }
            for (int i = 0; i < trace.n; ++i) {
                for (int k = 0; k < trace.p; ++k) {
                    pos << ' ' << trace.q[s](i, k);
                    vel << ' ' << trace.qd[s](i, k);
                }
            }
            pos << '\n';
            vel << '\n';
        }
    }
    std::ofstream gp(dir / "plot.gp");
    gp << "set terminal pngcairo size 1200,800\nset key outside\n";
    gp << "set output 'positions.png'\nset xlabel 't [s]'\nset ylabel 'q'\n";
    gp << "plot for [c=2:" << 1 + trace.p * (trace.n + 1)
       << "] 'positions.dat' using 1:c with lines title columnheader(c)\n";
    gp << "set output 'velocities.png'\nset ylabel 'qd'\n";
    gp << "plot for [c=2:" << 1 + trace.p * (trace.n + 1)
       << "] 'velocities.dat' using 1:c with lines title columnheader(c)\n";
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir, const Overrides& ov,
            uint64_t seed) {
    lagswarm::ScenarioConfig cfg;
    try {
        cfg = load_scenario(scenario_path, ov);
    } catch (const std::exception& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitValidation;
    }
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    info("running scenario '" + cfg.name + "' to t = " + std::to_string(cfg.integration.t_end));
    const lagswarm::Engine engine(cfg);
    const lagswarm::SimResult result = engine.run();

    std::optional<lagswarm::GainLedger> ledger;
    if (cfg.gains.epsilon > 0.0) {
        // The residual-set check needs the certified radii for these gains.
        try {
            const lagswarm::ScenarioCertificate cert =
                lagswarm::certify_scenario(cfg, false, seed);
            ledger = cert.topologies.front().ledger;
            debug("omega radius = " + std::to_string(ledger->omega_radius));
        } catch (const std::exception& e) {
            info(std::string("no gain certificate available: ") + e.what());
        }
    }

    const lagswarm::RunReport report =
        lagswarm::analyze(result, cfg, ledger ? &*ledger : nullptr);
    result.trace.save_csv((dir / "trace.csv").string());
    {
        std::ofstream txt(dir / "report.txt");
        lagswarm::write_report_text(txt, report);
        std::ofstream js(dir / "report.json");
        js << lagswarm::report_to_json(report);
    }
    write_plot_files(dir, result.trace);
    lagswarm::write_report_text(std::cout, report);

    if (result.diverged) {
        std::cerr << "simulation produced a non-finite state at t = "
                  << result.diverged_time << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_certify(const std::string& scenario_path, const std::string& out_dir, const Overrides& ov,
                bool use_designed, uint64_t seed) {
    lagswarm::ScenarioConfig cfg;
    try {
        cfg = load_scenario(scenario_path, ov);
    } catch (const std::exception& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitValidation;
    }
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    try {
        const lagswarm::ScenarioCertificate cert =
            lagswarm::certify_scenario(cfg, use_designed, seed);
        {
            std::ofstream txt(dir / "certificate.txt");
            lagswarm::write_scenario_certificate(txt, cert);
            std::ofstream js(dir / "certificate.json");
            js << lagswarm::certificate_to_json(cert);
        }
        lagswarm::write_scenario_certificate(std::cout, cert);
        return cert.all_ok ? kExitOk : kExitCertification;
    } catch (const lagswarm::NoSpanningTree& e) {
        std::cerr << "certification failed: " << e.what() << "\n";
        return kExitCertification;
    } catch (const std::exception& e) {
        std::cerr << "certification error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_check_graph(const std::string& graph_path, int root) {
    lagswarm::DirectedGraph g(Eigen::MatrixXd::Zero(1, 1));
    try {
        g = lagswarm::DirectedGraph::load(graph_path);
    } catch (const std::exception& e) {
        std::cerr << "graph error: " << e.what() << "\n";
        return kExitValidation;
    }
    const bool tree = lagswarm::has_rooted_spanning_tree(g, root);
    std::cout << "nodes: " << g.node_count() << "\n";
    std::cout << "spanning tree rooted at " << root << ": " << (tree ? "yes" : "no") << "\n";
    const lagswarm::LaplacianPartition part = lagswarm::laplacian(g);
    std::cout << "laplacian follower block:\n" << part.L22 << "\n";
    try {
        const lagswarm::GammaCertificate cert = lagswarm::solve_gamma(part);
        std::cout << "gamma: " << cert.gamma.transpose() << "\n";
        std::cout << "min_eig(Gamma L22 + L22' Gamma): " << cert.min_eig << "\n";
    } catch (const std::exception& e) {
        std::cerr << "no diagonal certificate: " << e.what() << "\n";
        return kExitCertification;
    }
    return kExitOk;
}

int cmd_sweep(const std::string& scenario_path, const std::string& out_dir, const Overrides& ov,
              const std::string& param, const std::vector<double>& values, uint64_t seed) {
    if (values.empty()) {
        std::cerr << "sweep needs at least one value\n";
        return kExitValidation;
    }
    if (param != "epsilon" && param != "mu" && param != "eta" && param != "beta") {
        std::cerr << "unknown sweep parameter: " << param << "\n";
        return kExitValidation;
    }
    lagswarm::ScenarioConfig base;
    try {
        base = load_scenario(scenario_path, ov);
    } catch (const std::exception& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitValidation;
    }
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    struct SweepRow {
        double value;
        bool diverged;
        double final_pos, final_vel;
    };
    std::vector<std::future<SweepRow>> jobs;
    for (double v : values) {
        lagswarm::ScenarioConfig cfg = base;
        if (param == "epsilon") cfg.gains.epsilon = v;
        if (param == "mu") cfg.gains.mu = v;
        if (param == "eta") cfg.gains.eta = v;
        if (param == "beta") cfg.gains.beta = v;
        jobs.push_back(std::async(std::launch::async, [cfg, v]() {
            const lagswarm::Engine engine(cfg);
            const lagswarm::SimResult result = engine.run();
            const lagswarm::RunReport report = lagswarm::analyze(result, cfg);
            return SweepRow{v, result.diverged, report.final_tracking_pos,
                            report.final_tracking_vel};
        }));
    }
    std::ofstream csv(dir / "sweep.csv");
    csv << param << ",diverged,final_tracking_pos,final_tracking_vel\n";
    bool any_diverged = false;
    for (auto& job : jobs) {
        const SweepRow row = job.get();
        any_diverged = any_diverged || row.diverged;
        csv << row.value << ',' << (row.diverged ? 1 : 0) << ',' << row.final_pos << ','
            << row.final_vel << "\n";
        info("sweep " + param + " = " + std::to_string(row.value) + ": final pos err = " +
             std::to_string(row.final_pos));
    }
    (void)seed;
    return any_diverged ? kExitRuntime : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"leader tracking on directed switching networks of Euler-Lagrange agents"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out", graph_path, sweep_param = "epsilon";
    int root = 0;
    uint64_t seed = 1;
    bool use_designed = false;
    std::vector<double> sweep_values;
    Overrides ov;
    double dt_v, eps_v, mu_v, eta_v, beta_v;

    std::vector<std::function<void()>> collect_overrides;
    auto add_common = [&](CLI::App* sub, bool with_overrides) {
        sub->add_option("--scenario", scenario_path,
                        "scenario JSON (bundled default when omitted)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "RNG seed for bound sampling");
        if (with_overrides) {
            auto* dt_opt = sub->add_option("--dt", dt_v, "time step override");
            auto* eps_opt = sub->add_option("--epsilon", eps_v, "boundary-layer width override");
            auto* mu_opt = sub->add_option("--mu", mu_v, "mu override");
            auto* eta_opt = sub->add_option("--eta", eta_v, "eta override");
            auto* beta_opt = sub->add_option("--beta", beta_v, "beta override");
            collect_overrides.push_back([&, dt_opt, eps_opt, mu_opt, eta_opt, beta_opt]() {
                if (dt_opt->count()) ov.dt = dt_v;
                if (eps_opt->count()) ov.epsilon = eps_v;
                if (mu_opt->count()) ov.mu = mu_v;
                if (eta_opt->count()) ov.eta = eta_v;
                if (beta_opt->count()) ov.beta = beta_v;
            });
        }
    };

    CLI::App* run = app.add_subcommand("run", "simulate a scenario and write trace/report/plots");
    add_common(run, true);

    CLI::App* certify = app.add_subcommand("certify", "design and verify the gain inequalities");
    add_common(certify, true);
    certify->add_flag("--design", use_designed,
                      "judge the designed gains instead of the scenario's");

    CLI::App* check = app.add_subcommand("check-graph", "spanning tree and Gamma certificate");
    check->add_option("--graph", graph_path, "edge-list file: 'src dst weight' lines")
        ->required();
    check->add_option("--root", root, "root node (default: the leader, node 0)");

    CLI::App* sweep = app.add_subcommand("sweep", "run a scenario across parameter values");
    add_common(sweep, true);
    sweep->add_option("--param", sweep_param, "swept parameter: epsilon|mu|eta|beta");
    sweep->add_option("--values", sweep_values, "parameter values")->required();

    CLI11_PARSE(app, argc, argv);
    for (const auto& collect : collect_overrides) collect();

    if (run->parsed()) return cmd_run(scenario_path, out_dir, ov, seed);
    if (certify->parsed()) return cmd_certify(scenario_path, out_dir, ov, use_designed, seed);
    if (check->parsed()) return cmd_check_graph(graph_path, root);
    if (sweep->parsed()) return cmd_sweep(scenario_path, out_dir, ov, sweep_param, sweep_values, seed);
    return kExitValidation;
}
