#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lagswarm/controller.hpp"
#include "lagswarm/simulation.hpp"

namespace lagswarm {

struct DegenerateWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Least-squares fit of log v(t) = intercept - rate * t over the samples in
/// [t_start, t_end] with v above the floor. Throws DegenerateWindow when
/// fewer than three samples qualify.
struct DecayFit {
    double rate = 0.0;       // positive means decay
    double intercept = 0.0;
    double r_squared = 0.0;
    size_t samples = 0;
};

DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& v,
                        double t_start, double t_end, double floor = 1e-12);

/// detect_convergence restricted to the samples with t in [t_start, t_end].
std::optional<double> detect_convergence_window(const std::vector<double>& times,
                                                const std::vector<double>& pos_err,
                                                const std::vector<double>& vel_err, double tol,
                                                double t_start, double t_end);

/// Residual-set containment of the stacked tracking error after t_start.
struct OmegaCheck {
    double radius = 0.0;
    double worst = 0.0;           // max stacked error over the tail
    double fraction_inside = 0.0;
    bool satisfied = false;
};

OmegaCheck check_omega(const SimTrace& trace, double radius, double t_start);

/// Containment of the stacked errors in the designed state boxes.
struct BoxCheck {
    double cal_x = 0.0;
    double cal_y = 0.0;
    double max_pos = 0.0;
    double max_vel = 0.0;
    bool inside = false;
};

BoxCheck check_boxes(const SimTrace& trace, double cal_x, double cal_y);

struct RunReport {
    std::string scenario;
    bool diverged = false;
    double diverged_time = 0.0;
    double t_end = 0.0;
    double convergence_tol = 0.0;

    std::optional<double> observer_t1;          // before any blackout
    std::optional<double> observer_reconverge;  // after the blackout, if any
    double final_tracking_pos = 0.0;  // max stacked error over the last second
    double final_tracking_vel = 0.0;

    DecayFit decay;  // of the Lyapunov-like value past observer_t1
    std::optional<OmegaCheck> omega;
    std::optional<BoxCheck> boxes;
};

/// Post-run summary. With a ledger the residual-set and state-box checks are
/// evaluated against its certified radii.
RunReport analyze(const SimResult& result, const ScenarioConfig& config,
                  const GainLedger* ledger = nullptr);

void write_report_text(std::ostream& out, const RunReport& report);
std::string report_to_json(const RunReport& report);

}  // namespace lagswarm
