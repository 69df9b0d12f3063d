#include "lagswarm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lagswarm/observer.hpp"

namespace lagswarm {

DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& v,
                        double t_start, double t_end, double floor) {
    if (t.size() != v.size()) throw std::invalid_argument("series lengths differ");
    DecayFit fit;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t k = 0; k < t.size(); ++k) {
        if (t[k] < t_start || t[k] > t_end || v[k] <= floor) continue;
        const double x = t[k];
        const double y = std::log(v[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        ++fit.samples;
    }
    if (fit.samples < 3) {
        throw DegenerateWindow("decay fit needs at least three positive samples in the window");
    }
    const double m = static_cast<double>(fit.samples);
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) return fit;
    const double slope = (m * sxy - sx * sy) / denom;
    fit.rate = -slope;
    fit.intercept = (sy - slope * sx) / m;
    const double sst = syy - sy * sy / m;
    const double sse = syy - fit.intercept * sy - slope * sxy;
    fit.r_squared = sst > 0.0 ? std::max(0.0, 1.0 - sse / sst) : 1.0;
    return fit;
}

std::optional<double> detect_convergence_window(const std::vector<double>& times,
                                                const std::vector<double>& pos_err,
                                                const std::vector<double>& vel_err, double tol,
                                                double t_start, double t_end) {
    std::vector<double> wt, wp, wv;
    for (size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t_start || times[k] > t_end) continue;
        wt.push_back(times[k]);
        wp.push_back(pos_err[k]);
        wv.push_back(vel_err[k]);
    }
    if (wt.empty()) return std::nullopt;
    return detect_convergence(wt, wp, wv, tol);
}

OmegaCheck check_omega(const SimTrace& trace, double radius, double t_start) {
    OmegaCheck check;
    check.radius = radius;
    const std::vector<double> pos = trace.tracking_pos_err();
    size_t total = 0, inside = 0;
    for (size_t k = 0; k < trace.samples(); ++k) {
        if (trace.t[k] < t_start) continue;
        ++total;
        check.worst = std::max(check.worst, pos[k]);
        if (pos[k] <= radius) ++inside;
    }
    check.fraction_inside = total > 0 ? static_cast<double>(inside) / total : 0.0;
    check.satisfied = total > 0 && check.worst <= radius;
    return check;
}

BoxCheck check_boxes(const SimTrace& trace, double cal_x, double cal_y) {
    BoxCheck check;
    check.cal_x = cal_x;
    check.cal_y = cal_y;
    const std::vector<double> pos = trace.tracking_pos_err();
    const std::vector<double> vel = trace.tracking_vel_err();
    for (size_t k = 0; k < trace.samples(); ++k) {
        check.max_pos = std::max(check.max_pos, pos[k]);
        check.max_vel = std::max(check.max_vel, vel[k]);
    }
    check.inside = check.max_pos < cal_x && check.max_vel < cal_y;
    return check;
}

RunReport analyze(const SimResult& result, const ScenarioConfig& config,
                  const GainLedger* ledger) {
    const SimTrace& trace = result.trace;
    RunReport report;
    report.scenario = config.name;
    report.diverged = result.diverged;
    report.diverged_time = result.diverged_time;
    report.t_end = trace.t.empty() ? 0.0 : trace.t.back();
    report.convergence_tol = config.convergence_tol;

    const std::vector<double> obs_pos = trace.observer_pos_err();
    const std::vector<double> obs_vel = trace.observer_vel_err();

    const double pre_end = config.blackout ? config.blackout->first : report.t_end;
    report.observer_t1 = detect_convergence_window(trace.t, obs_pos, obs_vel,
                                                   config.convergence_tol, 0.0, pre_end);
    if (config.blackout) {
        report.observer_reconverge = detect_convergence_window(
            trace.t, obs_pos, obs_vel, config.convergence_tol, config.blackout->second,
            report.t_end);
    }

    const std::vector<double> trk_pos = trace.tracking_pos_err();
    const std::vector<double> trk_vel = trace.tracking_vel_err();
    for (size_t k = 0; k < trace.samples(); ++k) {
        if (trace.t[k] < report.t_end - 1.0) continue;
        report.final_tracking_pos = std::max(report.final_tracking_pos, trk_pos[k]);
        report.final_tracking_vel = std::max(report.final_tracking_vel, trk_vel[k]);
    }

    if (report.observer_t1) {
        double fit_end = report.t_end;
        if (config.blackout) fit_end = std::min(fit_end, config.blackout->first);
        try {
            report.decay = fit_decay_rate(trace.t, trace.lyapunov, *report.observer_t1, fit_end);
        } catch (const DegenerateWindow&) {
            // too few samples between convergence and the end of the window
        }
    }

    if (ledger) {
        const double tail_start = report.observer_t1.value_or(0.0);
        if (ledger->omega_radius > 0.0) {
            report.omega = check_omega(trace, ledger->omega_radius, tail_start);
        }
        if (ledger->cal_x > 0.0 && ledger->cal_y > 0.0) {
            report.boxes = check_boxes(trace, ledger->cal_x, ledger->cal_y);
        }
    }
    return report;
}

void write_report_text(std::ostream& out, const RunReport& report) {
    out << "run report: " << report.scenario << "\n";
    if (report.diverged) {
        out << "  DIVERGED at t = " << report.diverged_time << "\n";
    }
    out << "  horizon: " << report.t_end << " s\n";
    out << "  observer convergence (tol " << report.convergence_tol << "): ";
    if (report.observer_t1) {
        out << "T1 = " << *report.observer_t1 << " s\n";
    } else {
        out << "not reached\n";
    }
    if (report.observer_reconverge) {
        out << "  observer reconvergence after blackout: " << *report.observer_reconverge << " s\n";
    }
    out << "  tracking error over the last second: pos = " << report.final_tracking_pos
        << ", vel = " << report.final_tracking_vel << "\n";
    if (report.decay.samples >= 2) {
        out << "  Lyapunov decay fit past T1: rate = " << report.decay.rate
            << ", r^2 = " << report.decay.r_squared << " (" << report.decay.samples
            << " samples)\n";
    }
    if (report.omega) {
        out << "  residual set (radius " << report.omega->radius << "): worst = "
            << report.omega->worst << ", inside = " << (report.omega->satisfied ? "yes" : "NO")
            << " (" << 100.0 * report.omega->fraction_inside << "% of tail samples)\n";
    }
    if (report.boxes) {
        out << "  state boxes (" << report.boxes->cal_x << ", " << report.boxes->cal_y
            << "): max pos = " << report.boxes->max_pos << ", max vel = " << report.boxes->max_vel
            << ", inside = " << (report.boxes->inside ? "yes" : "NO") << "\n";
    }
}

std::string report_to_json(const RunReport& report) {
    nlohmann::json j;
    j["scenario"] = report.scenario;
    j["diverged"] = report.diverged;
    if (report.diverged) j["diverged_time"] = report.diverged_time;
    j["t_end"] = report.t_end;
    j["convergence_tol"] = report.convergence_tol;
    j["observer_t1"] = report.observer_t1 ? nlohmann::json(*report.observer_t1) : nullptr;
    j["observer_reconverge"] =
        report.observer_reconverge ? nlohmann::json(*report.observer_reconverge) : nullptr;
    j["final_tracking_pos"] = report.final_tracking_pos;
    j["final_tracking_vel"] = report.final_tracking_vel;
    if (report.decay.samples >= 2) {
        j["decay"] = {{"rate", report.decay.rate},
                      {"r_squared", report.decay.r_squared},
                      {"samples", report.decay.samples}};
    }
    if (report.omega) {
        j["omega"] = {{"radius", report.omega->radius},
                      {"worst", report.omega->worst},
                      {"fraction_inside", report.omega->fraction_inside},
                      {"satisfied", report.omega->satisfied}};
    }
    if (report.boxes) {
        j["boxes"] = {{"cal_x", report.boxes->cal_x},
                      {"cal_y", report.boxes->cal_y},
                      {"max_pos", report.boxes->max_pos},
                      {"max_vel", report.boxes->max_vel},
                      {"inside", report.boxes->inside}};
    }
    return j.dump(2) + "\n";
}

}  // namespace lagswarm
