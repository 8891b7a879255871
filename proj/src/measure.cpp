#include "rodsim/measure.hpp"

#include <cmath>
#include <vector>

namespace rodsim {

LinearFit fit_line(std::span<const double> t, std::span<const double> y) {
    const size_t n = t.size();
    if (n < 2 || y.size() != n) throw MeasureError("fit_line: need at least two samples");
    double tm = 0.0, ym = 0.0;
    for (size_t i = 0; i < n; ++i) {
        tm += t[i];
        ym += y[i];
    }
    tm /= n;
    ym /= n;
    double stt = 0.0, sty = 0.0;
    for (size_t i = 0; i < n; ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        sty += (t[i] - tm) * (y[i] - ym);
    }
    if (stt == 0.0) throw MeasureError("fit_line: degenerate time axis");
    LinearFit fit;
    fit.slope = sty / stt;
    fit.intercept = ym - fit.slope * tm;
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * t[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

namespace {

size_t fit_start(const Trajectory& traj, double transient_fraction) {
    const size_t n = traj.size();
    const size_t start = static_cast<size_t>(transient_fraction * n);
    if (n < static_cast<size_t>(kMinFitSamples) + start)
        throw MeasureError("trajectory too short for a steady-state fit");
    return start;
}

}  // namespace

SpeedMeasurement measure_speed(const Trajectory& traj, double transient_fraction) {
    const size_t start = fit_start(traj, transient_fraction);
    std::vector<double> t, s;
    t.reserve(traj.size() - start);
    s.reserve(traj.size() - start);
    for (size_t i = start; i < traj.size(); ++i) {
        t.push_back(traj.time[i]);
        s.push_back(traj.axial_position(i));
    }
    const LinearFit fit = fit_line(t, s);
    return {fit.slope, fit.rms_residual};
}

double rotation_rate(const Trajectory& traj, int edge, double transient_fraction) {
    const size_t start = fit_start(traj, transient_fraction);
    std::vector<double> t, theta;
    t.reserve(traj.size() - start);
    theta.reserve(traj.size() - start);
    for (size_t i = start; i < traj.size(); ++i) {
        t.push_back(traj.time[i]);
        theta.push_back(traj.twist_angle(i, edge));
    }
    return std::abs(fit_line(t, theta).slope);
}

RotationMeasurement measure_rotations(const Trajectory& traj, double omega_T,
                                      double transient_fraction) {
    RotationMeasurement r;
    r.omega_h = rotation_rate(traj, traj.head_edge, transient_fraction);
    r.omega_t = std::abs(omega_T) - r.omega_h;
    return r;
}

double efficiency(double v, double omega_h, const DragModel& drag) {
    const double w = std::abs(omega_h);
    if (!(w > 0.0)) throw MeasureError("efficiency undefined for a non-rotating head");
    return 6.0 * drag.C1 * std::abs(v) / (8.0 * drag.C2 * drag.a * w);
}

Measurement measure(const Trajectory& traj, double omega_T, const DragModel& drag,
                    double transient_fraction) {
    Measurement m;
    const SpeedMeasurement sp = measure_speed(traj, transient_fraction);
    const RotationMeasurement rot = measure_rotations(traj, omega_T, transient_fraction);
    m.v = sp.v;
    m.fit_residual = sp.fit_residual;
    m.omega_h = rot.omega_h;
    m.omega_t = rot.omega_t;
    m.omega_T = std::abs(omega_T);
    m.eta = rot.omega_h > 0.0 ? efficiency(sp.v, rot.omega_h, drag) : 0.0;
    return m;
}

}  // namespace rodsim
