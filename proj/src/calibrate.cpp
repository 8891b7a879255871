#include "rodsim/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace rodsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    return out;
}

constexpr double kFailurePenalty = 1e6;

}  // namespace

CalibrationDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CalibrationError("cannot open dataset file: " + path);
    CalibrationDataset ds;
    ds.source = path;
    std::string line;
    bool header_seen = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (!header_seen) {
            const auto fields = split_fields(line);
            if (fields.size() != 5 || fields[0] != "n" || fields[1] != "omega_T_rpm" ||
                fields[2] != "v_mm_s" || fields[3] != "omega_h_rpm" || fields[4] != "weight") {
                std::ostringstream msg;
                msg << path << ":" << lineno
                    << ": expected header `n, omega_T_rpm, v_mm_s, omega_h_rpm, weight`";
                throw CalibrationError(msg.str());
            }
            header_seen = true;
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 5) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": expected 5 fields, got " << fields.size();
            throw CalibrationError(msg.str());
        }
        CalibrationRecord rec;
        try {
            rec.n = std::stoi(fields[0]);
            rec.omega_T_rpm = std::stod(fields[1]);
            rec.v_mm_s = std::stod(fields[2]);
            rec.omega_h_rpm = std::stod(fields[3]);
            rec.weight = std::stod(fields[4]);
        } catch (const std::exception&) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": malformed numeric field";
            throw CalibrationError(msg.str());
        }
        if (rec.omega_T_rpm <= 0.0) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": omega_T_rpm must be positive";
            throw CalibrationError(msg.str());
        }
        ds.records.push_back(rec);
    }
    if (!header_seen) throw CalibrationError(path + ": missing header line");
    return ds;
}

void save_dataset(const CalibrationDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw CalibrationError("cannot write dataset file: " + path);
    out << "n, omega_T_rpm, v_mm_s, omega_h_rpm, weight\n";
    char buf[256];
    for (const auto& r : dataset.records) {
        std::snprintf(buf, sizeof(buf), "%d, %.12g, %.12g, %.12g, %.12g\n", r.n, r.omega_T_rpm,
                      r.v_mm_s, r.omega_h_rpm, r.weight);
        out << buf;
    }
}

namespace {

struct RecordResult {
    bool ok = false;
    double v_mm_s = 0.0;
    double omega_h_rpm = 0.0;
};

RecordResult simulate_record(const DragParams& params, const CalibrationRecord& rec,
                             const CalibrationSetup& setup) {
    RecordResult out;
    try {
        RobotSpec spec = setup.base_spec;
        spec.n = rec.n;
        const BuiltRobot robot = build_robot(spec);
        const DragModel drag = make_drag_model(params.mu, params.C1, params.C2, spec.head_radius,
                                               spec.tail_length, spec.tail_radius);
        const double omega_T = rec.omega_T_rpm * kRpmToRadPerSec;
        const Trajectory traj = simulate(robot, drag, omega_T, setup.duration, setup.solver);
        const Measurement m = measure(traj, omega_T, drag, setup.transient_fraction);
        out.v_mm_s = std::abs(m.v) * 1e3;
        out.omega_h_rpm = m.omega_h * kRadPerSecToRpm;
        out.ok = true;
    } catch (const std::exception&) {
        out.ok = false;
    }
    return out;
}

std::vector<RecordResult> simulate_records(const DragParams& params, const CalibrationDataset& dataset,
                                           const CalibrationSetup& setup) {
    const size_t count = dataset.records.size();
    std::vector<RecordResult> results(count);
    unsigned workers = setup.parallelism > 0 ? static_cast<unsigned>(setup.parallelism)
                                             : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i)
            results[i] = simulate_record(params, dataset.records[i], setup);
        return results;
    }
    std::vector<std::future<RecordResult>> futures;
    futures.reserve(count);
    for (size_t i = 0; i < count; ++i)
        futures.push_back(std::async(std::launch::async, simulate_record, params,
                                     dataset.records[i], setup));
    for (size_t i = 0; i < count; ++i) results[i] = futures[i].get();
    return results;
}

}  // namespace

double objective(const DragParams& params, const CalibrationDataset& dataset,
                 const CalibrationSetup& setup) {
    if (!(params.C1 > 0.0 && params.C2 > 0.0 && params.mu > 0.0))
        throw CalibrationError("objective requires positive parameters");
    if (dataset.records.empty()) throw CalibrationError("objective requires a non-empty dataset");

    const auto results = simulate_records(params, dataset, setup);
    double total = 0.0;
    for (size_t i = 0; i < results.size(); ++i) {
        const auto& rec = dataset.records[i];
        const auto& res = results[i];
        if (!res.ok) {
            total += rec.weight * kFailurePenalty;
            continue;
        }
        const double dv = (res.v_mm_s - rec.v_mm_s) / rec.v_mm_s;
        const double dw = (res.omega_h_rpm - rec.omega_h_rpm) / rec.omega_h_rpm;
        total += rec.weight * (dv * dv + dw * dw);
    }
    return total;
}

namespace {

using Point = std::array<double, 3>;

Point clamp_to_bounds(Point p, const FitOptions& opt) {
    const Point lo{opt.lower.C1, opt.lower.C2, opt.lower.mu};
    const Point hi{opt.upper.C1, opt.upper.C2, opt.upper.mu};
    for (int i = 0; i < 3; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
    return p;
}

DragParams to_params(const Point& p) { return {p[0], p[1], p[2]}; }

}  // namespace

FittedParams fit(const CalibrationDataset& dataset, const CalibrationSetup& setup,
                 const FitOptions& options) {
    if (dataset.records.empty()) throw CalibrationError("fit requires a non-empty dataset");

    FittedParams result;
    result.underdetermined = 2 * dataset.records.size() < 3;

    int evals = 0;
    auto evaluate = [&](const Point& p) {
        const double f = objective(to_params(p), dataset, setup);
        ++evals;
        result.log.push_back({evals, to_params(p), f});
        return f;
    };

    // Nelder-Mead with candidate points clamped into the bounds box.
    constexpr int kDim = 3;
    std::array<Point, kDim + 1> simplex;
    std::array<double, kDim + 1> value{};
    simplex[0] = clamp_to_bounds({options.initial.C1, options.initial.C2, options.initial.mu}, options);
    for (int i = 0; i < kDim; ++i) {
        Point p = simplex[0];
        const double step = 0.25 * std::abs(p[i]);
        p[i] += step > 0.0 ? step : 0.1;
        simplex[i + 1] = clamp_to_bounds(p, options);
    }
    for (int i = 0; i <= kDim; ++i) value[i] = evaluate(simplex[i]);

    auto order = [&]() {
        std::array<int, kDim + 1> idx{0, 1, 2, 3};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return value[a] < value[b]; });
        std::array<Point, kDim + 1> sp;
        std::array<double, kDim + 1> sv{};
        for (int i = 0; i <= kDim; ++i) {
            sp[i] = simplex[idx[i]];
            sv[i] = value[idx[i]];
        }
        simplex = sp;
        value = sv;
    };

    bool converged = false;
    while (evals < options.max_evaluations) {
        order();
        // convergence: relative simplex spread or objective spread
        double spread = 0.0;
        for (int i = 0; i < kDim; ++i) {
            const double scale = std::max(1e-12, std::abs(simplex[0][i]));
            for (int v = 1; v <= kDim; ++v)
                spread = std::max(spread, std::abs(simplex[v][i] - simplex[0][i]) / scale);
        }
        if (spread < options.param_tolerance ||
            std::abs(value[kDim] - value[0]) < options.objective_tolerance) {
            converged = true;
            break;
        }

        Point centroid{0, 0, 0};
        for (int v = 0; v < kDim; ++v)
            for (int i = 0; i < kDim; ++i) centroid[i] += simplex[v][i] / kDim;

        auto affine = [&](double c) {
            Point p;
            for (int i = 0; i < kDim; ++i) p[i] = centroid[i] + c * (simplex[kDim][i] - centroid[i]);
            return clamp_to_bounds(p, options);
        };

        const Point reflected = affine(-1.0);
        const double fr = evaluate(reflected);
        if (fr < value[0]) {
            const Point expanded = affine(-2.0);
            const double fe = evaluate(expanded);
            if (fe < fr) {
                simplex[kDim] = expanded;
                value[kDim] = fe;
            } else {
                simplex[kDim] = reflected;
                value[kDim] = fr;
            }
        } else if (fr < value[kDim - 1]) {
            simplex[kDim] = reflected;
            value[kDim] = fr;
        } else {
            const Point contracted = affine(fr < value[kDim] ? -0.5 : 0.5);
            const double fc = evaluate(contracted);
            if (fc < std::min(fr, value[kDim])) {
                simplex[kDim] = contracted;
                value[kDim] = fc;
            } else {
                // shrink toward the best vertex
                for (int v = 1; v <= kDim; ++v) {
                    for (int i = 0; i < kDim; ++i)
                        simplex[v][i] = simplex[0][i] + 0.5 * (simplex[v][i] - simplex[0][i]);
                    simplex[v] = clamp_to_bounds(simplex[v], options);
                    value[v] = evaluate(simplex[v]);
                    if (evals >= options.max_evaluations) break;
                }
            }
        }
    }
    order();

    result.C1 = simplex[0][0];
    result.C2 = simplex[0][1];
    result.mu = simplex[0][2];
    result.objective_value = value[0];
    result.evaluations = evals;
    result.converged = converged;
    return result;
}

ValidationReport cross_validate(const DragParams& params, const CalibrationDataset& holdout,
                                const CalibrationSetup& setup) {
    ValidationReport report;
    const auto results = simulate_records(params, holdout, setup);
    for (size_t i = 0; i < results.size(); ++i) {
        ValidationEntry entry;
        entry.record = holdout.records[i];
        entry.v_sim_mm_s = results[i].v_mm_s;
        entry.omega_h_sim_rpm = results[i].omega_h_rpm;
        entry.v_rel_error = std::abs(results[i].v_mm_s - entry.record.v_mm_s) /
                            std::abs(entry.record.v_mm_s);
        entry.omega_h_rel_error = std::abs(results[i].omega_h_rpm - entry.record.omega_h_rpm) /
                                  std::abs(entry.record.omega_h_rpm);
        report.entries.push_back(entry);
    }
    if (!report.entries.empty()) {
        for (const auto& e : report.entries) {
            report.mean_v_rel_error += e.v_rel_error;
            report.mean_omega_h_rel_error += e.omega_h_rel_error;
            report.max_v_rel_error = std::max(report.max_v_rel_error, e.v_rel_error);
            report.max_omega_h_rel_error = std::max(report.max_omega_h_rel_error, e.omega_h_rel_error);
        }
        report.mean_v_rel_error /= report.entries.size();
        report.mean_omega_h_rel_error /= report.entries.size();
    }
    return report;
}

}  // namespace rodsim
