#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "afsmc/controllers.hpp"
#include "afsmc/errors.hpp"
#include "afsmc/fuzzy.hpp"
#include "afsmc/integrator.hpp"
#include "afsmc/plants.hpp"
#include "afsmc/state.hpp"

namespace afsmc::sim {

struct SimConfig {
    double dt = 1e-3;
    double t_end = 10.0;
    StateVec x0{};
    std::size_t record_every = 10;

    void validate() const {
        if (!(dt > 0.0 && dt <= 0.01)) throw ConfigError("dt must satisfy 0 < dt <= 0.01");
        if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
        if (record_every < 1) throw ConfigError("record_every must be at least 1");
        if (!is_finite(x0)) throw ConfigError("x0 must be finite");
    }

    std::size_t steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }
};

struct TrajectoryRow {
    double t = 0.0;
    StateVec x{};
    double u = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double z = 0.0;
    double theta_f_norm = 0.0;
    double theta_g_norm = 0.0;
    double d = 0.0;  // disturbance force
};

struct TrajectoryLog {
    StateVec desired{};
    std::vector<TrajectoryRow> rows;

    /// Rows with t in [t0, t1].
    TrajectoryLog slice(double t0, double t1 = std::numeric_limits<double>::infinity()) const {
        TrajectoryLog out{desired, {}};
        for (const auto& r : rows) {
            if (r.t >= t0 && r.t <= t1) out.rows.push_back(r);
        }
        return out;
    }
};

/// Tag for the non-adaptive comparison controller.
struct DecoupledSmc {};

using Controller = std::variant<control::ControllerState, DecoupledSmc>;

/// Fixed-step closed loop. The control is held across the RK4 stages; the
/// fuzzy parameters ride along in the integrated state and are projected once
/// per full step.
inline TrajectoryLog run_closed_loop(const plants::PlantSpec& plant, const Controller& controller,
                                     const control::ControllerParams& params, const SimConfig& cfg) {
    plant.validate();
    params.validate();
    cfg.validate();

    const auto* adaptive = std::get_if<control::ControllerState>(&controller);
    const plants::PlantSpec nominal = plant.nominal();

    TrajectoryLog log;
    log.desired = params.desired;
    const std::size_t n_steps = cfg.steps();
    log.rows.reserve(n_steps / cfg.record_every + 1);

    StateVec x = cfg.x0;
    std::vector<double> theta_f;
    std::vector<double> theta_g;
    if (adaptive) {
        theta_f.assign(adaptive->f_hat.theta().begin(), adaptive->f_hat.theta().end());
        theta_g.assign(adaptive->g_hat.theta().begin(), adaptive->g_hat.theta().end());
    }
    const std::size_t nf = theta_f.size();
    const std::size_t ng = theta_g.size();

    std::vector<double> y(4 + nf + ng);
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const control::SurfaceSample sample = control::surfaces(x, params);

        double u_law = 0.0;
        if (adaptive) {
            const double f = adaptive->f_hat.evaluate(theta_f, adaptive->f_hat.basis(x));
            const double g = adaptive->g_hat.evaluate(theta_g, adaptive->g_hat.basis(x));
            u_law = control::afsmc_law(x, sample.s1, f, g, params);
        } else {
            u_law = control::decoupled_smc_control(x, nominal, params);
        }
        const double u_applied = adaptive ? plant.input_sign * u_law : u_law;
        if (!std::isfinite(u_applied)) throw DivergenceError("non-finite control at t = " + std::to_string(t), t);

        if (k % cfg.record_every == 0) {
            log.rows.push_back({t, x, u_applied, sample.s1, sample.s2, sample.z, fuzzy::norm(theta_f),
                                fuzzy::norm(theta_g), plants::disturbance_force(t, plant.disturbance)});
        }
        if (k == n_steps) break;

        std::copy(x.begin(), x.end(), y.begin());
        std::copy(theta_f.begin(), theta_f.end(), y.begin() + 4);
        std::copy(theta_g.begin(), theta_g.end(), y.begin() + 4 + static_cast<std::ptrdiff_t>(nf));

        auto field = [&](double ts, std::span<const double> ys) {
            const StateVec xs{ys[0], ys[1], ys[2], ys[3]};
            const StateVec xdot = plants::dynamics(plant, xs, u_applied, ts);
            std::vector<double> out(ys.size(), 0.0);
            std::copy(xdot.begin(), xdot.end(), out.begin());
            if (adaptive) {
                const double s1 = control::surfaces(xs, params).s1;
                const auto rates = control::adaptation_rates(s1, adaptive->f_hat.basis(xs),
                                                             adaptive->g_hat.basis(xs), u_law, params);
                std::copy(rates.theta_f.begin(), rates.theta_f.end(), out.begin() + 4);
                std::copy(rates.theta_g.begin(), rates.theta_g.end(), out.begin() + 4 + static_cast<std::ptrdiff_t>(nf));
            }
            return out;
        };
        const std::vector<double> next = rk4_step(field, y, t, cfg.dt);

        std::copy(next.begin(), next.begin() + 4, x.begin());
        if (adaptive) {
            const auto f_begin = next.begin() + 4;
            const auto g_begin = f_begin + static_cast<std::ptrdiff_t>(nf);
            theta_f = fuzzy::project({f_begin, g_begin}, adaptive->f_hat.bounds());
            theta_g = fuzzy::project({g_begin, next.end()}, adaptive->g_hat.bounds());
        }
    }
    return log;
}

// ---------------------------------------------------------------------------
// Metrics

struct MetricOptions {
    std::vector<std::size_t> outputs{0, 2};
    std::vector<double> thresholds{0.02, 0.05};
    std::optional<std::pair<double, double>> window;  // for peak deviation
};

struct Metrics {
    double settle_time = 0.0;          // infinity if the bands are never held to the end
    std::vector<double> ise;           // per output, trapezoidal
    std::vector<double> peak_deviation;
    double max_abs_u = 0.0;
    double rms_u = 0.0;
};

inline Metrics compute_metrics(const TrajectoryLog& log, const MetricOptions& opt) {
    if (log.rows.empty()) throw ConfigError("cannot compute metrics of an empty log");
    if (opt.outputs.size() != opt.thresholds.size()) throw ConfigError("one threshold per output is required");
    for (std::size_t i : opt.outputs) {
        if (i > 3) throw ConfigError("metric output index outside {0,1,2,3}");
    }

    const auto& rows = log.rows;
    const std::size_t n_out = opt.outputs.size();
    auto err = [&](const TrajectoryRow& r, std::size_t j) {
        const std::size_t i = opt.outputs[j];
        return std::abs(r.x[i] - log.desired[i]);
    };

    Metrics m;
    m.ise.assign(n_out, 0.0);
    m.peak_deviation.assign(n_out, 0.0);

    // Scan backwards for the last row outside the bands.
    m.settle_time = rows.front().t;
    for (std::size_t k = rows.size(); k-- > 0;) {
        bool inside = true;
        for (std::size_t j = 0; j < n_out; ++j) inside = inside && err(rows[k], j) < opt.thresholds[j];
        if (!inside) {
            m.settle_time = k + 1 < rows.size() ? rows[k + 1].t : std::numeric_limits<double>::infinity();
            break;
        }
    }

    double u_sq_integral = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        m.max_abs_u = std::max(m.max_abs_u, std::abs(r.u));
        const bool in_window = !opt.window || (r.t >= opt.window->first && r.t <= opt.window->second);
        for (std::size_t j = 0; j < n_out; ++j) {
            if (in_window) m.peak_deviation[j] = std::max(m.peak_deviation[j], err(r, j));
        }
        if (k == 0) continue;
        const auto& p = rows[k - 1];
        const double h = r.t - p.t;
        for (std::size_t j = 0; j < n_out; ++j) {
            const double a = err(p, j);
            const double b = err(r, j);
            m.ise[j] += 0.5 * h * (a * a + b * b);
        }
        u_sq_integral += 0.5 * h * (p.u * p.u + r.u * r.u);
    }
    const double span = rows.back().t - rows.front().t;
    m.rms_u = span > 0.0 ? std::sqrt(u_sq_integral / span) : std::abs(rows.front().u);
    return m;
}

}  // namespace afsmc::sim
