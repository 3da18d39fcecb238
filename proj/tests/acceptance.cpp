// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "afsmc/config.hpp"
#include "afsmc/sim.hpp"
#include "oracles.hpp"
#include "scenario_fixtures.hpp"

using namespace afsmc;
using config::ControllerKind;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [fail: " << what << "]";
        }
    }
};

sim::TrajectoryLog simulate(const config::Scenario& s, ControllerKind kind) {
    return sim::run_closed_loop(s.plant, s.make_controller(kind), s.controller, s.sim);
}

bool in_bands(const sim::TrajectoryRow& r, const StateVec& desired, double b1, double b3) {
    return std::abs(r.x[0] - desired[0]) < b1 && std::abs(r.x[2] - desired[2]) < b3;
}

bool bands_hold(const sim::TrajectoryLog& log, double t0, double t1, double b1, double b3) {
    for (const auto& r : log.slice(t0, t1).rows) {
        if (!in_bands(r, log.desired, b1, b3)) return false;
    }
    return !log.slice(t0, t1).rows.empty();
}

double max_abs_u(const sim::TrajectoryLog& log) {
    double m = 0.0;
    for (const auto& r : log.rows) m = std::max(m, std::abs(r.u));
    return m;
}

double peak_dev(const sim::TrajectoryLog& log, std::size_t i, double t0, double t1) {
    double m = 0.0;
    for (const auto& r : log.slice(t0, t1).rows) m = std::max(m, std::abs(r.x[i] - log.desired[i]));
    return m;
}

// --------------------------------------------------------------------------

Outcome a1() {
    Outcome o;
    const double eps = plants::epsilon(0.5, 2.0, 0.1, 0.5);
    o.detail << "epsilon=" << eps;
    o.check(std::abs(eps - 0.333333) <= 1e-6, "epsilon outside 0.333333 +- 1e-6");
    return o;
}

Outcome pendulum_bands(const char* name) {
    Outcome o;
    const auto s = shipped_scenario(name);
    const auto start = std::chrono::steady_clock::now();
    sim::TrajectoryLog log;
    try {
        log = simulate(s, ControllerKind::afsmc);
    } catch (const Error& e) {
        o.check(false, std::string("run failed: ") + e.what());
        return o;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double u = max_abs_u(log);
    o.detail << "max|x1|[30,40]=" << peak_dev(log, 0, 30, 40) << " max|x3-1|[30,40]=" << peak_dev(log, 2, 30, 40)
             << " max|u|=" << u << " runtime=" << secs << "s";
    o.check(bands_hold(log, 30.0, 40.0, 0.02, 0.05), "bands violated on [30,40]");
    o.check(std::isfinite(u), "control not finite");
    o.check(secs < 5.0, "run slower than 5 s");
    return o;
}

Outcome a4() {
    Outcome o;
    const auto s = shipped_scenario("pendulum_case3");
    const auto adaptive = simulate(s, ControllerKind::afsmc);
    const auto baseline = simulate(s, ControllerKind::smc);
    const double pa = peak_dev(adaptive, 2, 15, 30);
    const double pb = peak_dev(baseline, 2, 15, 30);
    o.detail << "peak|x3-1|[15,30] afsmc=" << pa << " smc=" << pb;
    o.check(pa < pb, "AFSMC peak not below SMC peak");
    o.check(bands_hold(adaptive, 35.0, 40.0, 0.02, 0.05), "AFSMC not back in bands by t=35");
    return o;
}

Outcome a5() {
    Outcome o;
    const auto c1 = shipped_scenario("tora_case1");
    const auto log1 = simulate(c1, ControllerKind::afsmc);
    o.detail << "case1 max|x1|[50,60]=" << peak_dev(log1, 0, 50, 60) << " max|x3|[50,60]=" << peak_dev(log1, 2, 50, 60);
    o.check(std::abs(std::get<plants::ToraParams>(c1.plant.params).epsilon_at(0.0) - 1.0 / 3.0) < 1e-12,
            "nominal epsilon is not 1/3");
    o.check(c1.sim.x0[2] == pi / 6, "initial rotor angle is not pi/6");
    o.check(bands_hold(log1, 50.0, 60.0, 0.02, 0.05), "case1 bands violated after t=50");

    const auto c2 = shipped_scenario("tora_case2");
    const double t_end = c2.plant.disturbance->t_end;
    sim::MetricOptions opt;
    opt.thresholds = {0.02, 0.05};
    const auto ma = sim::compute_metrics(simulate(c2, ControllerKind::afsmc).slice(t_end), opt);
    const auto mb = sim::compute_metrics(simulate(c2, ControllerKind::smc).slice(t_end), opt);
    o.detail << " case2 settle-after-" << t_end << " afsmc=" << ma.settle_time << " smc=" << mb.settle_time;
    o.check(std::isfinite(ma.settle_time), "AFSMC never settles after the disturbance");
    o.check(ma.settle_time <= mb.settle_time, "AFSMC settles later than SMC");
    return o;
}

Outcome a6() {
    Outcome o;
    std::size_t rows_checked = 0;
    double worst_sum = 0.0;
    for (auto s : config::load_config(shipped_config_path())) {
        s.sim.record_every = 1;
        for (auto kind : s.controllers) {
            const auto log = simulate(s, kind);
            const std::string tag = s.name + "/" + config::to_string(kind);
            const double t_tail = 0.75 * s.sim.t_end;
            for (const auto& r : log.rows) {
                ++rows_checked;
                if (std::abs(r.z) > s.controller.zU) o.check(false, tag + " |z|>zU");
                if (r.t >= t_tail && std::abs(r.s1) > s.controller.phi1) o.check(false, tag + " |s1|>phi1 in tail");
                if (kind == ControllerKind::afsmc) {
                    if (r.theta_f_norm > s.f_hat.bounds.norm_max) o.check(false, tag + " |theta_f|>M_f");
                    if (r.theta_g_norm > s.g_hat.bounds.norm_max || r.theta_g_norm < s.g_hat.bounds.norm_min) {
                        o.check(false, tag + " |theta_g| outside [eps, M_g]");
                    }
                    for (const auto* grid : {&s.f_hat.grid, &s.g_hat.grid}) {
                        double sum = 0.0;
                        for (double v : grid->basis(r.x)) sum += v;
                        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
                    }
                }
            }
        }
    }
    o.check(worst_sum <= 1e-12, "basis sum off by more than 1e-12");
    o.detail << "rows=" << rows_checked << " worst|sum(xi)-1|=" << worst_sum;
    return o;
}

template <typename Field>
double jacobian_mismatch(Field field, const StateVec& x, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const StateVec v{n(rng), n(rng), n(rng), n(rng)};
    const double h = 1e-6;
    StateVec xp = x, xm = x;
    State<std::complex<double>> xc;
    for (int i = 0; i < 4; ++i) {
        xp[i] += h * v[i];
        xm[i] -= h * v[i];
        xc[i] = {x[i], 1e-30 * v[i]};
    }
    const auto fp = field(xp), fm = field(xm);
    const auto fc = field(xc);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double fd = (fp[i] - fm[i]) / (2 * h);
        const double exact = fc[i].imag() / 1e-30;
        worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
    }
    return worst;
}

double rk4_error(double dt) {
    std::vector<double> y{1.0};
    const int n = static_cast<int>(std::lround(1.0 / dt));
    auto field = [](double, std::span<const double> s) { return std::vector<double>(s.begin(), s.end()); };
    for (int k = 0; k < n; ++k) y = sim::rk4_step(field, y, k * dt, dt);
    return std::abs(y[0] - std::exp(1.0));
}

Outcome a7() {
    Outcome o;
    const double e1 = rk4_error(0.1), e2 = rk4_error(0.05), e3 = rk4_error(0.025);
    const double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
    o.detail << "rk4 order=" << o1 << "," << o2;
    o.check(o1 >= 3.9 && o1 <= 4.1 && o2 >= 3.9 && o2 <= 4.1, "RK4 order outside [3.9, 4.1]");

    std::map<std::string, double> worst_halving;
    for (const auto& s : config::load_config(shipped_config_path())) {
        auto half = s;
        half.sim.dt = s.sim.dt / 2;
        half.sim.record_every = s.sim.record_every * 2;
        for (auto kind : s.controllers) {
            const auto a = simulate(s, kind);
            const auto b = simulate(half, kind);
            if (a.rows.size() != b.rows.size()) {
                o.check(false, s.name + " row count differs after halving dt");
                continue;
            }
            double d = 0.0;
            for (std::size_t k = 0; k < a.rows.size(); ++k) {
                for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(a.rows[k].x[i] - b.rows[k].x[i]));
            }
            auto& w = worst_halving[config::to_string(kind)];
            w = std::max(w, d);
            if (d >= 1e-3) o.check(false, s.name + "/" + config::to_string(kind) + " step-halving change >= 1e-3");
        }
    }
    for (const auto& [kind, w] : worst_halving) o.detail << " step-halving sup(" << kind << ")=" << w;

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst_jac = 0.0;
    plants::PendulumParams pp;
    pp.schedule = plants::PendulumSchedule{0.05, 0.5};
    plants::ToraParams tp;
    tp.schedule = plants::ToraSchedule{0.1, 0.4};
    for (int k = 0; k < 100; ++k) {
        const StateVec xp{u(rng) * 1.2, u(rng) * 3, u(rng) * 2, u(rng) * 2};
        const double up = 5 * u(rng), tpd = 20 * std::abs(u(rng));
        worst_jac = std::max(worst_jac, jacobian_mismatch([&](const auto& s) {
            return plants::pendulum_dynamics(s, std::remove_cvref_t<decltype(s[0])>(up), tpd, pp);
        }, xp, rng));
        const StateVec xt{u(rng), u(rng) * 2, u(rng) * pi, u(rng) * 3};
        const double ut = 2 * u(rng), tt = 20 * std::abs(u(rng));
        worst_jac = std::max(worst_jac, jacobian_mismatch([&](const auto& s) {
            return plants::tora_dynamics(s, std::remove_cvref_t<decltype(s[0])>(ut), tt, tp);
        }, xt, rng));
    }
    o.detail << " jacobian rel=" << worst_jac;
    o.check(worst_jac <= 1e-4, "finite-difference Jacobian mismatch above 1e-4");
    return o;
}

Outcome a8() {
    Outcome o;
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0.0, 1.0);
    double worst = 0.0;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); };

    for (const char* name : {"pendulum_case1", "tora_case1"}) {
        const auto s = shipped_scenario(name);
        const auto& p = s.controller;
        const std::size_t nf = s.f_hat.grid.rule_count(), ng = s.g_hat.grid.rule_count();
        for (int k = 0; k < 50; ++k) {
            const StateVec x{p.desired[0] + 0.3 * n(rng), p.desired[1] + n(rng), p.desired[2] + n(rng),
                             p.desired[3] + n(rng)};
            std::vector<double> tf(nf), tg(ng);
            for (auto& v : tf) v = 2 * n(rng);
            for (auto& v : tg) v = 1 + 0.5 * n(rng);
            const control::ControllerState ctrl{fuzzy::FuzzyApproximator(s.f_hat.grid, tf, {1e6, 0, 0}),
                                                fuzzy::FuzzyApproximator(s.g_hat.grid, tg, {1e6, 0.05, 0.05})};
            const auto ls = control::surfaces(x, p);
            const auto os = oracle::surfaces(x, p.desired, p.c1, p.c2, p.phi2, p.zU);
            worst = std::max({worst, rel(ls.s1, os.s1), rel(ls.s2, os.s2), rel(ls.z, os.z)});

            const double f_hat = oracle::dot(tf, s.f_hat.grid.basis(x));
            const double g_hat = std::max(0.05, oracle::dot(tg, s.g_hat.grid.basis(x)));
            const double u_ref = oracle::control_law(x[1] - p.desired[1], os.s1, f_hat, g_hat, p.c1, p.Kp, p.phi1);
            const double u = control::afsmc_control(x, ctrl, p);
            worst = std::max(worst, rel(u, u_ref));

            const auto xi = s.f_hat.grid.basis(x);
            const auto eta = s.g_hat.grid.basis(x);
            const auto r = control::adaptation_rates(os.s1, xi, eta, u_ref, p);
            for (std::size_t i = 0; i < nf; ++i) worst = std::max(worst, rel(r.theta_f[i], p.gamma1 * os.s1 * xi[i]));
            for (std::size_t i = 0; i < ng; ++i) {
                worst = std::max(worst, rel(r.theta_g[i], p.gamma2 * os.s1 * eta[i] * u_ref));
            }
        }
    }

    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        plants::PendulumParams pp;
        pp.m_p = 0.1 + 0.05 * u(rng);
        pp.m_c = 1.0 + 0.5 * u(rng);
        const StateVec x{u(rng), 2 * u(rng), u(rng), u(rng)};
        const double in = 5 * u(rng);
        const auto a = plants::pendulum_dynamics<double>(x, in, 0.0, pp);
        const auto b = oracle::pendulum(x, in, pp.m_p, pp.m_c, pp.L, pp.g, true);
        for (int i = 0; i < 4; ++i) worst = std::max(worst, rel(a[i], b[i]));

        plants::ToraParams tp;
        tp.m = 0.5 + 0.1 * u(rng);
        tp.M = 2.0 + 0.4 * u(rng);
        const StateVec y{u(rng), u(rng), pi * u(rng), 2 * u(rng)};
        const auto c = plants::tora_dynamics<double>(y, in, 0.0, tp);
        const auto d = oracle::tora(y, in, oracle::tora_epsilon(tp.m, tp.M, tp.I, tp.e));
        for (int i = 0; i < 4; ++i) worst = std::max(worst, rel(c[i], d[i]));
    }
    o.detail << "worst relative mismatch=" << worst;
    o.check(worst <= 1e-10, "oracle mismatch above 1e-10");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"A1 epsilon reproduction", a1},
        {"A2 pendulum case I convergence", [] { return pendulum_bands("pendulum_case1"); }},
        {"A3 pendulum case II convergence", [] { return pendulum_bands("pendulum_case2"); }},
        {"A4 pendulum case III disturbance attenuation", a4},
        {"A5 TORA cases I-II", a5},
        {"A6 invariant suite", a6},
        {"A7 numerical hygiene", a7},
        {"A8 oracle equivalence", a8},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        std::printf("%s  %s  %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str());
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
