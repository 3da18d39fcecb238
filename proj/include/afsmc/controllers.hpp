#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "afsmc/errors.hpp"
#include "afsmc/fuzzy.hpp"
#include "afsmc/plants.hpp"
#include "afsmc/state.hpp"

namespace afsmc::control {

/// Boundary-layer saturation: sign(v) outside [-1, 1], identity inside.
inline double sat(double v) {
    if (v >= 1.0) return 1.0;
    if (v <= -1.0) return -1.0;
    return v;
}

/// Gains and layers shared by the adaptive controller and the SMC baseline.
struct ControllerParams {
    double c1 = 1.0;      // 1/s, slope of s1
    double c2 = 1.0;      // 1/s, slope of s2
    double phi1 = 1.0;    // boundary layer of the s1 switching term
    double phi2 = 1.0;    // boundary layer on s2 inside the z transfer
    double Kp = 1.0;      // switching gain
    double zU = 0.5;      // |z| bound, must lie in (0, 1)
    double gamma1 = 1.0;  // adaptation rate of theta_f
    double gamma2 = 1.0;  // adaptation rate of theta_g
    StateVec desired{};

    void validate() const {
        const std::pair<const char*, double> positive[] = {{"c1", c1},     {"c2", c2}, {"phi1", phi1},
                                                          {"phi2", phi2}, {"Kp", Kp}, {"gamma1", gamma1},
                                                          {"gamma2", gamma2}};
        for (const auto& [name, value] : positive) {
            if (!(value > 0.0) || !std::isfinite(value)) {
                throw ConfigError(std::string(name) + " must be a positive finite number");
            }
        }
        if (!(zU > 0.0 && zU < 1.0)) throw ConfigError("zU must satisfy 0 < zU < 1");
        if (!is_finite(desired)) throw ConfigError("desired state must be finite");
    }
};

struct SurfaceSample {
    double s1 = 0.0;
    double s2 = 0.0;
    double z = 0.0;
};

/// Surfaces in error coordinates e = x - desired:
///   s2 = c2 e3 + e4,  z = sat(s2 / phi2) zU,  s1 = c1 (e1 - z) + e2.
inline SurfaceSample surfaces(const StateVec& x, const ControllerParams& p) {
    const StateVec e = state_error(x, p.desired);
    SurfaceSample out;
    out.s2 = p.c2 * e[2] + e[3];
    out.z = sat(out.s2 / p.phi2) * p.zU;
    out.s1 = p.c1 * (e[0] - out.z) + e[1];
    return out;
}

/// The adaptive law given already evaluated estimates f_hat(x) and g_hat(x) > 0.
inline double afsmc_law(const StateVec& x, double s1, double f_hat, double g_hat, const ControllerParams& p) {
    const double e2 = x[1] - p.desired[1];
    return (-p.c1 * e2 - f_hat - p.Kp * sat(s1 * g_hat / p.phi1)) / g_hat;
}

/// Estimates of f1 and |g1|. The g estimate must carry a positive output floor.
struct ControllerState {
    fuzzy::FuzzyApproximator f_hat;
    fuzzy::FuzzyApproximator g_hat;
    double last_u = 0.0;

    ControllerState(fuzzy::FuzzyApproximator f, fuzzy::FuzzyApproximator g) : f_hat(std::move(f)), g_hat(std::move(g)) {
        if (!(g_hat.bounds().value_floor > 0.0)) throw ConfigError("g_hat needs a positive value_floor");
    }
};

inline double afsmc_control(const StateVec& x, const ControllerState& ctrl, const ControllerParams& p) {
    const SurfaceSample s = surfaces(x, p);
    return afsmc_law(x, s.s1, ctrl.f_hat.approximate(x), ctrl.g_hat.approximate(x), p);
}

struct AdaptationRates {
    std::vector<double> theta_f;
    std::vector<double> theta_g;
};

/// theta_f' = gamma1 s1 xi,  theta_g' = gamma2 s1 eta u.
inline AdaptationRates adaptation_rates(double s1, std::span<const double> xi, std::span<const double> eta, double u,
                                        const ControllerParams& p) {
    AdaptationRates r;
    r.theta_f.resize(xi.size());
    r.theta_g.resize(eta.size());
    const double kf = p.gamma1 * s1;
    const double kg = p.gamma2 * s1 * u;
    for (std::size_t i = 0; i < xi.size(); ++i) r.theta_f[i] = kf * xi[i];
    for (std::size_t i = 0; i < eta.size(); ++i) r.theta_g[i] = kg * eta[i];
    return r;
}

struct AfsmcOutput {
    double u = 0.0;
    AdaptationRates rates;
    SurfaceSample sample;
};

/// One controller evaluation; does not touch ctrl.
inline AfsmcOutput afsmc_step(const StateVec& x, const ControllerState& ctrl, const ControllerParams& p) {
    AfsmcOutput out;
    out.sample = surfaces(x, p);
    const auto xi = ctrl.f_hat.basis(x);
    const auto eta = ctrl.g_hat.basis(x);
    const double f = ctrl.f_hat.evaluate(ctrl.f_hat.theta(), xi);
    const double g = ctrl.g_hat.evaluate(ctrl.g_hat.theta(), eta);
    out.u = afsmc_law(x, out.sample.s1, f, g, p);
    out.rates = adaptation_rates(out.sample.s1, xi, eta, out.u, p);
    return out;
}

/// Non-adaptive baseline on the true nominal model with the same surfaces:
///   u = (-c1 e2 - f1) / g1 - K1 sat(s1 g1 / phi1),  K1 = Kp / |g1|.
inline double decoupled_smc_control(const StateVec& x, const plants::PlantSpec& plant_nominal,
                                    const ControllerParams& p) {
    const auto terms = plants::nominal_terms(plant_nominal, x);
    if (std::abs(terms.g1) < 1e-9) throw SingularGainError("nominal input gain g1 vanished");
    const SurfaceSample s = surfaces(x, p);
    const double e2 = x[1] - p.desired[1];
    const double k1 = p.Kp / std::abs(terms.g1);
    return (-p.c1 * e2 - terms.f1) / terms.g1 - k1 * sat(s.s1 * terms.g1 / p.phi1);
}

}  // namespace afsmc::control
