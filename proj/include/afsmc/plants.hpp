#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "afsmc/errors.hpp"
#include "afsmc/state.hpp"

namespace afsmc::plants {

/// Sinusoidal mass variation nominal + amplitude*sin(t).
inline double mass_at(double t, std::optional<double> amplitude, double nominal) {
    if (!amplitude) return nominal;
    if (std::abs(*amplitude) >= nominal) {
        throw ConfigError("mass schedule amplitude " + std::to_string(*amplitude) + " would drive mass " +
                          std::to_string(nominal) + " non-positive");
    }
    return nominal + *amplitude * std::sin(t);
}

/// Force amplitude*cos(frequency*t) active on the closed window [t_start, t_end].
struct DisturbanceSpec {
    double amplitude = 0.0;
    double frequency = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;

    void validate() const {
        if (!(t_start < t_end)) throw ConfigError("disturbance window needs t_start < t_end");
        if (!std::isfinite(amplitude) || !std::isfinite(frequency)) throw ConfigError("disturbance must be finite");
    }
};

inline double disturbance_force(double t, const DisturbanceSpec& dist) {
    if (t < dist.t_start || t > dist.t_end) return 0.0;
    return dist.amplitude * std::cos(dist.frequency * t);
}

inline double disturbance_force(double t, const std::optional<DisturbanceSpec>& dist) {
    return dist ? disturbance_force(t, *dist) : 0.0;
}

/// f1, g1, f2, g2 of the affine form  x2' = f1 + g1 u,  x4' = f2 + g2 u.
template <typename Scalar>
struct AffineTerms {
    Scalar f1;
    Scalar g1;
    Scalar f2;
    Scalar g2;
};

template <typename Scalar>
State<Scalar> affine_field(const State<Scalar>& x, const AffineTerms<Scalar>& a, Scalar input) {
    return {x[1], a.f1 + a.g1 * input, x[3], a.f2 + a.g2 * input};
}

// ---------------------------------------------------------------------------
// Cart-pole. x1 pole angle from vertical, x2 its rate, x3 cart position, x4 cart velocity.

/// Mass multiplying g*sin(x1) in the pole equation. The classic cart-pole
/// derivation carries the total mass; pole_mass keeps only m_p.
enum class GravityTerm { total_mass, pole_mass };

struct PendulumSchedule {
    double m_p_amplitude = 0.0;
    double m_c_amplitude = 0.0;
};

struct PendulumParams {
    double m_p = 0.1;  // kg
    double m_c = 1.0;  // kg
    double L = 0.5;    // m, half pole length
    double g = 9.8;    // m/s^2
    GravityTerm gravity_term = GravityTerm::total_mass;
    std::optional<PendulumSchedule> schedule;

    void validate() const {
        if (!(m_p > 0 && m_c > 0 && L > 0 && g > 0)) throw ConfigError("pendulum m_p, m_c, L, g must be positive");
        if (schedule) {
            if (std::abs(schedule->m_p_amplitude) >= m_p || std::abs(schedule->m_c_amplitude) >= m_c) {
                throw ConfigError("pendulum mass schedule amplitude must be smaller than the nominal mass");
            }
        }
    }

    /// Masses (m_p, m_c) at time t.
    std::pair<double, double> masses_at(double t) const {
        if (!schedule) return {m_p, m_c};
        return {mass_at(t, schedule->m_p_amplitude, m_p), mass_at(t, schedule->m_c_amplitude, m_c)};
    }
};

template <typename Scalar>
AffineTerms<Scalar> pendulum_terms(const State<Scalar>& x, double m_p, double m_c, const PendulumParams& p) {
    using std::cos;
    using std::sin;
    const double m_t = m_c + m_p;
    const double gravity_mass = p.gravity_term == GravityTerm::total_mass ? m_t : m_p;
    const Scalar s = sin(x[0]);
    const Scalar c = cos(x[0]);
    const Scalar denom = (4.0 / 3.0) * m_t - m_p * c * c;
    const Scalar rate_sq = x[1] * x[1];
    return {
        (gravity_mass * p.g * s - m_p * p.L * s * c * rate_sq) / (p.L * denom),
        c / (p.L * denom),
        (-(4.0 / 3.0) * m_p * p.L * rate_sq * s + m_p * p.g * s * c) / denom,
        (4.0 / 3.0) / denom,
    };
}

/// State derivative with the disturbance force added to the input.
template <typename Scalar>
State<Scalar> pendulum_dynamics(const State<Scalar>& x, Scalar u, double t, const PendulumParams& p,
                                const std::optional<DisturbanceSpec>& dist = std::nullopt) {
    const auto [m_p, m_c] = p.masses_at(t);
    return affine_field(x, pendulum_terms(x, m_p, m_c, p), u + disturbance_force(t, dist));
}

// ---------------------------------------------------------------------------
// TORA. x1 platform displacement, x2 its velocity, x3 rotor angle, x4 rotor rate.

/// Coupling strength m e / sqrt((I + m e^2)(M + m)).
inline double epsilon(double m, double M, double I, double e) {
    if (!(m > 0 && M > 0 && I > 0 && e > 0)) throw ConfigError("TORA m, M, I, e must be positive");
    return m * e / std::sqrt((I + m * e * e) * (M + m));
}

struct ToraSchedule {
    double m_amplitude = 0.0;
    double M_amplitude = 0.0;
};

struct ToraParams {
    double m = 0.5;  // kg, rotor
    double M = 2.0;  // kg, platform
    double I = 0.1;  // kg m^2
    double e = 0.5;  // m
    std::optional<ToraSchedule> schedule;

    void validate() const {
        if (!(epsilon(m, M, I, e) < 1.0)) throw ConfigError("TORA coupling epsilon must be below 1");
        if (schedule) {
            if (std::abs(schedule->m_amplitude) >= m || std::abs(schedule->M_amplitude) >= M) {
                throw ConfigError("TORA mass schedule amplitude must be smaller than the nominal mass");
            }
            // Extremes of the schedule, both masses move with the same sin(t).
            for (double s : {-1.0, 1.0}) {
                const double eps = epsilon(m + s * schedule->m_amplitude, M + s * schedule->M_amplitude, I, e);
                if (!(eps < 1.0)) throw ConfigError("TORA mass schedule reaches epsilon >= 1");
            }
        }
    }

    double epsilon_at(double t) const {
        if (!schedule) return epsilon(m, M, I, e);
        return epsilon(mass_at(t, schedule->m_amplitude, m), mass_at(t, schedule->M_amplitude, M), I, e);
    }
};

template <typename Scalar>
AffineTerms<Scalar> tora_terms(const State<Scalar>& x, double eps) {
    using std::cos;
    using std::sin;
    const Scalar c = cos(x[2]);
    const Scalar s = sin(x[2]);
    const Scalar denom = 1.0 - eps * eps * c * c;
    const Scalar rate_sq = x[3] * x[3];
    return {
        (-x[0] + eps * rate_sq * s) / denom,
        -eps * c / denom,
        eps * c * (x[0] - eps * rate_sq * s) / denom,
        1.0 / denom,
    };
}

/// State derivative; the disturbance is a force collocated with the input.
template <typename Scalar>
State<Scalar> tora_dynamics(const State<Scalar>& x, Scalar u, double t, const ToraParams& p,
                            const std::optional<DisturbanceSpec>& dist = std::nullopt) {
    return affine_field(x, tora_terms(x, p.epsilon_at(t)), u + disturbance_force(t, dist));
}

// ---------------------------------------------------------------------------

enum class PlantKind { pendulum, tora };

inline const char* to_string(PlantKind kind) { return kind == PlantKind::pendulum ? "pendulum" : "tora"; }

struct PlantSpec {
    std::variant<PendulumParams, ToraParams> params;
    std::optional<DisturbanceSpec> disturbance;
    int input_sign = 1;  // sign of g1 near the target; the adaptive law estimates |g1|

    PlantKind kind() const {
        return std::holds_alternative<PendulumParams>(params) ? PlantKind::pendulum : PlantKind::tora;
    }

    void validate() const {
        std::visit([](const auto& p) { p.validate(); }, params);
        if (disturbance) disturbance->validate();
        if (input_sign != 1 && input_sign != -1) throw ConfigError("input_sign must be +1 or -1");
    }

    /// Same plant with schedules and disturbance removed.
    PlantSpec nominal() const {
        PlantSpec out = *this;
        out.disturbance.reset();
        std::visit([](auto& p) { p.schedule.reset(); }, out.params);
        return out;
    }
};

template <typename Scalar>
State<Scalar> dynamics(const PlantSpec& plant, const State<Scalar>& x, Scalar u, double t) {
    if (const auto* p = std::get_if<PendulumParams>(&plant.params)) {
        return pendulum_dynamics(x, u, t, *p, plant.disturbance);
    }
    return tora_dynamics(x, u, t, std::get<ToraParams>(plant.params), plant.disturbance);
}

/// Affine terms at time t including any mass schedule (disturbance excluded).
inline AffineTerms<double> affine_terms(const PlantSpec& plant, const StateVec& x, double t) {
    if (const auto* p = std::get_if<PendulumParams>(&plant.params)) {
        const auto [m_p, m_c] = p->masses_at(t);
        return pendulum_terms(x, m_p, m_c, *p);
    }
    return tora_terms(x, std::get<ToraParams>(plant.params).epsilon_at(t));
}

/// Affine terms of the nominal plant: no schedule, no disturbance.
inline AffineTerms<double> nominal_terms(const PlantSpec& plant, const StateVec& x) {
    if (const auto* p = std::get_if<PendulumParams>(&plant.params)) return pendulum_terms(x, p->m_p, p->m_c, *p);
    const auto& p = std::get<ToraParams>(plant.params);
    return tora_terms(x, epsilon(p.m, p.M, p.I, p.e));
}

}  // namespace afsmc::plants
