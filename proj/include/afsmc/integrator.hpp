#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "afsmc/errors.hpp"

namespace afsmc::sim {

namespace detail {

inline void check_finite(std::span<const double> v, double t) {
    for (double e : v) {
        if (!std::isfinite(e)) throw DivergenceError("non-finite derivative at t = " + std::to_string(t), t);
    }
}

inline std::vector<double> axpy(std::span<const double> x, double a, std::span<const double> k) {
    std::vector<double> out(x.begin(), x.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * k[i];
    return out;
}

}  // namespace detail

/// Classical fourth-order Runge-Kutta step. `deriv(t, x)` returns dx/dt as a
/// std::vector<double> of the same length as x.
template <typename Deriv>
std::vector<double> rk4_step(Deriv&& deriv, std::span<const double> x, double t, double dt) {
    const double half = 0.5 * dt;
    const std::vector<double> k1 = deriv(t, x);
    detail::check_finite(k1, t);
    const std::vector<double> y2 = detail::axpy(x, half, k1);
    const std::vector<double> k2 = deriv(t + half, std::span<const double>(y2));
    detail::check_finite(k2, t);
    const std::vector<double> y3 = detail::axpy(x, half, k2);
    const std::vector<double> k3 = deriv(t + half, std::span<const double>(y3));
    detail::check_finite(k3, t);
    const std::vector<double> y4 = detail::axpy(x, dt, k3);
    const std::vector<double> k4 = deriv(t + dt, std::span<const double>(y4));
    detail::check_finite(k4, t);

    std::vector<double> out(x.begin(), x.end());
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    detail::check_finite(out, t + dt);
    return out;
}

}  // namespace afsmc::sim
