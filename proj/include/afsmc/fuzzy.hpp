#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "afsmc/errors.hpp"
#include "afsmc/state.hpp"

namespace afsmc::fuzzy {

/// Gaussian membership degree exp(-((value - center) / width)^2).
inline double membership(double value, double center, double width) {
    if (!(width > 0.0)) throw ConfigError("membership width must be positive, got " + std::to_string(width));
    const double r = (value - center) / width;
    return std::exp(-r * r);
}

/// One input of a membership grid: which state entry it reads and where its sets sit.
struct GridInput {
    std::size_t index = 0;
    std::vector<double> centers;
    double width = 1.0;
};

/// Evenly spaced centers over [lo, hi]; the width defaults to the spacing.
inline GridInput evenly_spaced(std::size_t index, double lo, double hi, std::size_t count) {
    if (count < 2 || !(hi > lo)) throw ConfigError("evenly spaced grid needs count >= 2 and hi > lo");
    GridInput in;
    in.index = index;
    in.centers.resize(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) in.centers[k] = lo + step * static_cast<double>(k);
    in.centers.back() = hi;
    in.width = step;
    return in;
}

/// Product-rule grid over selected state components. Rules enumerate the
/// cartesian product of per-input centers, last input varying fastest.
class MembershipGrid {
public:
    MembershipGrid() = default;

    explicit MembershipGrid(std::vector<GridInput> inputs) : inputs_(std::move(inputs)) {
        if (inputs_.empty()) throw ConfigError("membership grid needs at least one input");
        for (const auto& in : inputs_) {
            if (in.index > 3) throw ConfigError("grid input index " + std::to_string(in.index) + " outside {0,1,2,3}");
            if (in.centers.size() < 2) throw ConfigError("each grid input needs at least 2 centers");
            for (std::size_t k = 1; k < in.centers.size(); ++k) {
                if (!(in.centers[k] > in.centers[k - 1])) throw ConfigError("grid centers must be strictly increasing");
            }
            if (!(in.width > 0.0)) throw ConfigError("grid width must be positive");
        }
    }

    const std::vector<GridInput>& inputs() const noexcept { return inputs_; }

    std::size_t rule_count() const noexcept {
        std::size_t n = 1;
        for (const auto& in : inputs_) n *= in.centers.size();
        return n;
    }

    /// Normalized firing strengths. Components are non-negative and sum to one.
    std::vector<double> basis(const StateVec& x) const {
        std::vector<double> out(1, 1.0);
        std::vector<double> next;
        for (const auto& in : inputs_) {
            next.clear();
            next.reserve(out.size() * in.centers.size());
            for (double prefix : out) {
                for (double c : in.centers) next.push_back(prefix * membership(x[in.index], c, in.width));
            }
            out.swap(next);
        }
        const double total = std::accumulate(out.begin(), out.end(), 0.0);
        if (!(total > 0.0) || !std::isfinite(total)) {
            throw DegenerateActivationError("all fuzzy rule activations vanished; widen the grid or check the state");
        }
        for (double& v : out) v /= total;
        return out;
    }

private:
    std::vector<GridInput> inputs_;
};

/// Norm constraints on a parameter vector plus an optional floor on the
/// approximator output (used to keep the input-gain estimate positive).
struct ProjectionBounds {
    double norm_max = 50.0;
    double norm_min = 0.0;
    double value_floor = 0.0;

    void validate() const {
        if (!(norm_min >= 0.0 && norm_min < norm_max)) throw ConfigError("projection bounds need 0 <= norm_min < norm_max");
        if (!(value_floor >= 0.0)) throw ConfigError("projection value_floor must be non-negative");
    }
};

inline double norm(std::span<const double> v) {
    double acc = 0.0;
    for (double e : v) acc += e * e;
    return std::sqrt(acc);
}

namespace detail {

/// Scales v to (approximately) norm `target`, then nudges by ulps so the
/// result is inside [lo, hi]; this keeps project() exactly idempotent.
inline void rescale_into(std::vector<double>& v, double current, double target, double lo, double hi) {
    const double k = target / current;
    for (double& e : v) e *= k;
    for (int guard = 0; guard < 8 && norm(v) > hi; ++guard) {
        for (double& e : v) e = std::nextafter(e, 0.0);
    }
    for (int guard = 0; guard < 8 && norm(v) < lo; ++guard) {
        for (double& e : v) e = std::nextafter(e, e > 0 ? HUGE_VAL : -HUGE_VAL);
    }
}

}  // namespace detail

/// Radial projection onto { norm_min <= |theta| <= norm_max }. A zero vector
/// with a positive lower bound is mapped onto the first axis.
inline std::vector<double> project(std::vector<double> theta, const ProjectionBounds& bounds) {
    if (theta.empty()) return theta;
    const double n = norm(theta);
    if (n > bounds.norm_max) {
        detail::rescale_into(theta, n, bounds.norm_max, bounds.norm_min, bounds.norm_max);
    } else if (bounds.norm_min > 0.0) {
        if (n == 0.0) {
            theta[0] = bounds.norm_min;
        } else if (n < bounds.norm_min) {
            detail::rescale_into(theta, n, bounds.norm_min, bounds.norm_min, bounds.norm_max);
        }
    }
    return theta;
}

/// Linearly parameterized estimate theta^T xi(x).
class FuzzyApproximator {
public:
    FuzzyApproximator() = default;

    FuzzyApproximator(MembershipGrid grid, std::vector<double> theta, ProjectionBounds bounds)
        : grid_(std::move(grid)), theta_(std::move(theta)), bounds_(bounds) {
        bounds_.validate();
        if (theta_.size() != grid_.rule_count()) {
            throw ConfigError("theta length " + std::to_string(theta_.size()) + " does not match rule count " +
                              std::to_string(grid_.rule_count()));
        }
        theta_ = project(std::move(theta_), bounds_);
    }

    /// Every parameter set to the same value.
    static FuzzyApproximator uniform(MembershipGrid grid, double value, ProjectionBounds bounds) {
        std::vector<double> theta(grid.rule_count(), value);
        return FuzzyApproximator(std::move(grid), std::move(theta), bounds);
    }

    const MembershipGrid& grid() const noexcept { return grid_; }
    const ProjectionBounds& bounds() const noexcept { return bounds_; }
    std::span<const double> theta() const noexcept { return theta_; }
    std::size_t size() const noexcept { return theta_.size(); }

    /// Replaces the parameters, projecting them onto the bounds.
    void set_theta(std::vector<double> theta) {
        if (theta.size() != theta_.size()) throw ConfigError("theta length mismatch");
        theta_ = project(std::move(theta), bounds_);
    }

    std::vector<double> basis(const StateVec& x) const { return grid_.basis(x); }

    double approximate(const StateVec& x) const { return evaluate(theta_, grid_.basis(x)); }

    /// Output for given parameters and a precomputed basis, honoring value_floor.
    double evaluate(std::span<const double> theta, std::span<const double> xi) const {
        double raw = std::inner_product(theta.begin(), theta.end(), xi.begin(), 0.0);
        if (bounds_.value_floor > 0.0 && raw < bounds_.value_floor) raw = bounds_.value_floor;
        return raw;
    }

private:
    MembershipGrid grid_;
    std::vector<double> theta_;
    ProjectionBounds bounds_;
};

}  // namespace afsmc::fuzzy
