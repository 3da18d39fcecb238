#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace afsmc {

/// Plant state [x1, x2, x3, x4]: two position/velocity pairs of the affine SIMO form.
/// The scalar is templated so the dynamics can be evaluated with complex steps.
template <typename Scalar>
using State = std::array<Scalar, 4>;

using StateVec = State<double>;

inline bool is_finite(const StateVec& x) {
    for (double v : x) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

/// Componentwise x - desired.
inline StateVec state_error(const StateVec& x, const StateVec& desired) {
    return {x[0] - desired[0], x[1] - desired[1], x[2] - desired[2], x[3] - desired[3]};
}

}  // namespace afsmc
