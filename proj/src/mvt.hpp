#pragma once

#include <array>

#include "integrator.hpp"

namespace rdde {

/// Mean-value points for the three difference quotients of w, w', w'' over
/// [t_k - delay(t_k), t_k].
struct MvtPoints {
  double t_k = 0.0;
  double delay = 0.0;
  std::array<double, 3> points{};
  /// w^(i+1)(point_i) - slope_i
  std::array<double, 3> residuals{};
  std::array<double, 3> slopes{};
  /// |w'(t_k0)|, |w''(t_k1)|, |w'''(t_k2)|
  std::array<double, 3> magnitudes{};
  /// false when no sign change was found and the best sample was returned
  std::array<bool, 3> bracketed{};
  /// the sign change collapsed onto a jump of w^(i+1): the point carries the
  /// one-sided limits' convex hull as its derivative, the slope lies in it,
  /// and the magnitude reported is |slope|
  std::array<bool, 3> generalized{};
};

inline constexpr int kMvtScanSamples = 256;

/// Leftmost root of w^(i+1)(s) - slope_i from a 256-sample scan, bisected to
/// a 1e-12 bracket; argmin |w^(i+1) - slope_i| over the samples when no sign
/// change is seen. A bracket that shrinks onto a jump of w^(i+1) yields a
/// generalized mean-value point (Lebourg): residual 0 against the one-sided
/// limits' hull, magnitude |slope|. Throws DomainError if delay(t_k) <= 0 or
/// the window leaves the trajectory domain.
MvtPoints locate_mvt_points(const Trajectory& tr, double t_k);

}  // namespace rdde
