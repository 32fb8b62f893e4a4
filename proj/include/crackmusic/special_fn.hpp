#pragma once

#include "crackmusic/scene.hpp"
#include "crackmusic/types.hpp"

namespace crackmusic {

/// Bessel function of the first kind, order zero.
///
/// Power series for |x| < 14, Hankel amplitude/phase asymptotics beyond.
/// Absolute error below 1e-10 on |x| <= 200. Throws ArgumentError for
/// non-finite input.
double bessel_j0(double x);

/// Weighted mean of exp(i w theta_n . x) over the direction set, using
/// DirectionSet::quadrature_weights(). For a full circle this is the
/// trapezoid approximation of (1/2pi) \int exp(i w theta . x) dtheta = J0(w|x|).
Complex direction_average(double w, Point2 x, const DirectionSet& dirs);

/// Plain arithmetic mean (1/N) sum_n exp(i w theta_n . x). On a closed set the
/// repeated end direction is counted twice, which leaves an O(1/N) bias
/// relative to J0.
Complex direction_mean(double w, Point2 x, const DirectionSet& dirs);

}  // namespace crackmusic
