#pragma once

#include "crackmusic/msr.hpp"
#include "crackmusic/scene.hpp"

namespace crackmusic {

/// Leading term of the small-crack far-field expansion:
///   u_inf(obs, inc) = -(2 pi / ln(h/2)) sum_m exp(i k (inc - obs) . z_m).
/// Only crack centers enter. Requires 0 < h < 2 and a nonempty scene.
Complex farfield_asym(Point2 obs, Point2 inc, const Scene& scene, double h);

/// K[j, l] = farfield_asym(-theta_j, theta_l, scene, h).
MsrMatrix assemble_msr(const Scene& scene, double h, const DirectionSet& dirs);

/// The factor A with A[n, m] = exp(i k theta_n . z_m), so that
/// assemble_msr(...) == -(2 pi / ln(h/2)) A A^T.
CMatrix steering_factor(const Scene& scene, const DirectionSet& dirs);

}  // namespace crackmusic
