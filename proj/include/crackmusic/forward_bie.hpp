#pragma once

#include <vector>

#include "crackmusic/msr.hpp"
#include "crackmusic/scene.hpp"

namespace crackmusic {

/// Layer density on an arc, sampled in the cosine-substituted parameter.
///
/// With z(s) the arc parametrization and s = cos(tau), the stored values are
/// psi(tau_j) = phi(z(cos tau_j)) |z'(cos tau_j)| |sin tau_j| at the nodes
/// tau_j = 2 pi j / n, j = 0..n-1. psi is even and 2pi-periodic, and absorbs
/// the inverse square-root endpoint behaviour of phi.
struct ArcDensity {
    std::vector<double> nodes;
    CVector values;
    int node_count = 0;
    double wavenumber = 0.0;
    Crack crack;
};

/// Nystrom solver for the sound-soft arc: single-layer ansatz
/// u_scat = \int_Gamma Phi(x, y) phi(y) ds(y), Phi = (i/4) H0^(1)(k|x-y|),
/// with u_inc + u_scat = 0 on the arc. The logarithmic part of the kernel is
/// integrated with trigonometric product weights, so convergence in n is
/// spectral for smooth arcs.
///
/// The system matrix depends only on (crack, k, n) and is factorized once;
/// every incidence direction reuses it.
class ArcSolver {
public:
    /// n is the number of periodic nodes: even, >= 8. Throws ArgumentError on
    /// bad input, NumericError if the discrete system is numerically singular.
    ArcSolver(Crack crack, double wavenumber, int n);

    [[nodiscard]] ArcDensity solve(Point2 inc, Complex amplitude = {1.0, 0.0}) const;
    /// One density per column, densities(:, l) for incs[l]; unit amplitude.
    [[nodiscard]] CMatrix solve_many(const std::vector<Point2>& incs) const;

    /// Far field of a density in the normalization of the small-crack
    /// expansion: u_inf(obs) = -\int_Gamma exp(-i k obs . y) phi(y) ds(y).
    [[nodiscard]] Complex farfield(const ArcDensity& density, Point2 obs) const;
    [[nodiscard]] CVector farfield_row(Point2 obs) const;

    /// Total field u_inc + S phi evaluated on the arc at parameter angle t
    /// (the point z(cos t)), using the Nystrom interpolant. Vanishes for the
    /// exact solution.
    [[nodiscard]] Complex total_field_on_arc(const ArcDensity& density, Point2 inc, double t,
                                             Complex amplitude = {1.0, 0.0}) const;

    [[nodiscard]] int node_count() const { return n_; }
    [[nodiscard]] double wavenumber() const { return k_; }
    [[nodiscard]] const std::vector<double>& node_angles() const { return tau_; }
    [[nodiscard]] const std::vector<Point2>& node_points() const { return points_; }
    [[nodiscard]] const std::vector<double>& node_speeds() const { return speed_; }
    [[nodiscard]] const Crack& crack() const { return crack_; }

private:
    [[nodiscard]] Complex smooth_kernel(double t, double tau, Point2 x, Point2 y, double s_t) const;
    [[nodiscard]] double log_weight(double t, int j) const;
    [[nodiscard]] CVector expand(const CVector& reduced) const;

    Crack crack_;
    double k_ = 0.0;
    int n_ = 0;
    int half_ = 0;
    std::vector<double> tau_;
    std::vector<Point2> points_;
    std::vector<double> speed_;
    Eigen::PartialPivLU<CMatrix> lu_;
};

ArcDensity solve_scatter(const Crack& crack, double wavenumber, Point2 inc, int n);

/// Far field of `density`; throws ArgumentError when `crack` or `wavenumber`
/// differs from the ones the density was computed with.
Complex farfield_bie(const ArcDensity& density, const Crack& crack, double wavenumber, Point2 obs);

/// max over check points of |u_inc + S phi| on the arc, checked at the
/// parameter angles midway between quadrature nodes.
double boundary_residual(const ArcDensity& density, Point2 inc, int check_points = 17);

/// Coupled single-layer system for all cracks of a scene, `n` nodes per
/// crack, including multiple scattering between cracks.
class SceneSolver {
public:
    SceneSolver(const Scene& scene, int n);

    /// Densities for each incidence: rows are crack-major blocks of n node values.
    [[nodiscard]] CMatrix solve_many(const std::vector<Point2>& incs) const;
    /// F[j, l] = u_inf(obs_j, inc_l).
    [[nodiscard]] CMatrix farfield_matrix(const std::vector<Point2>& obs, const std::vector<Point2>& incs) const;
    /// max |u_inc + sum_b S_b phi_b| over midpoint check angles on every crack.
    [[nodiscard]] double boundary_residual(Point2 inc, int check_points = 17) const;
    [[nodiscard]] int node_count() const { return n_; }
    [[nodiscard]] std::size_t crack_count() const { return arcs_.size(); }

private:
    std::vector<ArcSolver> arcs_;
    double k_ = 0.0;
    int n_ = 0;
    Eigen::PartialPivLU<CMatrix> lu_;
};

struct BieOptions {
    int initial_nodes = 64;
    int max_nodes = 2048;
    double convergence_tol = 1e-6;
};

/// MSR matrix from the coupled full-wave solve. The node count per crack is
/// doubled until the far-field matrix changes by less than convergence_tol
/// relative to its max entry. Throws NumericError if max_nodes is reached
/// without convergence.
MsrMatrix assemble_msr_bie(const Scene& scene, const DirectionSet& dirs, const BieOptions& options = {});

}  // namespace crackmusic
