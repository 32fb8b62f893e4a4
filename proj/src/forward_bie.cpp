#include "crackmusic/forward_bie.hpp"

#include <algorithm>
#include <cmath>

namespace crackmusic {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// (i/4) H0^(1)(k r) for r > 0
Complex helmholtz_green(double kr) {
    const double j0 = std::cyl_bessel_j(0.0, kr);
    const double y0 = std::cyl_neumann(0.0, kr);
    return {-0.25 * y0, 0.25 * j0};
}

// weights for \int_0^{2pi} ln(4 sin^2((t - tau)/2)) f(tau) dtau at tau_j = j pi / m, u = t - tau_j
double log_weight_at(double u, int m) {
    double sum = 0.0;
    for (int q = 1; q < m; ++q) sum += std::cos(q * u) / q;
    return -(2.0 * kPi / m) * sum - (kPi / (static_cast<double>(m) * m)) * std::cos(m * u);
}

// Single-layer operator of one arc on its own nodes, folded onto the m + 1
// even unknowns.
CMatrix self_block(const std::vector<double>& tau, const std::vector<Point2>& points,
                   const std::vector<double>& speed, double k) {
    const int n = static_cast<int>(tau.size());
    const int m = n / 2;
    // log weights only depend on the index difference between nodes
    std::vector<double> log_w(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) log_w[d] = log_weight_at(tau[d], m);

    CMatrix a = CMatrix::Zero(m + 1, m + 1);
    const double trap = kPi / m;
    for (int i = 0; i <= m; ++i) {
        const double cos_t = std::cos(tau[i]);
        for (int j = 0; j < n; ++j) {
            const bool coincident = (j == i) || (j == (n - i) % n);
            const double r = distance(points[i], points[j]);
            const double j0 = coincident ? 1.0 : std::cyl_bessel_j(0.0, k * r);
            Complex smooth;
            if (coincident) {
                smooth = Complex{-(std::log(0.5 * k) + kEulerGamma) / kTwoPi, 0.25} +
                         std::log(2.0 / speed[i]) / kTwoPi;
            } else {
                const double delta = cos_t - std::cos(tau[j]);
                smooth = helmholtz_green(k * r) + j0 * std::log(2.0 * std::abs(delta)) / kTwoPi;
            }
            const int d = ((i - j) % n + n) % n;
            const Complex entry = 0.5 * (-j0 * log_w[d] / kTwoPi + trap * smooth);
            const int col = j <= m ? j : n - j;
            a(i, col) += entry;
        }
    }
    return a;
}

// Field of arc b's nodes at arc a's first m + 1 nodes (disjoint arcs: smooth kernel).
CMatrix cross_block(const std::vector<Point2>& targets, const std::vector<Point2>& sources, double k) {
    const int n = static_cast<int>(sources.size());
    const int m = n / 2;
    CMatrix b = CMatrix::Zero(m + 1, m + 1);
    const double trap = kPi / m;
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j < n; ++j) {
            b(i, j <= m ? j : n - j) += 0.5 * trap * helmholtz_green(k * distance(targets[i], sources[j]));
        }
    }
    return b;
}

}  // namespace

ArcSolver::ArcSolver(Crack crack, double wavenumber, int n)
    : crack_(std::move(crack)), k_(wavenumber), n_(n), half_(n / 2) {
    if (!(wavenumber > 0.0) || !std::isfinite(wavenumber)) {
        throw ArgumentError("ArcSolver: wavenumber must be positive");
    }
    if (n < 8 || n % 2 != 0) throw ArgumentError("ArcSolver: node count must be even and >= 8");
    if (crack_length(crack_) <= 0.0) throw ArgumentError("ArcSolver: degenerate crack");

    tau_.resize(static_cast<std::size_t>(n_));
    points_.resize(tau_.size());
    speed_.resize(tau_.size());
    for (int j = 0; j < n_; ++j) {
        tau_[j] = kPi * j / half_;
        const double s = std::cos(tau_[j]);
        points_[j] = crack_point(crack_, s);
        speed_[j] = norm(crack_derivative(crack_, s));
    }

    CMatrix a = self_block(tau_, points_, speed_, k_);
    lu_ = a.partialPivLu();
    if (!(lu_.rcond() > 1e-14)) {
        throw NumericError("ArcSolver: boundary integral system is numerically singular (k^2 near an interior resonance?)");
    }
}

double ArcSolver::log_weight(double t, int j) const {
    return log_weight_at(t - tau_[j], half_);
}

CVector ArcSolver::expand(const CVector& reduced) const {
    CVector full(n_);
    for (int j = 0; j < n_; ++j) full(j) = reduced(j <= half_ ? j : n_ - j);
    return full;
}

ArcDensity ArcSolver::solve(Point2 inc, Complex amplitude) const {
    ArcDensity out;
    out.nodes = tau_;
    out.node_count = n_;
    out.wavenumber = k_;
    out.crack = crack_;
    out.values = amplitude * solve_many({inc}).col(0);
    return out;
}

CMatrix ArcSolver::solve_many(const std::vector<Point2>& incs) const {
    const int m = half_;
    CMatrix rhs(m + 1, static_cast<Eigen::Index>(incs.size()));
    for (std::size_t l = 0; l < incs.size(); ++l) {
        for (int i = 0; i <= m; ++i) rhs(i, static_cast<Eigen::Index>(l)) = -incident_field(points_[i], incs[l], k_);
    }
    const CMatrix reduced = lu_.solve(rhs);
    CMatrix out(n_, reduced.cols());
    for (Eigen::Index l = 0; l < reduced.cols(); ++l) out.col(l) = expand(reduced.col(l));
    return out;
}

CVector ArcSolver::farfield_row(Point2 obs) const {
    CVector row(n_);
    const double w = -0.5 * kPi / half_;
    for (int j = 0; j < n_; ++j) row(j) = w * std::polar(1.0, -k_ * dot(obs, points_[j]));
    return row;
}

Complex ArcSolver::farfield(const ArcDensity& density, Point2 obs) const {
    if (density.node_count != n_ || density.wavenumber != k_ || !(density.crack == crack_)) {
        throw ArgumentError("farfield: density was computed for a different solver");
    }
    return farfield_row(obs).transpose() * density.values;
}

Complex ArcSolver::total_field_on_arc(const ArcDensity& density, Point2 inc, double t,
                                      Complex amplitude) const {
    const double cos_t = std::cos(t);
    const Point2 x = crack_point(crack_, cos_t);
    const double speed = norm(crack_derivative(crack_, cos_t));
    const double trap = kPi / half_;
    Complex field = amplitude * incident_field(x, inc, k_);
    for (int j = 0; j < n_; ++j) {
        const double delta = cos_t - std::cos(tau_[j]);
        const double r = distance(x, points_[j]);
        Complex smooth;
        double j0 = 1.0;
        if (std::abs(delta) < 1e-15) {
            smooth = Complex{-(std::log(0.5 * k_) + kEulerGamma) / kTwoPi, 0.25} +
                     std::log(2.0 / speed) / kTwoPi;
        } else {
            j0 = std::cyl_bessel_j(0.0, k_ * r);
            smooth = helmholtz_green(k_ * r) + j0 * std::log(2.0 * std::abs(delta)) / kTwoPi;
        }
        field += 0.5 * (-j0 * log_weight(t, j) / kTwoPi + trap * smooth) * density.values(j);
    }
    return field;
}

ArcDensity solve_scatter(const Crack& crack, double wavenumber, Point2 inc, int n) {
    return ArcSolver(crack, wavenumber, n).solve(inc);
}

Complex farfield_bie(const ArcDensity& density, const Crack& crack, double wavenumber, Point2 obs) {
    if (density.wavenumber != wavenumber) throw ArgumentError("farfield_bie: wavenumber mismatch");
    if (!(density.crack == crack)) throw ArgumentError("farfield_bie: crack mismatch");
    const int n = density.node_count;
    const double w = -kPi / n;
    Complex sum{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        const Point2 y = crack_point(crack, std::cos(density.nodes[j]));
        sum += w * std::polar(1.0, -wavenumber * dot(obs, y)) * density.values(j);
    }
    return sum;
}

double boundary_residual(const ArcDensity& density, Point2 inc, int check_points) {
    const ArcSolver solver(density.crack, density.wavenumber, density.node_count);
    double worst = 0.0;
    for (int c = 0; c < check_points; ++c) {
        const double t = kPi * (c + 0.5) / check_points;
        worst = std::max(worst, std::abs(solver.total_field_on_arc(density, inc, t)));
    }
    return worst;
}

SceneSolver::SceneSolver(const Scene& scene, int n) : k_(scene.wavenumber), n_(n) {
    scene.validate();
    for (const auto& crack : scene.cracks) arcs_.emplace_back(crack, scene.wavenumber, n);
    const Eigen::Index block = n / 2 + 1;
    const auto count = static_cast<Eigen::Index>(arcs_.size());
    CMatrix a(block * count, block * count);
    for (Eigen::Index p = 0; p < count; ++p) {
        const ArcSolver& target = arcs_[p];
        for (Eigen::Index q = 0; q < count; ++q) {
            a.block(p * block, q * block, block, block) =
                p == q ? self_block(target.node_angles(), target.node_points(), target.node_speeds(), k_)
                       : cross_block(target.node_points(), arcs_[q].node_points(), k_);
        }
    }
    lu_ = a.partialPivLu();
    if (!(lu_.rcond() > 1e-14)) throw NumericError("SceneSolver: coupled boundary integral system is numerically singular");
}

CMatrix SceneSolver::solve_many(const std::vector<Point2>& incs) const {
    const int m = n_ / 2;
    const Eigen::Index block = m + 1;
    const auto count = static_cast<Eigen::Index>(arcs_.size());
    CMatrix rhs(block * count, static_cast<Eigen::Index>(incs.size()));
    for (Eigen::Index p = 0; p < count; ++p) {
        const auto& pts = arcs_[p].node_points();
        for (std::size_t l = 0; l < incs.size(); ++l) {
            for (int i = 0; i <= m; ++i) rhs(p * block + i, static_cast<Eigen::Index>(l)) = -incident_field(pts[i], incs[l], k_);
        }
    }
    const CMatrix reduced = lu_.solve(rhs);
    CMatrix out(n_ * count, reduced.cols());
    for (Eigen::Index p = 0; p < count; ++p) {
        for (int j = 0; j < n_; ++j) out.row(p * n_ + j) = reduced.row(p * block + (j <= m ? j : n_ - j));
    }
    return out;
}

CMatrix SceneSolver::farfield_matrix(const std::vector<Point2>& obs, const std::vector<Point2>& incs) const {
    const CMatrix densities = solve_many(incs);
    CMatrix rows(static_cast<Eigen::Index>(obs.size()), densities.rows());
    for (std::size_t j = 0; j < obs.size(); ++j) {
        for (std::size_t p = 0; p < arcs_.size(); ++p) {
            rows.block(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(p) * n_, 1, n_) =
                arcs_[p].farfield_row(obs[j]).transpose();
        }
    }
    return rows * densities;
}

double SceneSolver::boundary_residual(Point2 inc, int check_points) const {
    const CVector all = solve_many({inc}).col(0);
    const double trap = kPi / (n_ / 2);
    double worst = 0.0;
    for (std::size_t p = 0; p < arcs_.size(); ++p) {
        ArcDensity own;
        own.nodes = arcs_[p].node_angles();
        own.node_count = n_;
        own.wavenumber = k_;
        own.crack = arcs_[p].crack();
        own.values = all.segment(static_cast<Eigen::Index>(p) * n_, n_);
        for (int c = 0; c < check_points; ++c) {
            const double t = kPi * (c + 0.5) / check_points;
            Complex field = arcs_[p].total_field_on_arc(own, inc, t);
            const Point2 x = crack_point(arcs_[p].crack(), std::cos(t));
            for (std::size_t q = 0; q < arcs_.size(); ++q) {
                if (q == p) continue;
                const auto& src = arcs_[q].node_points();
                for (int j = 0; j < n_; ++j) {
                    field += 0.5 * trap * helmholtz_green(k_ * distance(x, src[j])) *
                             all(static_cast<Eigen::Index>(q) * n_ + j);
                }
            }
            worst = std::max(worst, std::abs(field));
        }
    }
    return worst;
}

MsrMatrix assemble_msr_bie(const Scene& scene, const DirectionSet& dirs, const BieOptions& options) {
    scene.validate();
    const auto size = static_cast<Eigen::Index>(dirs.size());
    MsrMatrix out;
    out.entries = CMatrix::Zero(size, size);
    out.directions = dirs;
    out.wavenumber = scene.wavenumber;
    out.backscatter_convention = true;
    out.provenance = Provenance::bie;

    std::vector<Point2> incs(dirs.size());
    std::vector<Point2> obs(dirs.size());
    for (std::size_t l = 0; l < dirs.size(); ++l) {
        incs[l] = dirs.direction(l);
        obs[l] = -1.0 * incs[l];
    }
    int n = options.initial_nodes;
    CMatrix previous = SceneSolver(scene, n).farfield_matrix(obs, incs);
    bool converged = false;
    while (n * 2 <= options.max_nodes) {
        n *= 2;
        CMatrix refined = SceneSolver(scene, n).farfield_matrix(obs, incs);
        const double scale = refined.cwiseAbs().maxCoeff();
        const double change = (refined - previous).cwiseAbs().maxCoeff();
        previous = std::move(refined);
        if (change <= options.convergence_tol * scale) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NumericError("assemble_msr_bie: far field did not converge within max_nodes");
    out.entries = std::move(previous);
    out.quadrature_nodes = n;
    out.reciprocity_audit = symmetry_defect(out.entries);
    return out;
}

}  // namespace crackmusic
