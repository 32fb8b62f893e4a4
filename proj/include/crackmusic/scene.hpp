#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "crackmusic/types.hpp"

namespace crackmusic {

/// Closed: theta_1 = 0 and theta_N = 2*pi, so the first direction is repeated.
/// Open: N distinct equispaced angles 2*pi*(n-1)/N.
enum class DirectionMode { closed, open };

std::string to_string(DirectionMode mode);
DirectionMode direction_mode_from_string(const std::string& text);

class DirectionSet {
public:
    DirectionSet() = default;

    [[nodiscard]] std::size_t size() const { return angles_.size(); }
    [[nodiscard]] DirectionMode mode() const { return mode_; }
    [[nodiscard]] const std::vector<double>& angles() const { return angles_; }
    [[nodiscard]] double angle(std::size_t n) const { return angles_.at(n); }
    [[nodiscard]] Point2 direction(std::size_t n) const;

    /// Quadrature weights for averaging a function over S^1 sampled on this set.
    /// They sum to one. Open sets use 1/N; closed sets use the trapezoid rule
    /// on [0, 2*pi] (half weight on the two coincident end directions).
    [[nodiscard]] std::vector<double> quadrature_weights() const;

    friend bool operator==(const DirectionSet&, const DirectionSet&) = default;

private:
    friend DirectionSet make_directions(std::size_t count, DirectionMode mode);
    std::vector<double> angles_;
    DirectionMode mode_ = DirectionMode::closed;
};

/// Equispaced incidence/observation directions. Throws ArgumentError for count < 2.
DirectionSet make_directions(std::size_t count, DirectionMode mode = DirectionMode::closed);

/// Straight crack {center + s * half_length * (cos angle, sin angle) : -1 <= s <= 1}.
struct SegmentCrack {
    Point2 center;
    double half_length = 0.0;
    double angle = 0.0;

    SegmentCrack() = default;
    SegmentCrack(Point2 center_, double half_length_, double angle_ = 0.0);

    [[nodiscard]] Point2 point(double s) const;
    [[nodiscard]] Point2 derivative(double s) const;
    [[nodiscard]] double length() const { return 2.0 * half_length; }

    /// True when the crack is small against the wavelength 2*pi/k, i.e.
    /// 2 * half_length <= fraction * wavelength.
    [[nodiscard]] bool is_small(double wavenumber, double fraction = 0.25) const;

    friend bool operator==(const SegmentCrack&, const SegmentCrack&) = default;
};

/// Smooth open arc z(s), s in [-1, 1], stored as a Chebyshev interpolant.
///
/// The defining samples sit at the Chebyshev-Lobatto parameters
/// s_j = -cos(j*pi/(P-1)), j = 0..P-1, ordered from s = -1 to s = 1. This is
/// also the layout of the point list in scene files.
class ParametricCrack {
public:
    ParametricCrack() = default;

    /// Builds from samples at the Chebyshev-Lobatto parameters (see above).
    static ParametricCrack from_points(std::vector<Point2> lobatto_points);
    static ParametricCrack from_function(const std::function<Point2(double)>& curve,
                                         std::size_t sample_count = 65);

    [[nodiscard]] Point2 point(double s) const;
    [[nodiscard]] Point2 derivative(double s) const;
    [[nodiscard]] const std::vector<Point2>& lobatto_points() const { return points_; }
    [[nodiscard]] std::vector<Point2> samples(std::size_t count) const;
    [[nodiscard]] double arclength() const { return arclength_; }
    [[nodiscard]] Point2 start() const { return points_.front(); }
    [[nodiscard]] Point2 end() const { return points_.back(); }

    friend bool operator==(const ParametricCrack& a, const ParametricCrack& b) {
        return a.points_ == b.points_;
    }

private:
    std::vector<Point2> points_;
    std::vector<double> coef_x_, coef_y_;
    std::vector<double> dcoef_x_, dcoef_y_;
    double arclength_ = 0.0;
};

using Crack = std::variant<SegmentCrack, ParametricCrack>;

Point2 crack_point(const Crack& crack, double s);
Point2 crack_derivative(const Crack& crack, double s);
/// z(0): the segment center, or the parameter midpoint of an arc.
Point2 crack_center(const Crack& crack);
double crack_length(const Crack& crack);

struct Scene {
    std::vector<Crack> cracks;
    double wavenumber = 0.0;

    [[nodiscard]] std::vector<Point2> centers() const;
    [[nodiscard]] bool segments_only() const;
    /// Throws ArgumentError if empty, k <= 0 or a crack is degenerate.
    void validate() const;

    friend bool operator==(const Scene&, const Scene&) = default;
};

struct SeparationReport {
    bool ok = true;
    double min_scaled_distance = 0.0;  // min over pairs of k*|z_m - z_m'|; +inf for one crack
    std::vector<std::pair<std::size_t, std::size_t>> failing_pairs;
};

/// Checks k*|z_m - z_m'| >= factor for every pair of crack centers.
SeparationReport separation_ok(const Scene& scene, double factor = 5.0);

/// exp(i k theta . x). Throws ArgumentError if |theta| differs from 1 by more than 1e-12.
Complex incident_field(Point2 x, Point2 theta, double wavenumber);

/// Reference geometries used by the shipped presets.
namespace scenarios {

/// The three small cracks: [s-0.6,-0.2], R(pi/4)[s+0.4,s+0.35],
/// R(7pi/6)[s+0.25,s-0.6] with -h <= s <= h.
std::vector<Crack> three_small_cracks(double h = 0.05);

/// The arc [s, 0.5cos(0.5 pi s) + 0.2 sin(0.5 pi s) - 0.1 cos(1.5 pi s)], -1 <= s <= 1.
ParametricCrack extended_arc(std::size_t sample_count = 65);

}  // namespace scenarios

}  // namespace crackmusic
