#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "crackmusic/msr.hpp"
#include "crackmusic/music.hpp"

namespace crackmusic {

/// Angular sector between two rays from the origin. Every (k/eta)-scaled copy
/// of a point inside stays inside, which is why it can be built from a map
/// computed at any eta.
class SafeCone {
public:
    SafeCone(Point2 start_ray, double span);

    [[nodiscard]] Point2 start_ray() const { return start_; }
    [[nodiscard]] Point2 end_ray() const { return rotate(start_, span_); }
    /// Opening angle in (0, 2 pi), measured counter-clockwise from start_ray.
    [[nodiscard]] double span() const { return span_; }
    /// Points at the origin are inside; boundary within `tol` radians counts as inside.
    [[nodiscard]] bool contains(Point2 p, double tol = 1e-9) const;

private:
    Point2 start_;
    double span_ = 0.0;
};

/// Sector bounded by the rays through the two end-point images that contains
/// the sample images (the one containing more of them if neither holds all).
/// Throws ArgumentError if an end point is at the origin or both lie on the
/// same ray.
SafeCone safe_cone(std::pair<Point2, Point2> endpoint_images, const std::vector<Point2>& sample_images);

/// End points and support of the bright set {E >= fraction * max E}: the two
/// bright grid points farthest apart, and every bright point.
struct BrightSet {
    std::pair<Point2, Point2> endpoints;
    std::vector<Point2> points;
};
BrightSet bright_set(const ImageMap& map, double fraction);

/// k_hat = eta (peak . y) / (y . y): least-squares fit of peak ~ (k/eta) y.
/// Throws ArgumentError for y = 0 or eta <= 0, NumericError if peak . y <= 0.
double estimate_k(Point2 peak, Point2 y, double eta);

enum class ScattererKind { small_crack, segment };

std::string to_string(ScattererKind kind);
ScattererKind scatterer_kind_from_string(const std::string& text);

struct CalibrationPlan {
    Point2 location;                          // y, known a priori
    ScattererKind kind = ScattererKind::segment;
    double half_length = 1.0;
    double angle = 0.0;
    double eta = 20.0;                        // probe wavenumber of the first map
    std::optional<SafeCone> unsafe_region;    // crack-image sector, if known

    /// Throws ArgumentError for |y| = 0, eta <= 0 or half_length <= 0.
    void validate() const;
    [[nodiscard]] SegmentCrack scatterer() const;
};

struct CalibrationOptions {
    std::size_t peak_count = 40;
    double ray_tolerance = 0.1;     // max distance of a calibration peak from the ray through y
    double dominance = 0.5;         // peaks below dominance * (largest peak) are ignored
    double separation_cells = 5.0;  // distinct candidates farther apart along the ray => ambiguous
};

struct CalibrationResult {
    double k_hat = 0.0;
    Point2 peak;
    double eta_used = 0.0;
    double residual = 0.0;          // |peak - (k_hat/eta) y|
    bool ambiguous = false;
    int signal_dim = 0;
    ImageMap probe_map;             // E(.; plan.eta)
    ImageMap reimaged;              // E(.; k_hat)
};

/// Images the data at plan.eta, picks the dominant peak closest to the ray
/// through y, estimates k and re-images at eta = k_hat. Throws NumericError
/// when no dominant peak lies near the ray.
CalibrationResult calibrate_and_image(const MsrMatrix& data, const CalibrationPlan& plan, const ImageGrid& grid,
                                      const SignalDimMethod& method, const CalibrationOptions& options = {});

}  // namespace crackmusic
