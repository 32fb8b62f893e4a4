#include "crackmusic/calibrate.hpp"

#include <algorithm>
#include <limits>

namespace crackmusic {

namespace {

double angle_of(Point2 p) { return std::atan2(p.y, p.x); }

// counter-clockwise angle from a to b in [0, 2 pi)
double ccw_angle(Point2 a, Point2 b) {
    double d = angle_of(b) - angle_of(a);
    while (d < 0.0) d += kTwoPi;
    while (d >= kTwoPi) d -= kTwoPi;
    return d;
}

Point2 unit(Point2 p) { return (1.0 / norm(p)) * p; }

}  // namespace

SafeCone::SafeCone(Point2 start_ray, double span) : start_(unit(start_ray)), span_(span) {
    if (!(span > 0.0) || !(span < kTwoPi)) throw ArgumentError("SafeCone: span must lie in (0, 2 pi)");
}

bool SafeCone::contains(Point2 p, double tol) const {
    if (norm(p) == 0.0) return true;
    const double a = ccw_angle(start_, p);
    return a <= span_ + tol || a >= kTwoPi - tol;
}

SafeCone safe_cone(std::pair<Point2, Point2> endpoint_images, const std::vector<Point2>& sample_images) {
    const auto [e1, e2] = endpoint_images;
    constexpr double kTiny = 1e-12;
    if (norm(e1) < kTiny || norm(e2) < kTiny) throw ArgumentError("safe_cone: end point image at the origin");
    const double span = ccw_angle(e1, e2);
    if (span < 1e-9 || span > kTwoPi - 1e-9) throw ArgumentError("safe_cone: end points lie on the same ray");

    const SafeCone forward(e1, span);
    const SafeCone backward(e2, kTwoPi - span);
    const auto inside = [&](const SafeCone& cone) {
        return std::count_if(sample_images.begin(), sample_images.end(),
                             [&](Point2 p) { return cone.contains(p, 1e-6); });
    };
    return inside(forward) >= inside(backward) ? forward : backward;
}

BrightSet bright_set(const ImageMap& map, double fraction) {
    if (map.values.empty()) throw ArgumentError("bright_set: empty map");
    const double peak = *std::max_element(map.values.begin(), map.values.end());
    BrightSet out;
    for (std::size_t iy = 0; iy < map.grid.ny(); ++iy) {
        for (std::size_t ix = 0; ix < map.grid.nx(); ++ix) {
            if (map.at(ix, iy) >= fraction * peak) out.points.push_back(map.grid.point(ix, iy));
        }
    }
    double best = -1.0;
    for (std::size_t a = 0; a < out.points.size(); ++a) {
        for (std::size_t b = a + 1; b < out.points.size(); ++b) {
            const double d = distance(out.points[a], out.points[b]);
            if (d > best) {
                best = d;
                out.endpoints = {out.points[a], out.points[b]};
            }
        }
    }
    if (out.points.size() == 1) out.endpoints = {out.points[0], out.points[0]};
    return out;
}

double estimate_k(Point2 peak, Point2 y, double eta) {
    const double yy = dot(y, y);
    if (!(yy > 0.0)) throw ArgumentError("estimate_k: calibration location must not be the origin");
    if (!(eta > 0.0)) throw ArgumentError("estimate_k: eta must be positive");
    const double py = dot(peak, y);
    if (!(py > 0.0)) throw NumericError("estimate_k: peak is not on the ray through the calibration location");
    return eta * py / yy;
}

std::string to_string(ScattererKind kind) { return kind == ScattererKind::segment ? "segment" : "small_crack"; }

ScattererKind scatterer_kind_from_string(const std::string& text) {
    if (text == "segment") return ScattererKind::segment;
    if (text == "small_crack") return ScattererKind::small_crack;
    throw ArgumentError("unknown scatterer kind '" + text + "' (segment|small_crack)");
}

void CalibrationPlan::validate() const {
    if (!(norm(location) > 0.0)) throw ArgumentError("calibration location must not be the origin");
    if (!(eta > 0.0)) throw ArgumentError("calibration eta must be positive");
    if (!(half_length > 0.0)) throw ArgumentError("calibration scatterer half_length must be positive");
}

SegmentCrack CalibrationPlan::scatterer() const { return SegmentCrack(location, half_length, angle); }

CalibrationResult calibrate_and_image(const MsrMatrix& data, const CalibrationPlan& plan, const ImageGrid& grid,
                                      const SignalDimMethod& method, const CalibrationOptions& options) {
    plan.validate();
    const SignalSpace space = select_signal_dim(svd_msr(data), method);

    CalibrationResult out;
    out.signal_dim = space.dim;
    out.eta_used = plan.eta;
    out.probe_map = imaging_map(space, grid, plan.eta, data.directions);
    out.probe_map.provenance = to_string(data.provenance);

    const PeakSearch search = find_peaks(out.probe_map, options.peak_count);
    if (search.peaks.empty()) throw NumericError("calibration failed: probe map has no peaks");
    const double top = search.peaks.front().value;

    const Point2 dir = unit(plan.location);
    struct Candidate {
        Point2 location;
        double along;
        double off;
    };
    std::vector<Candidate> candidates;
    for (const auto& p : search.peaks) {
        if (p.value < options.dominance * top) continue;
        const double along = dot(p.location, dir);
        if (!(along > 0.0)) continue;
        const double off = norm(p.location - along * dir);
        if (off <= options.ray_tolerance) candidates.push_back({p.location, along, off});
    }
    if (candidates.empty()) {
        throw NumericError("calibration failed: no dominant peak near the ray through the calibration location");
    }
    const auto chosen = std::min_element(candidates.begin(), candidates.end(),
                                         [](const Candidate& a, const Candidate& b) { return a.off < b.off; });
    for (const auto& c : candidates) {
        if (std::abs(c.along - chosen->along) > options.separation_cells * grid.step) out.ambiguous = true;
    }
    if (plan.unsafe_region && plan.unsafe_region->contains(plan.location)) out.ambiguous = true;

    out.peak = chosen->location;
    out.k_hat = estimate_k(out.peak, plan.location, plan.eta);
    out.residual = norm(out.peak - (out.k_hat / plan.eta) * plan.location);
    out.reimaged = imaging_map(space, grid, out.k_hat, data.directions);
    out.reimaged.provenance = out.probe_map.provenance;
    return out;
}

}  // namespace crackmusic
