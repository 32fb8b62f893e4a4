#include "crackmusic/scene.hpp"

#include <algorithm>
#include <limits>

namespace crackmusic {

namespace {

double clenshaw(const std::vector<double>& coef, double s) {
    if (coef.empty()) return 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = coef.size() - 1; k >= 1; --k) {
        const double b0 = coef[k] + 2.0 * s * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return coef[0] + s * b1 - b2;
}

std::vector<double> chebyshev_coefficients(const std::vector<double>& values) {
    // values[j] sampled at s_j = -cos(j pi / n), n = P - 1
    const std::size_t count = values.size();
    const std::size_t n = count - 1;
    std::vector<double> coef(count, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
        double sum = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            const double weight = (j == 0 || j == n) ? 0.5 : 1.0;
            const double tk = std::cos(static_cast<double>(k * j) * kPi / static_cast<double>(n));
            sum += weight * values[j] * tk;
        }
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        coef[k] = sign * 2.0 * sum / static_cast<double>(n);
    }
    coef[0] *= 0.5;
    coef[n] *= 0.5;
    return coef;
}

std::vector<double> derivative_coefficients(const std::vector<double>& coef) {
    const std::size_t n = coef.size() - 1;
    if (n == 0) return {0.0};
    std::vector<double> d(n + 1, 0.0);
    for (std::size_t k = n; k >= 1; --k) {
        d[k - 1] = (k + 1 <= n ? d[k + 1] : 0.0) + 2.0 * static_cast<double>(k) * coef[k];
    }
    d[0] *= 0.5;
    d.pop_back();
    return d;
}

}  // namespace

std::string to_string(DirectionMode mode) {
    return mode == DirectionMode::closed ? "closed" : "open";
}

DirectionMode direction_mode_from_string(const std::string& text) {
    if (text == "closed") return DirectionMode::closed;
    if (text == "open") return DirectionMode::open;
    throw ArgumentError("unknown direction mode '" + text + "' (expected closed|open)");
}

Point2 DirectionSet::direction(std::size_t n) const {
    const double a = angles_.at(n);
    return {std::cos(a), std::sin(a)};
}

std::vector<double> DirectionSet::quadrature_weights() const {
    const std::size_t n = angles_.size();
    if (mode_ == DirectionMode::open) {
        return std::vector<double>(n, 1.0 / static_cast<double>(n));
    }
    std::vector<double> w(n, 1.0 / static_cast<double>(n - 1));
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

DirectionSet make_directions(std::size_t count, DirectionMode mode) {
    if (count < 2) throw ArgumentError("direction set needs at least 2 directions");
    DirectionSet set;
    set.mode_ = mode;
    set.angles_.resize(count);
    const double denom = mode == DirectionMode::closed ? static_cast<double>(count - 1)
                                                       : static_cast<double>(count);
    for (std::size_t n = 0; n < count; ++n) {
        set.angles_[n] = kTwoPi * static_cast<double>(n) / denom;
    }
    if (mode == DirectionMode::closed) set.angles_.back() = kTwoPi;
    return set;
}

SegmentCrack::SegmentCrack(Point2 center_, double half_length_, double angle_)
    : center(center_), half_length(half_length_), angle(angle_) {}

Point2 SegmentCrack::point(double s) const {
    return center + (s * half_length) * Point2{std::cos(angle), std::sin(angle)};
}

Point2 SegmentCrack::derivative(double /*s*/) const {
    return half_length * Point2{std::cos(angle), std::sin(angle)};
}

bool SegmentCrack::is_small(double wavenumber, double fraction) const {
    return length() <= fraction * kTwoPi / wavenumber;
}

ParametricCrack ParametricCrack::from_points(std::vector<Point2> lobatto_points) {
    if (lobatto_points.size() < 2) {
        throw ArgumentError("parametric crack needs at least 2 points");
    }
    for (const auto& p : lobatto_points) {
        if (!is_finite(p)) throw ArgumentError("parametric crack has a non-finite point");
    }
    if (lobatto_points.front() == lobatto_points.back()) {
        throw ArgumentError("parametric crack endpoints coincide");
    }
    ParametricCrack arc;
    arc.points_ = std::move(lobatto_points);
    std::vector<double> xs, ys;
    xs.reserve(arc.points_.size());
    ys.reserve(arc.points_.size());
    for (const auto& p : arc.points_) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    arc.coef_x_ = chebyshev_coefficients(xs);
    arc.coef_y_ = chebyshev_coefficients(ys);
    arc.dcoef_x_ = derivative_coefficients(arc.coef_x_);
    arc.dcoef_y_ = derivative_coefficients(arc.coef_y_);

    // s = cos(t) turns the arclength integral into a smooth periodic one.
    constexpr int kNodes = 512;
    double total = 0.0;
    for (int j = 1; j < kNodes; ++j) {
        const double t = kPi * j / kNodes;
        total += norm(arc.derivative(std::cos(t))) * std::sin(t);
    }
    arc.arclength_ = total * kPi / kNodes;
    return arc;
}

ParametricCrack ParametricCrack::from_function(const std::function<Point2(double)>& curve,
                                               std::size_t sample_count) {
    if (sample_count < 2) throw ArgumentError("parametric crack needs at least 2 samples");
    std::vector<Point2> pts(sample_count);
    const double n = static_cast<double>(sample_count - 1);
    for (std::size_t j = 0; j < sample_count; ++j) {
        pts[j] = curve(-std::cos(static_cast<double>(j) * kPi / n));
    }
    pts.front() = curve(-1.0);
    pts.back() = curve(1.0);
    return from_points(std::move(pts));
}

Point2 ParametricCrack::point(double s) const {
    return {clenshaw(coef_x_, s), clenshaw(coef_y_, s)};
}

Point2 ParametricCrack::derivative(double s) const {
    return {clenshaw(dcoef_x_, s), clenshaw(dcoef_y_, s)};
}

std::vector<Point2> ParametricCrack::samples(std::size_t count) const {
    if (count < 2) throw ArgumentError("need at least 2 samples");
    std::vector<Point2> out(count);
    for (std::size_t j = 0; j < count; ++j) {
        out[j] = point(-1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(count - 1));
    }
    return out;
}

Point2 crack_point(const Crack& crack, double s) {
    return std::visit([s](const auto& c) { return c.point(s); }, crack);
}

Point2 crack_derivative(const Crack& crack, double s) {
    return std::visit([s](const auto& c) { return c.derivative(s); }, crack);
}

Point2 crack_center(const Crack& crack) { return crack_point(crack, 0.0); }

double crack_length(const Crack& crack) {
    if (const auto* seg = std::get_if<SegmentCrack>(&crack)) return seg->length();
    return std::get<ParametricCrack>(crack).arclength();
}

std::vector<Point2> Scene::centers() const {
    std::vector<Point2> out;
    out.reserve(cracks.size());
    for (const auto& c : cracks) out.push_back(crack_center(c));
    return out;
}

bool Scene::segments_only() const {
    return std::all_of(cracks.begin(), cracks.end(), [](const Crack& c) {
        return std::holds_alternative<SegmentCrack>(c);
    });
}

void Scene::validate() const {
    if (cracks.empty()) throw ArgumentError("scene has no cracks");
    if (!(wavenumber > 0.0) || !std::isfinite(wavenumber)) {
        throw ArgumentError("wavenumber must be positive and finite");
    }
    for (const auto& c : cracks) {
        if (const auto* seg = std::get_if<SegmentCrack>(&c)) {
            if (!(seg->half_length > 0.0) || !std::isfinite(seg->half_length)) {
                throw ArgumentError("segment crack half_length must be positive");
            }
            if (!is_finite(seg->center) || !std::isfinite(seg->angle)) {
                throw ArgumentError("segment crack has non-finite geometry");
            }
        } else if (std::get<ParametricCrack>(c).lobatto_points().size() < 2) {
            throw ArgumentError("parametric crack is empty");
        }
    }
}

SeparationReport separation_ok(const Scene& scene, double factor) {
    SeparationReport report;
    report.min_scaled_distance = std::numeric_limits<double>::infinity();
    const auto centers = scene.centers();
    for (std::size_t a = 0; a < centers.size(); ++a) {
        for (std::size_t b = a + 1; b < centers.size(); ++b) {
            const double scaled = scene.wavenumber * distance(centers[a], centers[b]);
            report.min_scaled_distance = std::min(report.min_scaled_distance, scaled);
            if (scaled < factor) report.failing_pairs.emplace_back(a, b);
        }
    }
    report.ok = report.failing_pairs.empty();
    return report;
}

Complex incident_field(Point2 x, Point2 theta, double wavenumber) {
    if (std::abs(norm(theta) - 1.0) > 1e-12) {
        throw ArgumentError("incident direction must be a unit vector");
    }
    return std::polar(1.0, wavenumber * dot(theta, x));
}

namespace scenarios {

std::vector<Crack> three_small_cracks(double h) {
    const double diag = std::sqrt(2.0) * h;
    std::vector<Crack> out;
    out.emplace_back(SegmentCrack({-0.6, -0.2}, h, 0.0));
    out.emplace_back(SegmentCrack(rotate({0.4, 0.35}, kPi / 4.0), diag, kPi / 4.0 + kPi / 4.0));
    out.emplace_back(SegmentCrack(rotate({0.25, -0.6}, 7.0 * kPi / 6.0), diag,
                                  7.0 * kPi / 6.0 + kPi / 4.0));
    return out;
}

ParametricCrack extended_arc(std::size_t sample_count) {
    return ParametricCrack::from_function(
        [](double s) {
            return Point2{s, 0.5 * std::cos(0.5 * s * kPi) + 0.2 * std::sin(0.5 * s * kPi) -
                                 0.1 * std::cos(1.5 * s * kPi)};
        },
        sample_count);
}

}  // namespace scenarios

}  // namespace crackmusic
