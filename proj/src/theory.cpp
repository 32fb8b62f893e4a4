#include "crackmusic/theory.hpp"

#include <algorithm>
#include <limits>

#include "crackmusic/parallel.hpp"
#include "crackmusic/special_fn.hpp"

namespace crackmusic {

std::string to_string(TheoryVariant v) { return v == TheoryVariant::squared ? "squared" : "linear"; }

TheoryVariant theory_variant_from_string(const std::string& text) {
    if (text == "squared") return TheoryVariant::squared;
    if (text == "linear") return TheoryVariant::linear;
    throw ArgumentError("unknown theory variant '" + text + "' (squared|linear)");
}

void TheoryParams::validate() const {
    if (!(wavenumber > 0.0) || !(eta > 0.0)) throw ArgumentError("theory: k and eta must be positive");
    if (centers.empty()) throw ArgumentError("theory: no crack centers");
}

std::vector<Point2> TheoryParams::predicted_peaks() const {
    std::vector<Point2> out;
    out.reserve(centers.size());
    for (const Point2 z : centers) out.push_back((wavenumber / eta) * z);
    return out;
}

double TheoryParams::phase_distance(Point2 x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Point2 z : centers) best = std::min(best, norm(eta * x - wavenumber * z));
    return best;
}

double theory_value(const TheoryParams& p, Point2 x) {
    p.validate();
    double sum = 0.0;
    for (const Point2 z : p.centers) {
        const double j0 = bessel_j0(norm(p.eta * x - p.wavenumber * z));
        sum += p.variant == TheoryVariant::squared ? j0 * j0 : j0;
    }
    return 1.0 / std::sqrt(std::max(1.0 - sum, kProjectionFloor));
}

ImageMap theory_map(const TheoryParams& p, const ImageGrid& grid) {
    p.validate();
    grid.validate();
    ImageMap map;
    map.grid = grid;
    map.eta = p.eta;
    map.provenance = "theory:" + to_string(p.variant);
    const std::size_t nx = grid.nx();
    map.values.assign(nx * grid.ny(), 0.0);
    detail::parallel_for(grid.ny(), [&](std::size_t iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) map.values[iy * nx + ix] = theory_value(p, grid.point(ix, iy));
    });
    return map;
}

CompareReport compare_maps(const ImageMap& a, const ImageMap& b, const TheoryParams& p, double exclusion_radius) {
    if (!(a.grid == b.grid) || a.values.size() != b.values.size()) {
        throw ArgumentError("compare_maps: maps are on different grids");
    }
    p.validate();
    CompareReport report;
    double sum = 0.0;
    const std::size_t nx = a.grid.nx();
    for (std::size_t iy = 0; iy < a.grid.ny(); ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            if (p.phase_distance(a.grid.point(ix, iy)) < exclusion_radius) {
                ++report.excluded_count;
                continue;
            }
            const double ref = b.at(ix, iy);
            const double dev = std::abs(a.at(ix, iy) - ref) / std::abs(ref);
            report.max_dev = std::max(report.max_dev, dev);
            sum += dev;
            ++report.compared_count;
        }
    }
    report.mean_dev = report.compared_count > 0 ? sum / static_cast<double>(report.compared_count) : 0.0;
    return report;
}

}  // namespace crackmusic
