#include "crackmusic/forward_asym.hpp"

namespace crackmusic {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::asymptotic: return "asymptotic";
        case Provenance::bie: return "bie";
        case Provenance::file: return "file";
    }
    return "file";
}

Provenance provenance_from_string(const std::string& text) {
    if (text == "asymptotic") return Provenance::asymptotic;
    if (text == "bie") return Provenance::bie;
    if (text == "file") return Provenance::file;
    throw ArgumentError("unknown provenance '" + text + "'");
}

double symmetry_defect(const CMatrix& k) {
    const double scale = k.norm();
    if (scale == 0.0) return 0.0;
    return (k - k.transpose()).norm() / scale;
}

namespace {

void check_scale(double h) {
    if (!(h > 0.0) || !(h < 2.0)) {
        throw ArgumentError("asymptotic model needs 0 < h < 2");
    }
}

}  // namespace

Complex farfield_asym(Point2 obs, Point2 inc, const Scene& scene, double h) {
    check_scale(h);
    if (scene.cracks.empty()) throw ArgumentError("farfield_asym: empty scene");
    const double c = -kTwoPi / std::log(0.5 * h);
    Complex sum{0.0, 0.0};
    for (const Point2 z : scene.centers()) {
        sum += std::polar(1.0, scene.wavenumber * dot(inc - obs, z));
    }
    return c * sum;
}

CMatrix steering_factor(const Scene& scene, const DirectionSet& dirs) {
    const auto centers = scene.centers();
    CMatrix a(static_cast<Eigen::Index>(dirs.size()), static_cast<Eigen::Index>(centers.size()));
    for (std::size_t n = 0; n < dirs.size(); ++n) {
        const Point2 theta = dirs.direction(n);
        for (std::size_t m = 0; m < centers.size(); ++m) {
            a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) =
                std::polar(1.0, scene.wavenumber * dot(theta, centers[m]));
        }
    }
    return a;
}

MsrMatrix assemble_msr(const Scene& scene, double h, const DirectionSet& dirs) {
    check_scale(h);
    scene.validate();
    if (!scene.segments_only()) {
        throw ArgumentError("asymptotic model applies to small segment cracks only");
    }
    const auto n = static_cast<Eigen::Index>(dirs.size());
    MsrMatrix out;
    out.entries.resize(n, n);
    out.directions = dirs;
    out.wavenumber = scene.wavenumber;
    out.backscatter_convention = true;
    out.provenance = Provenance::asymptotic;
    out.crack_scale = h;
    for (Eigen::Index j = 0; j < n; ++j) {
        const Point2 obs = -1.0 * dirs.direction(static_cast<std::size_t>(j));
        for (Eigen::Index l = 0; l < n; ++l) {
            out.entries(j, l) = farfield_asym(obs, dirs.direction(static_cast<std::size_t>(l)), scene, h);
        }
    }
    return out;
}

}  // namespace crackmusic
