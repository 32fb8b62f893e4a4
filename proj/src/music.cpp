#include "crackmusic/music.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "crackmusic/parallel.hpp"

namespace crackmusic {

SignalSpace svd_msr(const MsrMatrix& k) {
    if (k.entries.rows() != k.entries.cols() || k.entries.rows() == 0) {
        throw ArgumentError("svd_msr: MSR matrix must be square and nonempty");
    }
    if (!k.entries.allFinite()) throw NumericError("svd_msr: matrix has non-finite entries");
    Eigen::JacobiSVD<CMatrix> svd(k.entries, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) {
        throw NumericError("svd_msr: SVD did not converge for " + std::to_string(k.entries.rows()) +
                           "x" + std::to_string(k.entries.cols()) + " matrix");
    }
    SignalSpace out;
    out.singular_values = svd.singularValues();
    out.left_vectors = svd.matrixU();
    out.right_vectors = svd.matrixV();
    return out;
}

SignalDimMethod SignalDimMethod::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto parse_number = [&](auto& value) {
        const auto* first = tail.data();
        const auto* last = tail.data() + tail.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) throw ArgumentError("bad signal-dim argument '" + text + "'");
    };
    if (head == "manual") {
        if (tail.empty()) throw ArgumentError("manual signal-dim needs a value, e.g. manual:3");
        int m = 0;
        parse_number(m);
        if (m < 0) throw ArgumentError("manual signal dimension must be >= 0");
        return manual(m);
    }
    if (head == "log_gap") {
        int bound = 0;
        if (!tail.empty()) parse_number(bound);
        if (bound < 0) throw ArgumentError("log_gap bound must be >= 0");
        return log_gap(bound);
    }
    if (head == "threshold") {
        if (tail.empty()) throw ArgumentError("threshold signal-dim needs a value, e.g. threshold:0.01");
        double tau = 0.0;
        parse_number(tau);
        if (!(tau > 0.0) || !(tau <= 1.0)) throw ArgumentError("threshold must lie in (0, 1]");
        return threshold_at(tau);
    }
    throw ArgumentError("unknown signal-dim method '" + text + "' (manual:M|log_gap|threshold:T)");
}

std::string SignalDimMethod::to_string() const {
    switch (kind) {
        case Kind::manual: return "manual:" + std::to_string(manual_dim);
        case Kind::threshold: {
            std::ostringstream os;
            os.precision(17);
            os << "threshold:" << threshold;
            return os.str();
        }
        case Kind::log_gap:
            return prefix_bound > 0 ? "log_gap:" + std::to_string(prefix_bound) : "log_gap";
    }
    return "log_gap";
}

SignalSpace select_signal_dim(const SignalSpace& space, const SignalDimMethod& method) {
    SignalSpace out = space;
    out.ambiguous = false;
    const auto& sv = space.singular_values;
    const int n = static_cast<int>(sv.size());
    switch (method.kind) {
        case SignalDimMethod::Kind::manual:
            if (method.manual_dim < 0 || method.manual_dim > n) {
                throw ArgumentError("manual signal dimension " + std::to_string(method.manual_dim) +
                                    " exceeds N = " + std::to_string(n));
            }
            out.dim = method.manual_dim;
            return out;
        case SignalDimMethod::Kind::threshold: {
            int count = 0;
            if (n > 0 && sv(0) > 0.0) {
                for (int m = 0; m < n; ++m) count += (sv(m) / sv(0) >= method.threshold) ? 1 : 0;
            }
            out.dim = count;
            return out;
        }
        case SignalDimMethod::Kind::log_gap:
            break;
    }

    if (n == 0 || !(sv(0) > 0.0)) {
        out.dim = 0;
        out.ambiguous = true;
        return out;
    }
    int bound = method.prefix_bound > 0 ? method.prefix_bound : (n + 1) / 2;
    bound = std::clamp(bound, 1, std::max(1, n - 1));

    const double floor = 1e-12 * sv(0);
    int rank = 0;
    while (rank < n && sv(rank) > floor) ++rank;
    if (rank < n && rank <= bound) {
        out.dim = rank;
        return out;
    }

    int best = bound;
    double best_gap = 0.0;
    for (int m = 1; m <= bound && m < n; ++m) {
        const double gap = std::log(sv(m - 1) / sv(m));
        if (gap > best_gap) {
            best_gap = gap;
            best = m;
        }
    }
    if (best_gap < 1e-9) {
        out.dim = bound;
        out.ambiguous = true;
        return out;
    }
    out.dim = best;
    return out;
}

CVector noise_projector_apply(const SignalSpace& space, const CVector& v) {
    if (!space.has_dim()) throw ArgumentError("noise projector: signal dimension not selected");
    if (v.size() != space.left_vectors.rows()) throw ArgumentError("noise projector: dimension mismatch");
    if (space.dim == 0) return v;
    const auto u = space.left_vectors.leftCols(space.dim);
    return v - u * (u.adjoint() * v);
}

CMatrix noise_projector(const SignalSpace& space) {
    if (!space.has_dim()) throw ArgumentError("noise projector: signal dimension not selected");
    const auto n = space.left_vectors.rows();
    const auto u = space.left_vectors.leftCols(space.dim);
    return CMatrix::Identity(n, n) - u * u.adjoint();
}

TestVector test_vector(Point2 x, double eta, const DirectionSet& dirs) {
    if (!(eta > 0.0)) throw ArgumentError("test_vector: eta must be positive");
    const double scale = 1.0 / std::sqrt(static_cast<double>(dirs.size()));
    TestVector out;
    out.eta = eta;
    out.point = x;
    out.entries.resize(static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t n = 0; n < dirs.size(); ++n) {
        out.entries(static_cast<Eigen::Index>(n)) = std::polar(scale, eta * dot(dirs.direction(n), x));
    }
    return out;
}

double imaging_value(const SignalSpace& space, Point2 x, double eta, const DirectionSet& dirs) {
    const CVector residual = noise_projector_apply(space, test_vector(x, eta, dirs).entries);
    return 1.0 / std::max(residual.norm(), kProjectionFloor);
}

std::size_t ImageGrid::nx() const {
    return static_cast<std::size_t>(std::floor((x1 - x0) / step + 1e-9)) + 1;
}

std::size_t ImageGrid::ny() const {
    return static_cast<std::size_t>(std::floor((y1 - y0) / step + 1e-9)) + 1;
}

void ImageGrid::validate() const {
    if (!std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(y0) || !std::isfinite(y1) ||
        !std::isfinite(step)) {
        throw ArgumentError("image grid has non-finite bounds");
    }
    if (!(step > 0.0)) throw ArgumentError("image grid step must be positive");
    if (x1 < x0 || y1 < y0) throw ArgumentError("image grid range is empty");
}

ImageGrid ImageGrid::parse(const std::string& text) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
        if (ec != std::errc{} || ptr != piece.data() + piece.size() || piece.empty()) {
            throw ArgumentError("bad grid '" + text + "' (expected x0,x1,y0,y1,step)");
        }
        parts.push_back(value);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (parts.size() != 5) throw ArgumentError("bad grid '" + text + "' (expected x0,x1,y0,y1,step)");
    ImageGrid grid{parts[0], parts[1], parts[2], parts[3], parts[4]};
    grid.validate();
    return grid;
}

ImageMap imaging_map(const SignalSpace& space, const ImageGrid& grid, double eta, const DirectionSet& dirs) {
    grid.validate();
    if (!space.has_dim()) throw ArgumentError("imaging_map: signal dimension not selected");
    if (static_cast<std::size_t>(space.left_vectors.rows()) != dirs.size()) {
        throw ArgumentError("imaging_map: direction set does not match the MSR size");
    }
    if (!(eta > 0.0)) throw ArgumentError("imaging_map: eta must be positive");
    ImageMap map;
    map.grid = grid;
    map.eta = eta;
    map.signal_dim = space.dim;
    const std::size_t nx = grid.nx();
    const std::size_t ny = grid.ny();
    map.values.assign(nx * ny, 0.0);

    const auto n = static_cast<Eigen::Index>(dirs.size());
    const CMatrix u = space.left_vectors.leftCols(space.dim);
    const CMatrix u_adj = u.adjoint();
    std::vector<Point2> theta(dirs.size());
    for (std::size_t q = 0; q < dirs.size(); ++q) theta[q] = dirs.direction(q);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    detail::parallel_for(ny, [&](std::size_t iy) {
        CVector f(n);
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const Point2 x = grid.point(ix, iy);
            for (Eigen::Index q = 0; q < n; ++q) f(q) = std::polar(scale, eta * dot(theta[q], x));
            double residual;
            if (space.dim == 0) {
                residual = f.norm();
            } else {
                residual = (f - u * (u_adj * f)).norm();
            }
            map.values[iy * nx + ix] = 1.0 / std::max(residual, kProjectionFloor);
        }
    });
    return map;
}

namespace {

double quadratic_offset(double left, double center, double right) {
    const double curvature = left - 2.0 * center + right;
    if (!(curvature < 0.0)) return 0.0;
    return std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
}

}  // namespace

PeakSearch find_peaks(const ImageMap& map, std::size_t count) {
    if (count == 0) throw ArgumentError("find_peaks: count must be >= 1");
    const std::size_t nx = map.grid.nx();
    const std::size_t ny = map.grid.ny();
    std::vector<Peak> found;
    for (std::size_t iy = 1; iy + 1 < ny; ++iy) {
        for (std::size_t ix = 1; ix + 1 < nx; ++ix) {
            const double v = map.at(ix, iy);
            bool strict = true;
            for (int dy = -1; dy <= 1 && strict; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (!(v > map.at(ix + dx, iy + dy))) {
                        strict = false;
                        break;
                    }
                }
            }
            if (strict) found.push_back({map.grid.point(ix, iy), v, ix, iy});
        }
    }
    std::stable_sort(found.begin(), found.end(), [](const Peak& a, const Peak& b) { return a.value > b.value; });

    PeakSearch out;
    out.incomplete = found.size() < count;
    if (found.size() > count) found.resize(count);
    for (auto& p : found) {
        // log sharpens the fit for the spiky MUSIC maps; fall back for non-positive data
        bool positive = true;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) positive = positive && map.at(p.ix + dx, p.iy + dy) > 0.0;
        }
        const auto lg = [&](std::size_t ix, std::size_t iy) {
            return positive ? std::log(map.at(ix, iy)) : map.at(ix, iy);
        };
        const double c = lg(p.ix, p.iy);
        const double dx = quadratic_offset(lg(p.ix - 1, p.iy), c, lg(p.ix + 1, p.iy));
        const double dy = quadratic_offset(lg(p.ix, p.iy - 1), c, lg(p.ix, p.iy + 1));
        p.location = {map.grid.x(p.ix) + dx * map.grid.step, map.grid.y(p.iy) + dy * map.grid.step};
    }
    out.peaks = std::move(found);
    return out;
}

}  // namespace crackmusic
