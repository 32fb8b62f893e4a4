#include "crackmusic/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace crackmusic::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    return out;
}

double parse_double(std::string_view text, const std::string& where) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError("malformed number '" + std::string(text) + "' in " + where);
    }
    return value;
}

template <typename T>
T required(const Json& j, const char* key, const std::string& what) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(what + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(what + ": field '" + key + "' has the wrong type");
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

Json point_to_json(Point2 p) { return Json::array({p.x, p.y}); }

Point2 point_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(what + ": expected a point [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json scene_to_json(const Scene& scene) {
    Json out;
    out["wavenumber"] = scene.wavenumber;
    Json cracks = Json::array();
    for (const auto& crack : scene.cracks) {
        Json c;
        if (const auto* seg = std::get_if<SegmentCrack>(&crack)) {
            c["type"] = "segment";
            c["center"] = point_to_json(seg->center);
            c["half_length"] = seg->half_length;
            c["angle"] = seg->angle;
        } else {
            c["type"] = "parametric";
            Json pts = Json::array();
            for (const auto& p : std::get<ParametricCrack>(crack).lobatto_points()) pts.push_back(point_to_json(p));
            c["points"] = std::move(pts);
        }
        cracks.push_back(std::move(c));
    }
    out["cracks"] = std::move(cracks);
    return out;
}

Scene scene_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("scene: expected an object");
    Scene scene;
    scene.wavenumber = required<double>(j, "wavenumber", "scene");
    if (!j.contains("cracks") || !j["cracks"].is_array() || j["cracks"].empty()) {
        throw ConfigError("scene: 'cracks' must be a nonempty array");
    }
    for (const auto& c : j["cracks"]) {
        const auto type = required<std::string>(c, "type", "crack");
        if (type == "segment") {
            const Point2 center = point_from_json(c.value("center", Json{}), "segment center");
            const double half = required<double>(c, "half_length", "segment");
            const double angle = c.contains("angle") ? required<double>(c, "angle", "segment") : 0.0;
            scene.cracks.emplace_back(SegmentCrack(center, half, angle));
        } else if (type == "parametric") {
            if (!c.contains("points") || !c["points"].is_array()) throw ConfigError("parametric crack: missing 'points'");
            std::vector<Point2> pts;
            for (const auto& p : c["points"]) pts.push_back(point_from_json(p, "parametric point"));
            try {
                scene.cracks.emplace_back(ParametricCrack::from_points(std::move(pts)));
            } catch (const ArgumentError& e) {
                throw ConfigError(std::string("parametric crack: ") + e.what());
            }
        } else {
            throw ConfigError("crack: unknown type '" + type + "' (segment|parametric)");
        }
    }
    try {
        scene.validate();
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("scene: ") + e.what());
    }
    return scene;
}

Json msr_sidecar(const MsrMatrix& k) {
    Json out;
    out["format"] = "crackmusic-msr";
    out["version"] = 1;
    out["N"] = k.size();
    out["wavenumber"] = k.wavenumber;
    out["convention"] = k.backscatter_convention ? "obs=-inc" : "obs=inc";
    out["direction_mode"] = to_string(k.directions.mode());
    out["provenance"] = to_string(k.provenance);
    if (k.crack_scale) out["h"] = *k.crack_scale;
    if (k.quadrature_nodes) out["quadrature_nodes"] = *k.quadrature_nodes;
    if (k.reciprocity_audit) out["reciprocity_audit"] = *k.reciprocity_audit;
    if (k.snr_db) out["snr_db"] = *k.snr_db;
    if (k.seed) out["seed"] = *k.seed;
    return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    auto p = csv_path;
    p.replace_extension(".json");
    return p;
}

void write_msr(const MsrMatrix& k, const std::filesystem::path& csv_path) {
    auto out = open_out(csv_path);
    for (Eigen::Index j = 0; j < k.entries.rows(); ++j) {
        for (Eigen::Index l = 0; l < k.entries.cols(); ++l) {
            if (l > 0) out << ',';
            out << format_double(k.entries(j, l).real()) << ',' << format_double(k.entries(j, l).imag());
        }
        out << '\n';
    }
    write_json(msr_sidecar(k), sidecar_path(csv_path));
}

MsrMatrix read_msr(const std::filesystem::path& csv_path) {
    const Json meta = read_json(sidecar_path(csv_path));
    const std::string what = "MSR sidecar '" + sidecar_path(csv_path).string() + "'";
    if (meta.value("format", std::string{}) != "crackmusic-msr") throw ConfigError(what + ": not an MSR sidecar");
    const auto n = required<std::size_t>(meta, "N", what);
    if (n < 2) throw ConfigError(what + ": N must be >= 2");

    MsrMatrix k;
    k.wavenumber = required<double>(meta, "wavenumber", what);
    const auto convention = required<std::string>(meta, "convention", what);
    if (convention != "obs=-inc" && convention != "obs=inc") throw ConfigError(what + ": unknown convention");
    k.backscatter_convention = convention == "obs=-inc";
    try {
        k.directions = make_directions(n, direction_mode_from_string(required<std::string>(meta, "direction_mode", what)));
        k.provenance = meta.contains("provenance")
                           ? provenance_from_string(required<std::string>(meta, "provenance", what))
                           : Provenance::file;
    } catch (const ArgumentError& e) {
        throw ConfigError(what + ": " + e.what());
    }
    if (meta.contains("h")) k.crack_scale = required<double>(meta, "h", what);
    if (meta.contains("quadrature_nodes")) k.quadrature_nodes = required<int>(meta, "quadrature_nodes", what);
    if (meta.contains("reciprocity_audit")) k.reciprocity_audit = required<double>(meta, "reciprocity_audit", what);
    if (meta.contains("snr_db")) k.snr_db = required<double>(meta, "snr_db", what);
    if (meta.contains("seed")) k.seed = required<std::uint64_t>(meta, "seed", what);

    std::ifstream in(csv_path);
    if (!in) throw ConfigError("cannot open '" + csv_path.string() + "'");
    const auto size = static_cast<Eigen::Index>(n);
    k.entries.resize(size, size);
    std::string line;
    Eigen::Index row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (row >= size) throw ConfigError(csv_path.string() + ": more than N rows");
        std::vector<double> values;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            values.push_back(parse_double(std::string_view(line).substr(start, comma - start), csv_path.string()));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (values.size() != 2 * n) {
            throw ConfigError(csv_path.string() + ": row " + std::to_string(row + 1) + " has " +
                              std::to_string(values.size()) + " values, expected " + std::to_string(2 * n));
        }
        for (Eigen::Index l = 0; l < size; ++l) k.entries(row, l) = {values[2 * l], values[2 * l + 1]};
        ++row;
    }
    if (row != size) throw ConfigError(csv_path.string() + ": expected " + std::to_string(n) + " rows");
    return k;
}

void write_image_csv(const ImageMap& map, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "x,y,value\n";
    for (std::size_t iy = 0; iy < map.grid.ny(); ++iy) {
        for (std::size_t ix = 0; ix < map.grid.nx(); ++ix) {
            out << format_double(map.grid.x(ix)) << ',' << format_double(map.grid.y(iy)) << ','
                << format_double(map.at(ix, iy)) << '\n';
        }
    }
}

void write_pgm(const ImageMap& map, const std::filesystem::path& path) {
    auto out = open_out(path, true);
    const auto [lo_it, hi_it] = std::minmax_element(map.values.begin(), map.values.end());
    const double lo = map.values.empty() ? 0.0 : *lo_it;
    const double hi = map.values.empty() ? 0.0 : *hi_it;
    const std::size_t nx = map.grid.nx();
    const std::size_t ny = map.grid.ny();
    out << "P5\n# crackmusic " << format_double(map.grid.x0) << ' ' << format_double(map.grid.x1) << ' '
        << format_double(map.grid.y0) << ' ' << format_double(map.grid.y1) << ' ' << format_double(map.grid.step)
        << ' ' << format_double(lo) << ' ' << format_double(hi) << ' ' << format_double(map.eta) << '\n'
        << nx << ' ' << ny << "\n255\n";
    std::vector<unsigned char> row(nx);
    for (std::size_t r = 0; r < ny; ++r) {
        const std::size_t iy = ny - 1 - r;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double v = hi > lo ? (map.at(ix, iy) - lo) / (hi - lo) : 0.0;
            row[ix] = static_cast<unsigned char>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
}

void write_spectrum_csv(const SignalSpace& space, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "index,sigma,ratio\n";
    const auto& sv = space.singular_values;
    for (Eigen::Index m = 0; m < sv.size(); ++m) {
        const double ratio = sv(0) > 0.0 ? sv(m) / sv(0) : 0.0;
        out << (m + 1) << ',' << format_double(sv(m)) << ',' << format_double(ratio) << '\n';
    }
}

Json peaks_to_json(const PeakSearch& search) {
    Json out;
    Json list = Json::array();
    for (const auto& p : search.peaks) {
        list.push_back(Json{{"location", point_to_json(p.location)}, {"value", p.value}});
    }
    out["peaks"] = std::move(list);
    out["incomplete"] = search.incomplete;
    return out;
}

Json compare_report_to_json(const CompareReport& report) {
    Json out;
    out["max_dev"] = report.max_dev;
    out["mean_dev"] = report.mean_dev;
    out["excluded_count"] = report.excluded_count;
    out["compared_count"] = report.compared_count;
    return out;
}

Json calibration_report_to_json(const CalibrationResult& result) {
    Json out;
    out["k_hat"] = result.k_hat;
    out["peak"] = point_to_json(result.peak);
    out["eta_used"] = result.eta_used;
    out["residual"] = result.residual;
    out["ambiguous"] = result.ambiguous;
    out["signal_dim"] = result.signal_dim;
    return out;
}

void write_json(const Json& j, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
    }
}

}  // namespace crackmusic::io
