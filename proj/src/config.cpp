#include "crackmusic/config.hpp"

#include <charconv>
#include <initializer_list>

namespace crackmusic {

using io::Json;

namespace {

void check_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) known = known || item.key() == key;
        if (!known) throw ConfigError(where + ": unknown field '" + item.key() + "'");
    }
}

double get_number(const Json& j, const char* key, const std::string& where) {
    const Json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return v.get<double>();
}

double get_positive(const Json& j, const char* key, const std::string& where) {
    const double v = get_number(j, key, where);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(where + "." + key + ": must be a positive finite number");
    return v;
}

std::uint64_t get_unsigned(const Json& j, const char* key, const std::string& where) {
    const Json& v = j.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(where + "." + key + ": expected a non-negative integer");
}

std::string get_string(const Json& j, const char* key, const std::string& where) {
    const Json& v = j.at(key);
    if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

// converts ArgumentError from the domain parsers into ConfigError
template <typename F>
auto as_config(const std::string& where, F&& f) {
    try {
        return f();
    } catch (const ArgumentError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

}  // namespace

std::string to_string(ForwardModel m) { return m == ForwardModel::bie ? "bie" : "asym"; }

ForwardModel forward_model_from_string(const std::string& text) {
    if (text == "asym") return ForwardModel::asym;
    if (text == "bie") return ForwardModel::bie;
    throw ArgumentError("unknown forward model '" + text + "' (asym|bie)");
}

EtaSpec EtaSpec::parse(const std::string& text) {
    if (text == "k") return {true, 0.0};
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !(v > 0.0) || !std::isfinite(v)) {
        throw ArgumentError("eta must be a positive number or \"k\", got '" + text + "'");
    }
    return {false, v};
}

std::string EtaSpec::label() const {
    if (true_k) return "k";
    char buf[40];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

CalibrationPlan CalibrationSettings::plan() const {
    CalibrationPlan p;
    p.location = location;
    p.kind = kind;
    p.half_length = half_length;
    p.angle = angle;
    p.eta = eta;
    return p;
}

Scene RunConfig::data_scene() const {
    Scene out = scene;
    if (calibration) out.cracks.emplace_back(calibration->plan().scatterer());
    return out;
}

std::size_t RunConfig::resolved_peak_count() const {
    return peak_count > 0 ? peak_count : data_scene().cracks.size();
}

void RunConfig::validate() const {
    as_config("scene", [&] {
        scene.validate();
        return 0;
    });
    if (model == ForwardModel::asym) {
        if (!(h > 0.0) || !(h < 2.0)) throw ConfigError("forward.h must lie in (0, 2)");
        if (!data_scene().segments_only()) throw ConfigError("forward.model asym needs segment cracks only");
    }
    if (model == ForwardModel::bie) {
        if (bie.initial_nodes < 8 || bie.initial_nodes % 2 != 0) {
            throw ConfigError("forward.bie.initial_nodes must be even and >= 8");
        }
        if (bie.max_nodes < bie.initial_nodes) throw ConfigError("forward.bie.max_nodes < initial_nodes");
        if (!(bie.convergence_tol > 0.0)) throw ConfigError("forward.bie.tolerance must be positive");
    }
    if (direction_count < 2) throw ConfigError("directions.count must be >= 2");
    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
        throw ConfigError("noise.snr_db must be a number or +inf");
    }
    as_config("grid", [&] {
        grid.validate();
        return 0;
    });
    if (signal_dim.kind == SignalDimMethod::Kind::manual &&
        signal_dim.manual_dim > static_cast<int>(direction_count)) {
        throw ConfigError("signal_dim: manual dimension exceeds the number of directions");
    }
    if (!(exclusion_radius >= 0.0)) throw ConfigError("theory.exclusion_radius must be >= 0");
    for (const auto& eta : etas) {
        if (!eta.true_k && !(eta.value > 0.0)) throw ConfigError("eta values must be positive");
    }
    for (std::size_t a = 0; a < etas.size(); ++a) {
        for (std::size_t b = a + 1; b < etas.size(); ++b) {
            if (etas[a].label() == etas[b].label()) throw ConfigError("eta list repeats " + etas[a].label());
        }
    }
    if (calibration) {
        as_config("calibration", [&] {
            calibration->plan().validate();
            return 0;
        });
        const auto& o = calibration->options;
        if (o.peak_count == 0) throw ConfigError("calibration.peak_count must be positive");
        if (!(o.ray_tolerance > 0.0)) throw ConfigError("calibration.ray_tolerance must be positive");
        if (!(o.dominance > 0.0) || o.dominance > 1.0) throw ConfigError("calibration.dominance must lie in (0, 1]");
        if (!(o.separation_cells > 0.0)) throw ConfigError("calibration.separation_cells must be positive");
    }
}

RunConfig config_from_json(const Json& j, const std::filesystem::path& base_dir) {
    check_keys(j, "config", {"name", "scene", "scene_file", "forward", "directions", "noise", "eta", "grid",
                             "signal_dim", "peak_count", "output_dir", "theory", "calibration"});
    RunConfig c;
    if (j.contains("name")) c.name = get_string(j, "name", "config");

    if (j.contains("scene") == j.contains("scene_file")) {
        throw ConfigError("config: exactly one of 'scene' and 'scene_file' is required");
    }
    if (j.contains("scene")) {
        c.scene = io::scene_from_json(j["scene"]);
    } else {
        c.scene_file = get_string(j, "scene_file", "config");
        std::filesystem::path p(c.scene_file);
        if (p.is_relative()) p = base_dir / p;
        c.scene = io::scene_from_json(io::read_json(p));
    }

    if (j.contains("forward")) {
        const Json& f = j["forward"];
        check_keys(f, "forward", {"model", "h", "bie"});
        if (f.contains("model")) {
            c.model = as_config("forward", [&] { return forward_model_from_string(get_string(f, "model", "forward")); });
        }
        if (f.contains("h")) c.h = get_positive(f, "h", "forward");
        if (f.contains("bie")) {
            const Json& b = f["bie"];
            check_keys(b, "forward.bie", {"initial_nodes", "max_nodes", "tolerance"});
            if (b.contains("initial_nodes")) c.bie.initial_nodes = static_cast<int>(get_unsigned(b, "initial_nodes", "forward.bie"));
            if (b.contains("max_nodes")) c.bie.max_nodes = static_cast<int>(get_unsigned(b, "max_nodes", "forward.bie"));
            if (b.contains("tolerance")) c.bie.convergence_tol = get_positive(b, "tolerance", "forward.bie");
        }
    }

    if (j.contains("directions")) {
        const Json& d = j["directions"];
        check_keys(d, "directions", {"count", "mode"});
        if (d.contains("count")) c.direction_count = get_unsigned(d, "count", "directions");
        if (d.contains("mode")) {
            c.direction_mode =
                as_config("directions", [&] { return direction_mode_from_string(get_string(d, "mode", "directions")); });
        }
    }

    if (j.contains("noise")) {
        const Json& n = j["noise"];
        check_keys(n, "noise", {"snr_db", "seed"});
        if (n.contains("snr_db")) c.snr_db = get_number(n, "snr_db", "noise");
        if (n.contains("seed")) c.seed = get_unsigned(n, "seed", "noise");
    }

    if (j.contains("eta")) {
        if (!j["eta"].is_array()) throw ConfigError("eta: expected an array");
        for (const auto& e : j["eta"]) {
            if (e.is_string()) {
                c.etas.push_back(as_config("eta", [&] { return EtaSpec::parse(e.get<std::string>()); }));
            } else if (e.is_number()) {
                const double v = e.get<double>();
                if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("eta: values must be positive");
                c.etas.push_back({false, v});
            } else {
                throw ConfigError("eta: entries must be numbers or \"k\"");
            }
        }
    }

    if (j.contains("grid")) {
        const Json& g = j["grid"];
        check_keys(g, "grid", {"x0", "x1", "y0", "y1", "step"});
        if (g.contains("x0")) c.grid.x0 = get_number(g, "x0", "grid");
        if (g.contains("x1")) c.grid.x1 = get_number(g, "x1", "grid");
        if (g.contains("y0")) c.grid.y0 = get_number(g, "y0", "grid");
        if (g.contains("y1")) c.grid.y1 = get_number(g, "y1", "grid");
        if (g.contains("step")) c.grid.step = get_positive(g, "step", "grid");
    }

    if (j.contains("signal_dim")) {
        c.signal_dim = as_config("signal_dim", [&] { return SignalDimMethod::parse(get_string(j, "signal_dim", "config")); });
    }
    if (j.contains("peak_count")) c.peak_count = get_unsigned(j, "peak_count", "config");
    if (j.contains("output_dir")) c.output_dir = get_string(j, "output_dir", "config");

    if (j.contains("theory")) {
        const Json& t = j["theory"];
        check_keys(t, "theory", {"variant", "exclusion_radius"});
        if (t.contains("variant")) {
            c.theory_variant =
                as_config("theory", [&] { return theory_variant_from_string(get_string(t, "variant", "theory")); });
        }
        if (t.contains("exclusion_radius")) c.exclusion_radius = get_number(t, "exclusion_radius", "theory");
    }

    if (j.contains("calibration")) {
        const Json& cal = j["calibration"];
        check_keys(cal, "calibration", {"location", "kind", "half_length", "angle", "eta", "peak_count",
                                        "ray_tolerance", "dominance", "separation_cells"});
        CalibrationSettings s;
        if (!cal.contains("location")) throw ConfigError("calibration: missing field 'location'");
        s.location = io::point_from_json(cal["location"], "calibration.location");
        if (cal.contains("kind")) {
            s.kind = as_config("calibration", [&] { return scatterer_kind_from_string(get_string(cal, "kind", "calibration")); });
        }
        if (s.kind == ScattererKind::small_crack) s.half_length = 0.05;
        if (cal.contains("half_length")) s.half_length = get_positive(cal, "half_length", "calibration");
        if (cal.contains("angle")) s.angle = get_number(cal, "angle", "calibration");
        if (cal.contains("eta")) s.eta = get_positive(cal, "eta", "calibration");
        if (cal.contains("peak_count")) s.options.peak_count = get_unsigned(cal, "peak_count", "calibration");
        if (cal.contains("ray_tolerance")) s.options.ray_tolerance = get_positive(cal, "ray_tolerance", "calibration");
        if (cal.contains("dominance")) s.options.dominance = get_positive(cal, "dominance", "calibration");
        if (cal.contains("separation_cells")) {
            s.options.separation_cells = get_positive(cal, "separation_cells", "calibration");
        }
        c.calibration = s;
    }

    c.validate();
    return c;
}

Json config_to_json(const RunConfig& c) {
    Json j;
    if (!c.name.empty()) j["name"] = c.name;
    if (c.scene_file.empty()) {
        j["scene"] = io::scene_to_json(c.scene);
    } else {
        j["scene_file"] = c.scene_file;
    }

    Json f;
    f["model"] = to_string(c.model);
    f["h"] = c.h;
    f["bie"] = Json{{"initial_nodes", c.bie.initial_nodes},
                    {"max_nodes", c.bie.max_nodes},
                    {"tolerance", c.bie.convergence_tol}};
    j["forward"] = std::move(f);

    j["directions"] = Json{{"count", c.direction_count}, {"mode", to_string(c.direction_mode)}};

    Json noise;
    if (c.noisy()) noise["snr_db"] = c.snr_db;
    noise["seed"] = c.seed;
    j["noise"] = std::move(noise);

    Json etas = Json::array();
    for (const auto& e : c.etas) {
        if (e.true_k) {
            etas.push_back("k");
        } else {
            etas.push_back(e.value);
        }
    }
    j["eta"] = std::move(etas);

    j["grid"] = Json{{"x0", c.grid.x0}, {"x1", c.grid.x1}, {"y0", c.grid.y0}, {"y1", c.grid.y1}, {"step", c.grid.step}};
    j["signal_dim"] = c.signal_dim.to_string();
    j["peak_count"] = c.peak_count;
    j["output_dir"] = c.output_dir;
    j["theory"] = Json{{"variant", to_string(c.theory_variant)}, {"exclusion_radius", c.exclusion_radius}};

    if (c.calibration) {
        const auto& s = *c.calibration;
        j["calibration"] = Json{{"location", io::point_to_json(s.location)},
                                {"kind", to_string(s.kind)},
                                {"half_length", s.half_length},
                                {"angle", s.angle},
                                {"eta", s.eta},
                                {"peak_count", s.options.peak_count},
                                {"ray_tolerance", s.options.ray_tolerance},
                                {"dominance", s.options.dominance},
                                {"separation_cells", s.options.separation_cells}};
    }
    return j;
}

RunConfig load_config(const std::filesystem::path& path) {
    return config_from_json(io::read_json(path), path.parent_path());
}

}  // namespace crackmusic
