#include "crackmusic/commands.hpp"

#include "crackmusic/forward_asym.hpp"
#include "crackmusic/noise.hpp"

namespace crackmusic {

using io::Json;

namespace {

std::filesystem::path out_path(const RunConfig& c, const std::string& file) {
    return std::filesystem::path(c.output_dir) / file;
}

void require_etas(const RunConfig& c) {
    if (c.etas.empty()) throw ConfigError("no eta values: set 'eta' in the config or pass --eta");
}

SignalSpace signal_space(const RunConfig& c, const MsrMatrix& data, CommandResult& result) {
    SignalSpace space;
    try {
        space = select_signal_dim(svd_msr(data), c.signal_dim);
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("signal_dim: ") + e.what());
    }
    if (space.dim == 0) result.warnings.push_back("signal dimension is 0: the imaging map is flat");
    if (space.ambiguous) {
        result.warnings.push_back("no clear gap in the singular values; " + c.signal_dim.to_string() +
                                  " chose M = " + std::to_string(space.dim));
    }
    return space;
}

void write_map(const ImageMap& map, const RunConfig& c, const std::string& stem, CommandResult& result) {
    const auto csv = out_path(c, stem + ".csv");
    const auto pgm = out_path(c, stem + ".pgm");
    io::write_image_csv(map, csv);
    io::write_pgm(map, pgm);
    result.files.push_back(csv);
    result.files.push_back(pgm);
}

void write_json_file(const Json& j, const std::filesystem::path& path, CommandResult& result) {
    io::write_json(j, path);
    result.files.push_back(path);
}

// sector of the crack images, known for synthetic single-crack scenes
std::optional<SafeCone> crack_cone(const Scene& scene) {
    if (scene.cracks.size() != 1) return std::nullopt;
    const Crack& crack = scene.cracks.front();
    std::vector<Point2> samples;
    for (int i = 1; i < 32; ++i) samples.push_back(crack_point(crack, -1.0 + 2.0 * i / 32.0));
    try {
        return safe_cone({crack_point(crack, -1.0), crack_point(crack, 1.0)}, samples);
    } catch (const ArgumentError&) {
        return std::nullopt;
    }
}

}  // namespace

void apply_overrides(RunConfig& config, const Overrides& o) {
    if (!o.etas.empty()) config.etas = o.etas;
    if (o.snr_db) config.snr_db = *o.snr_db;
    if (o.seed) config.seed = *o.seed;
    if (o.output_dir) config.output_dir = *o.output_dir;
    if (o.grid) config.grid = *o.grid;
    if (o.signal_dim) config.signal_dim = *o.signal_dim;
    config.validate();
}

MsrMatrix generate_msr(const RunConfig& config) {
    const Scene scene = config.data_scene();
    const DirectionSet dirs = config.directions();
    MsrMatrix k = config.model == ForwardModel::bie ? assemble_msr_bie(scene, dirs, config.bie)
                                                    : assemble_msr(scene, config.h, dirs);
    if (config.noisy()) k = add_awgn(k, config.snr_db, config.seed);
    return k;
}

MsrMatrix load_or_generate(const RunConfig& config, const std::optional<std::filesystem::path>& msr_path) {
    return msr_path ? io::read_msr(*msr_path) : generate_msr(config);
}

CommandResult cmd_forward(const RunConfig& config) {
    CommandResult result;
    const MsrMatrix k = generate_msr(config);
    const auto csv = out_path(config, "msr.csv");
    io::write_msr(k, csv);
    result.files.push_back(csv);
    result.files.push_back(io::sidecar_path(csv));
    return result;
}

CommandResult cmd_image(const RunConfig& config, const MsrMatrix& data) {
    require_etas(config);
    CommandResult result;
    const SignalSpace space = signal_space(config, data, result);
    for (const auto& spec : config.etas) {
        const double eta = spec.resolve(data.wavenumber);
        const ImageMap map = imaging_map(space, config.grid, eta, data.directions);
        const PeakSearch peaks = find_peaks(map, config.resolved_peak_count());
        if (peaks.incomplete) {
            result.warnings.push_back("eta " + spec.label() + ": fewer local maxima than requested peaks");
        }
        write_map(map, config, "image_eta" + spec.label(), result);

        Json report;
        report["eta"] = eta;
        report["signal_dim"] = space.dim;
        report["ambiguous"] = space.ambiguous;
        const Json p = io::peaks_to_json(peaks);
        report["peaks"] = p["peaks"];
        report["incomplete"] = p["incomplete"];
        write_json_file(report, out_path(config, "peaks_eta" + spec.label() + ".json"), result);
    }
    return result;
}

CommandResult cmd_svd(const RunConfig& config, const MsrMatrix& data) {
    CommandResult result;
    const SignalSpace space = signal_space(config, data, result);
    const auto csv = out_path(config, "spectrum.csv");
    io::write_spectrum_csv(space, csv);
    result.files.push_back(csv);

    Json report;
    report["N"] = space.size();
    report["method"] = config.signal_dim.to_string();
    report["signal_dim"] = space.dim;
    report["ambiguous"] = space.ambiguous;
    write_json_file(report, out_path(config, "signal_dim.json"), result);
    return result;
}

CommandResult cmd_theory(const RunConfig& config) {
    require_etas(config);
    CommandResult result;
    const Scene scene = config.data_scene();
    for (const auto& spec : config.etas) {
        TheoryParams p;
        p.wavenumber = scene.wavenumber;
        p.eta = spec.resolve(scene.wavenumber);
        p.centers = scene.centers();
        p.variant = config.theory_variant;
        write_map(theory_map(p, config.grid), config, "theory_eta" + spec.label(), result);
    }
    return result;
}

CommandResult cmd_compare(const RunConfig& config, const MsrMatrix& data) {
    require_etas(config);
    CommandResult result;
    const SignalSpace space = signal_space(config, data, result);
    const Scene scene = config.data_scene();
    for (const auto& spec : config.etas) {
        TheoryParams p;
        p.wavenumber = data.wavenumber;
        p.eta = spec.resolve(data.wavenumber);
        p.centers = scene.centers();
        p.variant = config.theory_variant;
        const ImageMap numeric = imaging_map(space, config.grid, p.eta, data.directions);
        const ImageMap theory = theory_map(p, config.grid);
        const CompareReport report = compare_maps(numeric, theory, p, config.exclusion_radius);

        Json j = io::compare_report_to_json(report);
        j["eta"] = p.eta;
        j["variant"] = to_string(p.variant);
        j["exclusion_radius"] = config.exclusion_radius;
        write_json_file(j, out_path(config, "compare_eta" + spec.label() + ".json"), result);
    }
    return result;
}

CommandResult cmd_calibrate(const RunConfig& config, const MsrMatrix& data) {
    if (!config.calibration) throw ConfigError("calibrate needs a 'calibration' block in the config");
    CommandResult result;
    CalibrationPlan plan = config.calibration->plan();
    plan.unsafe_region = crack_cone(config.scene);

    const CalibrationResult cal =
        calibrate_and_image(data, plan, config.grid, config.signal_dim, config.calibration->options);
    if (cal.ambiguous) result.warnings.push_back("calibration peak is ambiguous");

    Json j = io::calibration_report_to_json(cal);
    j["k_true"] = data.wavenumber;
    j["relative_error"] = std::abs(cal.k_hat - data.wavenumber) / data.wavenumber;
    write_json_file(j, out_path(config, "calibration.json"), result);
    write_map(cal.probe_map, config, "calibration_probe", result);
    write_map(cal.reimaged, config, "calibration_reimaged", result);
    return result;
}

}  // namespace crackmusic
