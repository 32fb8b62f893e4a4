#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crackmusic/calibrate.hpp"
#include "crackmusic/forward_bie.hpp"
#include "crackmusic/io.hpp"
#include "crackmusic/music.hpp"
#include "crackmusic/noise.hpp"
#include "crackmusic/theory.hpp"

namespace crackmusic {

enum class ForwardModel { asym, bie };

std::string to_string(ForwardModel m);
ForwardModel forward_model_from_string(const std::string& text);

/// A probe wavenumber: a number, or "k" for the scene's true wavenumber.
struct EtaSpec {
    bool true_k = false;
    double value = 0.0;

    static EtaSpec parse(const std::string& text);
    [[nodiscard]] double resolve(double k) const { return true_k ? k : value; }
    /// "k" or the shortest decimal form, used in output file names.
    [[nodiscard]] std::string label() const;

    friend bool operator==(const EtaSpec&, const EtaSpec&) = default;
};

struct CalibrationSettings {
    Point2 location{0.0, -1.0};
    ScattererKind kind = ScattererKind::segment;
    double half_length = 1.0;
    double angle = 0.0;
    double eta = 20.0;
    CalibrationOptions options;

    [[nodiscard]] CalibrationPlan plan() const;
};

struct RunConfig {
    std::string name;
    Scene scene;
    std::string scene_file;  // when set, `scene` was loaded from it and is serialized by reference

    ForwardModel model = ForwardModel::asym;
    double h = 0.05;
    BieOptions bie;

    std::size_t direction_count = 16;
    DirectionMode direction_mode = DirectionMode::closed;

    double snr_db = kNoiseFree;
    std::uint64_t seed = 0;

    std::vector<EtaSpec> etas;
    ImageGrid grid;
    SignalDimMethod signal_dim = SignalDimMethod::log_gap();
    std::size_t peak_count = 0;  // 0: one per crack
    std::string output_dir = "out";

    TheoryVariant theory_variant = TheoryVariant::squared;
    double exclusion_radius = 0.5;

    std::optional<CalibrationSettings> calibration;

    [[nodiscard]] bool noisy() const { return std::isfinite(snr_db); }
    [[nodiscard]] DirectionSet directions() const { return make_directions(direction_count, direction_mode); }
    /// Scene used to generate data: the configured cracks plus the
    /// calibration scatterer when a calibration block is present.
    [[nodiscard]] Scene data_scene() const;
    [[nodiscard]] std::size_t resolved_peak_count() const;
    /// Throws ConfigError on any inconsistency.
    void validate() const;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// ConfigError. `base_dir` resolves a relative scene_file.
RunConfig config_from_json(const io::Json& j, const std::filesystem::path& base_dir = {});
io::Json config_to_json(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace crackmusic
