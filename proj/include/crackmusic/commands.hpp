#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crackmusic/config.hpp"

namespace crackmusic {

/// Command-line values that replace the matching config fields.
struct Overrides {
    std::vector<EtaSpec> etas;  // empty: keep the config list
    std::optional<double> snr_db;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    std::optional<ImageGrid> grid;
    std::optional<SignalDimMethod> signal_dim;
};

/// Applies `o` and re-validates. Throws ConfigError.
void apply_overrides(RunConfig& config, const Overrides& o);

struct CommandResult {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

/// Forward model plus noise, as configured.
MsrMatrix generate_msr(const RunConfig& config);

/// MSR data for the analysis commands: read from `msr_path` when given,
/// generated from the config otherwise.
MsrMatrix load_or_generate(const RunConfig& config, const std::optional<std::filesystem::path>& msr_path);

/// msr.csv + msr.json
CommandResult cmd_forward(const RunConfig& config);
/// image_eta<L>.csv, image_eta<L>.pgm and peaks_eta<L>.json for each eta.
CommandResult cmd_image(const RunConfig& config, const MsrMatrix& data);
/// spectrum.csv + signal_dim.json
CommandResult cmd_svd(const RunConfig& config, const MsrMatrix& data);
/// theory_eta<L>.csv and theory_eta<L>.pgm for each eta.
CommandResult cmd_theory(const RunConfig& config);
/// compare_eta<L>.json: numeric map against the theory map.
CommandResult cmd_compare(const RunConfig& config, const MsrMatrix& data);
/// calibration.json plus the probe and re-imaged maps.
CommandResult cmd_calibrate(const RunConfig& config, const MsrMatrix& data);

}  // namespace crackmusic
