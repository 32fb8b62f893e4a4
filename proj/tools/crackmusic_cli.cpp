#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crackmusic/commands.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Args {
    std::string config;
    std::vector<std::string> etas;
    std::optional<double> snr_db;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> grid;
    std::optional<std::string> signal_dim;
    std::optional<std::string> msr;
};

void add_common(CLI::App* cmd, Args& a, bool data_input, bool config_required = true) {
    auto* cfg = cmd->add_option("--config", a.config, "run configuration (JSON)");
    if (config_required) cfg->required();
    cmd->add_option("--eta", a.etas, "probe wavenumber, a number or k (repeatable)");
    cmd->add_option("--snr-db", a.snr_db, "noise level in dB (inf: noise free)");
    cmd->add_option("--seed", a.seed, "noise seed");
    cmd->add_option("--out", a.out, "output directory");
    cmd->add_option("--grid", a.grid, "imaging grid x0,x1,y0,y1,step");
    cmd->add_option("--signal-dim", a.signal_dim, "manual:M | log_gap | threshold:T");
    if (data_input) cmd->add_option("--msr", a.msr, "MSR csv to analyse instead of generating data");
}

crackmusic::Overrides overrides_from(const Args& a) {
    using namespace crackmusic;
    Overrides o;
    try {
        for (const auto& e : a.etas) o.etas.push_back(EtaSpec::parse(e));
        if (a.grid) o.grid = ImageGrid::parse(*a.grid);
        if (a.signal_dim) o.signal_dim = SignalDimMethod::parse(*a.signal_dim);
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }
    o.snr_db = a.snr_db;
    o.seed = a.seed;
    o.output_dir = a.out;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace crackmusic;

    CLI::App app{"MUSIC imaging of cracks with an unknown wavenumber"};
    app.require_subcommand(1);
    Args args;
    auto* forward = app.add_subcommand("forward", "simulate the multistatic response matrix");
    auto* image = app.add_subcommand("image", "MUSIC maps and peak lists for each eta");
    auto* svd = app.add_subcommand("svd", "singular value spectrum and signal dimension");
    auto* theory = app.add_subcommand("theory", "closed-form maps for each eta");
    auto* compare = app.add_subcommand("compare", "numeric against closed-form maps");
    auto* calibrate = app.add_subcommand("calibrate", "estimate k from a calibration scatterer and re-image");
    add_common(forward, args, false);
    add_common(image, args, true);
    add_common(svd, args, true, false);
    add_common(theory, args, false);
    add_common(compare, args, true);
    add_common(calibrate, args, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        const Overrides o = overrides_from(args);
        std::optional<std::filesystem::path> msr;
        if (args.msr) msr = *args.msr;

        RunConfig config;
        if (!args.config.empty()) {
            config = load_config(args.config);
            apply_overrides(config, o);
        } else {
            if (!msr) throw ConfigError("svd needs --config or --msr");
            if (o.output_dir) config.output_dir = *o.output_dir;
            if (o.signal_dim) config.signal_dim = *o.signal_dim;
        }

        CommandResult result;
        if (*forward) {
            result = cmd_forward(config);
        } else if (*image) {
            result = cmd_image(config, load_or_generate(config, msr));
        } else if (*svd) {
            result = cmd_svd(config, load_or_generate(config, msr));
        } else if (*theory) {
            result = cmd_theory(config);
        } else if (*compare) {
            result = cmd_compare(config, load_or_generate(config, msr));
        } else {
            result = cmd_calibrate(config, load_or_generate(config, msr));
        }
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
        for (const auto& f : result.files) std::cout << f.string() << '\n';
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ArgumentError& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "file error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
