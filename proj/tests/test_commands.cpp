#include <doctest.h>

#include "crackmusic/commands.hpp"
#include "temp_dir.hpp"

using namespace crackmusic;

namespace {

RunConfig small_config(const std::filesystem::path& out) {
    auto c = config_from_json(io::Json::parse(R"({
        "scene": {"wavenumber": 12.566370614359172,
                  "cracks": [{"type": "segment", "center": [-0.6, -0.2], "half_length": 0.05, "angle": 0},
                             {"type": "segment", "center": [0.3, 0.5], "half_length": 0.05, "angle": 1}]},
        "noise": {"snr_db": 20, "seed": 7},
        "eta": [10, "k"],
        "grid": {"x0": -1.5, "x1": 1.5, "y0": -1.5, "y1": 1.5, "step": 0.02},
        "signal_dim": "manual:2"
    })"));
    c.output_dir = out.string();
    return c;
}

}  // namespace

TEST_CASE("forward writes the MSR pair") {
    TempDir dir;
    const auto r = cmd_forward(small_config(dir.path()));
    REQUIRE(r.files.size() == 2);
    const auto k = io::read_msr(dir / "msr.csv");
    CHECK(k.size() == 16);
    CHECK(k.provenance == Provenance::asymptotic);
    CHECK(k.seed.value() == 7);
}

TEST_CASE("commands are byte-for-byte deterministic") {
    TempDir a, b;
    for (const TempDir* d : {&a, &b}) {
        const auto c = small_config(d->path());
        cmd_forward(c);
        const auto data = io::read_msr(d->path() / "msr.csv");
        cmd_image(c, data);
        cmd_svd(c, data);
        cmd_theory(c);
        cmd_compare(c, data);
    }
    int compared = 0;
    for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
        CHECK(slurp(entry.path()) == slurp(b.path() / entry.path().filename()));
        ++compared;
    }
    CHECK(compared == 2 + 3 * 2 + 2 + 2 * 2 + 2);
}

TEST_CASE("image peaks follow the scaled centers") {
    TempDir dir;
    const auto c = small_config(dir.path());
    const auto data = generate_msr(c);
    cmd_image(c, data);
    const auto report = io::read_json(dir / "peaks_eta10.json");
    CHECK(report["signal_dim"] == 2);
    const double ratio = c.scene.wavenumber / 10.0;
    for (const auto& p : report["peaks"]) {
        const Point2 x = io::point_from_json(p["location"], "peak");
        double best = 1e9;
        for (const auto& z : c.scene.centers()) best = std::min(best, distance(x, ratio * z));
        CHECK(best < 0.04);
    }
    CHECK(std::filesystem::exists(dir / "image_etak.pgm"));
}

TEST_CASE("zero signal dimension warns and gives a flat map") {
    TempDir dir;
    auto c = small_config(dir.path());
    c.signal_dim = SignalDimMethod::manual(0);
    const auto r = cmd_image(c, generate_msr(c));
    REQUIRE_FALSE(r.warnings.empty());
    CHECK(r.warnings.front().find("flat") != std::string::npos);
}

TEST_CASE("svd of a zero matrix") {
    TempDir dir;
    auto c = small_config(dir.path());
    auto data = generate_msr(c);
    data.entries.setZero();
    cmd_svd(c, data);
    const auto text = slurp(dir / "spectrum.csv");
    CHECK(text.find("1,0,0\n") != std::string::npos);
    CHECK(text.find("16,0,0\n") != std::string::npos);
}

TEST_CASE("compare report fields") {
    TempDir dir;
    const auto c = small_config(dir.path());
    cmd_compare(c, generate_msr(c));
    const auto j = io::read_json(dir / "compare_eta10.json");
    for (const char* key : {"max_dev", "mean_dev", "excluded_count"}) CHECK(j.contains(key));
}

TEST_CASE("overrides and missing inputs") {
    TempDir dir;
    auto c = small_config(dir.path());
    Overrides o;
    o.etas = {EtaSpec::parse("12.5")};
    o.seed = 99;
    o.grid = ImageGrid::parse("-1,1,-1,1,0.05");
    apply_overrides(c, o);
    CHECK(c.etas.size() == 1);
    CHECK(c.seed == 99);
    CHECK(c.grid.step == 0.05);
    CHECK_THROWS_AS(cmd_calibrate(c, generate_msr(c)), ConfigError);
    c.etas.clear();
    CHECK_THROWS_AS(cmd_theory(c), ConfigError);
    Overrides bad;
    bad.snr_db = std::nan("");
    CHECK_THROWS_AS(apply_overrides(c, bad), ConfigError);
}
