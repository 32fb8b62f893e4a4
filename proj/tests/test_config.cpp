#include <doctest.h>

#include "crackmusic/config.hpp"
#include "temp_dir.hpp"

using namespace crackmusic;

namespace {

const std::filesystem::path kPresets = CRACKMUSIC_CONFIG_DIR;

io::Json minimal() {
    return io::Json::parse(R"({
        "scene": {"wavenumber": 12.5,
                  "cracks": [{"type": "segment", "center": [0.1, 0.2], "half_length": 0.05, "angle": 0.3}]},
        "eta": [10, "k"]
    })");
}

}  // namespace

TEST_CASE("presets load and validate") {
    for (const char* name : {"fig1", "fig2", "fig3", "fig4"}) {
        const auto c = load_config(kPresets / (std::string(name) + ".json"));
        CHECK(c.name == name);
        CHECK(c.model == ForwardModel::bie);
        CHECK(c.noisy());
        CHECK(c.snr_db == 20.0);
    }
    const auto fig3 = load_config(kPresets / "fig3.json");
    CHECK(fig3.direction_count == 32);
    CHECK(fig3.signal_dim.to_string() == "manual:13");
    CHECK(fig3.scene.wavenumber == doctest::Approx(kTwoPi / 0.4));
    const auto fig4 = load_config(kPresets / "fig4.json");
    REQUIRE(fig4.calibration.has_value());
    CHECK(fig4.data_scene().cracks.size() == 2);
}

TEST_CASE("parse, serialize, parse is the identity") {
    for (const char* name : {"fig1", "fig2", "fig3", "fig4"}) {
        const auto a = load_config(kPresets / (std::string(name) + ".json"));
        const auto ja = config_to_json(a);
        const auto b = config_from_json(io::Json::parse(ja.dump()), kPresets);
        CHECK(config_to_json(b).dump() == ja.dump());
        CHECK(b.scene == a.scene);
    }
    const auto c = config_from_json(minimal());
    CHECK(config_to_json(config_from_json(config_to_json(c))) == config_to_json(c));
}

TEST_CASE("defaults") {
    const auto c = config_from_json(minimal());
    CHECK(c.model == ForwardModel::asym);
    CHECK(c.direction_count == 16);
    CHECK(c.direction_mode == DirectionMode::closed);
    CHECK_FALSE(c.noisy());
    CHECK(c.grid == ImageGrid{});
    CHECK(c.signal_dim.to_string() == "log_gap");
    CHECK(c.resolved_peak_count() == 1);
    REQUIRE(c.etas.size() == 2);
    CHECK(c.etas[1].true_k);
    CHECK(c.etas[0].label() == "10");
    CHECK(c.etas[1].resolve(3.0) == 3.0);
}

TEST_CASE("schema violations are config errors") {
    auto bad = [](const std::function<void(io::Json&)>& edit) {
        io::Json j = minimal();
        edit(j);
        CHECK_THROWS_AS(config_from_json(j), ConfigError);
    };
    bad([](io::Json& j) { j["colour"] = "blue"; });
    bad([](io::Json& j) { j["scene_file"] = "x.json"; });
    bad([](io::Json& j) { j.erase("scene"); });
    bad([](io::Json& j) { j["eta"] = io::Json::array({-1}); });
    bad([](io::Json& j) { j["eta"] = io::Json::array({"q"}); });
    bad([](io::Json& j) { j["eta"] = io::Json::array({10, 10.0}); });
    bad([](io::Json& j) { j["signal_dim"] = "elbow"; });
    bad([](io::Json& j) { j["signal_dim"] = "manual:40"; });
    bad([](io::Json& j) { j["forward"] = {{"model", "fem"}}; });
    bad([](io::Json& j) { j["forward"] = {{"h", 3.0}}; });
    bad([](io::Json& j) { j["forward"] = {{"model", "bie"}, {"bie", {{"initial_nodes", 7}}}}; });
    bad([](io::Json& j) { j["directions"] = {{"count", 1}}; });
    bad([](io::Json& j) { j["directions"] = {{"count", -4}}; });
    bad([](io::Json& j) { j["directions"] = {{"mode", "spiral"}}; });
    bad([](io::Json& j) { j["grid"] = {{"step", 0}}; });
    bad([](io::Json& j) { j["grid"] = {{"x0", 3}}; });
    bad([](io::Json& j) { j["noise"] = {{"seed", "seven"}}; });
    bad([](io::Json& j) { j["calibration"] = {{"eta", 20}}; });
    bad([](io::Json& j) { j["calibration"] = {{"location", {0, 0}}}; });
    bad([](io::Json& j) { j["theory"] = {{"variant", "cubic"}}; });
    bad([](io::Json& j) { j["scene"]["cracks"] = io::Json::array({{{"type", "parametric"}, {"points", {{0, 0}}}}}); });
}

TEST_CASE("asymptotic model rejects curved cracks") {
    io::Json j = io::Json::parse(slurp(kPresets / "fig3.json"));
    j["forward"]["model"] = "asym";
    CHECK_THROWS_AS(config_from_json(j, kPresets), ConfigError);
}

TEST_CASE("scene files resolve relative to the config") {
    TempDir dir;
    std::filesystem::create_directories(dir / "scenes");
    spit(dir / "scenes/s.json", minimal()["scene"].dump());
    spit(dir / "run.json", R"({"scene_file": "scenes/s.json", "eta": [5]})");
    const auto c = load_config(dir / "run.json");
    CHECK(c.scene.wavenumber == 12.5);
    CHECK(config_to_json(c)["scene_file"] == "scenes/s.json");
    spit(dir / "run.json", R"({"scene_file": "scenes/none.json"})");
    CHECK_THROWS_AS(load_config(dir / "run.json"), ConfigError);
    spit(dir / "run.json", "{ not json");
    CHECK_THROWS_AS(load_config(dir / "run.json"), ConfigError);
}
