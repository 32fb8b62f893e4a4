#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "crackmusic/calibrate.hpp"
#include "crackmusic/msr.hpp"
#include "crackmusic/music.hpp"
#include "crackmusic/scene.hpp"
#include "crackmusic/theory.hpp"

namespace crackmusic::io {

using Json = nlohmann::ordered_json;

/// "%.17g"
std::string format_double(double value);

Json point_to_json(Point2 p);
Point2 point_from_json(const Json& j, const std::string& what);

Json scene_to_json(const Scene& scene);
/// Throws ConfigError on missing or malformed fields.
Scene scene_from_json(const Json& j);

Json msr_sidecar(const MsrMatrix& k);

/// Writes `csv_path` (one matrix row per line, columns re_1,im_1,...,re_N,im_N)
/// and the sidecar next to it with extension .json.
void write_msr(const MsrMatrix& k, const std::filesystem::path& csv_path);
/// Reads a pair written by write_msr. Throws ConfigError on malformed input.
MsrMatrix read_msr(const std::filesystem::path& csv_path);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Header "x,y,value", one grid point per line, y outer / x inner.
void write_image_csv(const ImageMap& map, const std::filesystem::path& path);
/// Binary P5, 8-bit, min-max normalized. The first image row is the top
/// (largest y). Comment line: "# crackmusic x0 x1 y0 y1 step min max eta".
void write_pgm(const ImageMap& map, const std::filesystem::path& path);
/// Header "index,sigma,ratio" with 1-based index and ratio = sigma/sigma_1.
void write_spectrum_csv(const SignalSpace& space, const std::filesystem::path& path);

Json peaks_to_json(const PeakSearch& search);
Json compare_report_to_json(const CompareReport& report);
Json calibration_report_to_json(const CalibrationResult& result);

void write_json(const Json& j, const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

}  // namespace crackmusic::io
