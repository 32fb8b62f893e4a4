#pragma once

#include <vector>

#include "crackmusic/music.hpp"

namespace crackmusic {

/// squared: (1 - sum_m J0(|eta x - k z_m|)^2)^(-1/2)
/// linear:  (1 - sum_m J0(|eta x - k z_m|))^(-1/2)
/// Both clamp the radicand at 1e-12.
enum class TheoryVariant { squared, linear };

std::string to_string(TheoryVariant v);
TheoryVariant theory_variant_from_string(const std::string& text);

struct TheoryParams {
    double wavenumber = 0.0;  // true k
    double eta = 0.0;         // probe wavenumber
    std::vector<Point2> centers;
    TheoryVariant variant = TheoryVariant::squared;

    /// Throws ArgumentError unless k, eta > 0 and centers is nonempty.
    void validate() const;
    /// (k / eta) z_m: where the predicted map peaks.
    [[nodiscard]] std::vector<Point2> predicted_peaks() const;
    /// min_m |eta x - k z_m|
    [[nodiscard]] double phase_distance(Point2 x) const;
};

double theory_value(const TheoryParams& p, Point2 x);

ImageMap theory_map(const TheoryParams& p, const ImageGrid& grid);

struct CompareReport {
    double max_dev = 0.0;   // max |a - b| / |b|
    double mean_dev = 0.0;
    std::size_t compared_count = 0;
    std::size_t excluded_count = 0;
};

/// Relative deviation of `a` from the reference `b` over grid points whose
/// phase distance to every predicted peak of `p` is at least
/// exclusion_radius. Throws ArgumentError if the grids differ.
CompareReport compare_maps(const ImageMap& a, const ImageMap& b, const TheoryParams& p,
                           double exclusion_radius = 0.5);

}  // namespace crackmusic
