#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "crackmusic/msr.hpp"
#include "crackmusic/scene.hpp"

namespace crackmusic {

/// Singular spectrum of an MSR matrix plus the chosen signal dimension.
struct SignalSpace {
    Eigen::VectorXd singular_values;  // descending
    CMatrix left_vectors;             // columns U_1..U_N
    CMatrix right_vectors;            // columns V_1..V_N
    int dim = -1;                     // M; -1 until selected
    bool ambiguous = false;           // set when the selection rule found no clear gap

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(singular_values.size()); }
    [[nodiscard]] bool has_dim() const { return dim >= 0; }
};

/// Full SVD of K. Throws ArgumentError for non-square input, NumericError if
/// the decomposition fails.
SignalSpace svd_msr(const MsrMatrix& k);

struct SignalDimMethod {
    enum class Kind { manual, log_gap, threshold };
    Kind kind = Kind::log_gap;
    int manual_dim = 0;
    double threshold = 0.0;
    int prefix_bound = 0;  // log_gap: largest M considered; 0 means ceil(N/2)

    static SignalDimMethod manual(int m) { return {Kind::manual, m, 0.0, 0}; }
    static SignalDimMethod log_gap(int bound = 0) { return {Kind::log_gap, 0, 0.0, bound}; }
    static SignalDimMethod threshold_at(double tau) { return {Kind::threshold, 0, tau, 0}; }

    /// "manual:M", "log_gap", "log_gap:B" or "threshold:T". Throws ArgumentError.
    static SignalDimMethod parse(const std::string& text);
    [[nodiscard]] std::string to_string() const;
};

/// Sets M on a copy of `space`.
///   manual:    M as given (ArgumentError if M > N or M < 0)
///   threshold: number of sigma_m / sigma_1 >= tau
///   log_gap:   argmax of log(sigma_m / sigma_{m+1}) over m <= bound. Values
///              below 1e-12 sigma_1 count as zero, so an exactly rank-r
///              spectrum gives M = r. A flat spectrum gives M = bound and sets
///              `ambiguous`.
SignalSpace select_signal_dim(const SignalSpace& space, const SignalDimMethod& method);

/// (I - sum_{m <= M} U_m U_m^*) v.
CVector noise_projector_apply(const SignalSpace& space, const CVector& v);

/// Dense N x N noise projector, mostly for checks.
CMatrix noise_projector(const SignalSpace& space);

struct TestVector {
    CVector entries;
    double eta = 0.0;
    Point2 point;
};

/// Entries exp(i eta theta_n . x) / sqrt(N): unit Euclidean norm.
TestVector test_vector(Point2 x, double eta, const DirectionSet& dirs);

inline constexpr double kProjectionFloor = 1e-12;

/// 1 / max(|P_noise f(x; eta)|, 1e-12).
double imaging_value(const SignalSpace& space, Point2 x, double eta, const DirectionSet& dirs);

struct ImageGrid {
    double x0 = -2.0, x1 = 2.0, y0 = -2.0, y1 = 2.0, step = 0.01;

    [[nodiscard]] std::size_t nx() const;
    [[nodiscard]] std::size_t ny() const;
    [[nodiscard]] double x(std::size_t ix) const { return x0 + step * static_cast<double>(ix); }
    [[nodiscard]] double y(std::size_t iy) const { return y0 + step * static_cast<double>(iy); }
    [[nodiscard]] Point2 point(std::size_t ix, std::size_t iy) const { return {x(ix), y(iy)}; }
    /// Throws ArgumentError for step <= 0 or empty / non-finite ranges.
    void validate() const;

    /// "x0,x1,y0,y1,step"
    static ImageGrid parse(const std::string& text);

    friend bool operator==(const ImageGrid&, const ImageGrid&) = default;
};

/// Scalar field on an ImageGrid, stored row-major with y as the slow index.
struct ImageMap {
    ImageGrid grid;
    std::vector<double> values;
    double eta = 0.0;
    std::string provenance;
    int signal_dim = -1;

    [[nodiscard]] double at(std::size_t ix, std::size_t iy) const { return values[iy * grid.nx() + ix]; }
    double& at(std::size_t ix, std::size_t iy) { return values[iy * grid.nx() + ix]; }
};

ImageMap imaging_map(const SignalSpace& space, const ImageGrid& grid, double eta, const DirectionSet& dirs);

struct Peak {
    Point2 location;
    double value = 0.0;
    std::size_t ix = 0, iy = 0;
};

struct PeakSearch {
    std::vector<Peak> peaks;  // descending by value
    bool incomplete = false;  // fewer strict maxima than requested
};

/// Interior grid points strictly greater than all 8 neighbours, largest first.
/// Locations are refined inside the cell by a separable quadratic fit of
/// log(value).
PeakSearch find_peaks(const ImageMap& map, std::size_t count);

}  // namespace crackmusic
