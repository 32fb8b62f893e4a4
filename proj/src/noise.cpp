#include "crackmusic/noise.hpp"

#include <random>

namespace crackmusic {

namespace {

double unit_open_closed(std::mt19937_64& rng) {
    // (0, 1]
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

MsrMatrix add_awgn(const MsrMatrix& k, double snr_db, std::uint64_t seed) {
    if (k.entries.size() == 0) throw ArgumentError("add_awgn: empty matrix");
    if (std::isnan(snr_db) || snr_db == -kNoiseFree) throw ArgumentError("add_awgn: snr_db must be finite or +inf");
    MsrMatrix out = k;
    if (snr_db == kNoiseFree) return out;

    const double power = k.entries.cwiseAbs2().mean();
    const double variance = power / std::pow(10.0, snr_db / 10.0);
    const double sigma = std::sqrt(0.5 * variance);

    std::mt19937_64 rng(seed);
    for (Eigen::Index j = 0; j < out.entries.rows(); ++j) {
        for (Eigen::Index l = 0; l < out.entries.cols(); ++l) {
            const double radius = std::sqrt(-2.0 * std::log(unit_open_closed(rng)));
            const double phase = kTwoPi * unit_open_closed(rng);
            out.entries(j, l) += Complex{sigma * radius * std::cos(phase), sigma * radius * std::sin(phase)};
        }
    }
    out.snr_db = snr_db;
    out.seed = seed;
    return out;
}

double measured_snr_db(const CMatrix& clean, const CMatrix& noisy) {
    if (clean.rows() != noisy.rows() || clean.cols() != noisy.cols()) {
        throw ArgumentError("measured_snr_db: shape mismatch");
    }
    return 10.0 * std::log10(clean.squaredNorm() / (noisy - clean).squaredNorm());
}

}  // namespace crackmusic
