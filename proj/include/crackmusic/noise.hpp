#pragma once

#include <cstdint>
#include <limits>

#include "crackmusic/msr.hpp"

namespace crackmusic {

/// Pass as snr_db to leave the data untouched.
inline constexpr double kNoiseFree = std::numeric_limits<double>::infinity();

/// Returns K + W with W i.i.d. circular complex Gaussian, per-entry variance
/// mean(|K_jl|^2) / 10^(snr_db/10).
///
/// Normals come from a Box-Muller transform of std::mt19937_64 draws (53-bit
/// uniforms), consumed row-major, one (re, im) pair per entry, so the result
/// is identical on every platform for a given seed.
MsrMatrix add_awgn(const MsrMatrix& k, double snr_db, std::uint64_t seed);

/// 10 log10(||clean||_F^2 / ||noisy - clean||_F^2).
double measured_snr_db(const CMatrix& clean, const CMatrix& noisy);

}  // namespace crackmusic
