#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "crackmusic/scene.hpp"
#include "crackmusic/types.hpp"

namespace crackmusic {

enum class Provenance { asymptotic, bie, file };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& text);

/// Multistatic response matrix K[j, l] = u_inf(obs_j, inc_l).
///
/// With `backscatter_convention` set the observation directions are
/// obs_j = -theta_j for the incidence directions theta_j of `directions`.
struct MsrMatrix {
    CMatrix entries;
    DirectionSet directions;
    double wavenumber = 0.0;
    bool backscatter_convention = true;
    Provenance provenance = Provenance::asymptotic;

    // bookkeeping carried to the sidecar
    std::optional<double> crack_scale;      // h of the asymptotic model
    std::optional<int> quadrature_nodes;    // converged node count of the BIE solver
    std::optional<double> reciprocity_audit;
    std::optional<double> snr_db;
    std::optional<std::uint64_t> seed;

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
    [[nodiscard]] Point2 observation(std::size_t j) const {
        const Point2 t = directions.direction(j);
        return backscatter_convention ? -1.0 * t : t;
    }
    [[nodiscard]] Point2 incidence(std::size_t l) const { return directions.direction(l); }
};

/// ||K - K^T||_F / ||K||_F (0 for the zero matrix).
double symmetry_defect(const CMatrix& k);

}  // namespace crackmusic
