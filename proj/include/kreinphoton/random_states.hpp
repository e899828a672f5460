#pragma once

// Seeded generators for the randomized checks. Every draw is sequenced, so a
// given seed yields the same states on every run.

#include <cstdint>
#include <random>
#include <string_view>

#include "kreinphoton/cone_geometry.hpp"
#include "kreinphoton/profiles.hpp"
#include "kreinphoton/transversal.hpp"

namespace kreinphoton {

using Rng = std::mt19937_64;

/// Independent stream for a named consumer of a run seed.
Rng make_rng(std::uint64_t seed, std::string_view stream);

Complex random_complex(Rng& rng);
Vec3 random_direction(Rng& rng);
/// Log-uniform radius in [r_min, r_max], isotropic direction.
ConePoint random_cone_point(Rng& rng, double r_min, double r_max);

/// One of exp_ir, gauss_ir, aniso_ir, dipole_ir with scale in [min_scale, max_scale].
Envelope random_envelope(Rng& rng, double min_scale = 0.6, double max_scale = 1.4);
/// Complex-normal combination of the four eigen-polarizations.
MomentumWaveFunction random_mixture(Rng& rng);
/// f+ and f- each a complex combination of two random envelopes.
TransversalPair random_pair(Rng& rng);

/// rotation(n1, psi) * boost(n2, chi) with |chi| <= max_rapidity.
SL2C random_lorentz(Rng& rng, double max_rapidity = 2.0);
Vec4 random_translation(Rng& rng, double spread = 1.0);

}  // namespace kreinphoton
