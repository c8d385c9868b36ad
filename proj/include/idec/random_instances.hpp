#pragma once

#include <random>

#include "idec/core_state.hpp"

namespace idec {

/// G G^dagger / Tr with G complex Ginibre: full rank, generic coherences.
DensityMatrix random_density(int dim, std::mt19937_64& rng);

/// Random pure state (rank one), the hardest case for positivity.
DensityMatrix random_pure_density(int dim, std::mt19937_64& rng);

/// (G + G^dagger) / 2 with standard complex normal entries.
Observable random_observable(int dim, std::mt19937_64& rng);

/// Energies uniform in [-scale, scale], unsorted.
EnergySpectrum random_spectrum(int dim, std::mt19937_64& rng, double scale = 1.0,
                               double hbar = 1.0);

}  // namespace idec
