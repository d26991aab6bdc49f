#pragma once

#include "shtuka/anderson.hpp"

#include <random>

namespace shtuka {

struct AcceptanceResult {
    std::size_t index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// The full acceptance battery (criteria 1-13), deterministic given the seed.
std::vector<AcceptanceResult> run_acceptance_suite(std::uint64_t seed);
AcceptanceResult run_acceptance_criterion(std::size_t index, std::uint64_t seed);

// randomized generators shared by the suites
namespace gen {

using Rng = std::mt19937_64;

AlgElem random_element(const FdAlgebra& A, Rng& rng);
AlgElem random_unit(const FdAlgebra& A, Rng& rng);
std::vector<AlgVec> random_matrix(const FdAlgebra& A, std::size_t r, Rng& rng);
std::vector<AlgVec> random_invertible(const FdAlgebra& A, std::size_t r, Rng& rng);
ZMatrix random_invertible_series(const AlgebraPtr& A, std::size_t r, std::size_t prec, Rng& rng);

// U * diag((z-zeta)^{a_i}) * W with invertible U, W: an effective local
// shtuka whose cokernel is killed by (z-zeta)^{max a_i}
LocalShtuka random_effective(const AlgebraPtr& A, std::size_t r, std::size_t prec,
                             std::size_t d_max, Rng& rng);

// base rings used across the randomized suites
std::vector<AlgebraPtr> ring_catalog(std::uint32_t q, bool zeta_zero_only, std::size_t max_dim);

} // namespace gen

} // namespace shtuka
