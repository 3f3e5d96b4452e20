#pragma once

#include "fredpair/laurent.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fredpair {

constexpr std::uint32_t kCorpusSeed = 20240817u;

// Test symbol with its winding known independently: monomial exponents are
// read off directly, and affine/product determinants factor into linear and
// quadratic pieces whose roots are counted against the unit circle.
struct CorpusEntry {
    std::string name;
    LaurentSymbol symbol;
    long expectedIndex = 0;
};

// The standard symbol family: scalar monomials z^k for |k| <= 8, diagonal
// monomials up to 4 channels, seeded invertible 2x2 affine symbols, and seeded
// products of affine factors (optionally shifted to the negative side). Every
// random entry is coefficient-normalized and resampled until its determinant
// stays at least 5e-2 in modulus on the unit circle, which keeps the winding
// stable under 1e-3 relative coefficient perturbations.
std::vector<CorpusEntry> standardCorpus(std::uint32_t seed = kCorpusSeed);

// Adds relAmount * |block| * (unit-Frobenius Gaussian noise) to every
// coefficient block.
LaurentSymbol perturbSymbol(const LaurentSymbol& s, double relAmount, std::mt19937& rng);

} // namespace fredpair
