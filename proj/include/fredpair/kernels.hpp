#pragma once

#include "fredpair/backend.hpp"
#include "fredpair/window.hpp"

#include <utility>
#include <vector>

namespace fredpair {

// Band coefficients of a matrix symbol: (degree, channels x channels block).
// Degrees are unique and sorted by the owner; kernels only read them.
using BandTerms = std::vector<std::pair<long, MatrixC>>;

struct UnwrapResult {
    std::vector<double> phase;  // unwrapped argument along the closed grid
    double total = 0.0;         // total change around the loop
};

// Serial reference implementations.
namespace serial {
std::vector<Cplx> detGrid(const BandTerms& terms, int channels, Eigen::Index gridSize);
UnwrapResult unwrapPhase(const std::vector<Cplx>& values);
MatrixC assembleMultiplication(const BandTerms& terms, int channels,
                               const FourierWindow& in, const FourierWindow& out);
MatrixC assembleMultiplicationCyclic(const BandTerms& terms, int channels,
                                     const FourierWindow& window);
double minAbs(const std::vector<Cplx>& values);
} // namespace serial

// OpenMP implementations; bitwise-deterministic and equal to the serial ones.
namespace par {
std::vector<Cplx> detGrid(const BandTerms& terms, int channels, Eigen::Index gridSize);
UnwrapResult unwrapPhase(const std::vector<Cplx>& values);
MatrixC assembleMultiplication(const BandTerms& terms, int channels,
                               const FourierWindow& in, const FourierWindow& out);
MatrixC assembleMultiplicationCyclic(const BandTerms& terms, int channels,
                                     const FourierWindow& window);
double minAbs(const std::vector<Cplx>& values);
} // namespace par

// Default entry points (parallel when built with OpenMP).
std::vector<Cplx> detGrid(const BandTerms& terms, int channels, Eigen::Index gridSize);
UnwrapResult unwrapPhase(const std::vector<Cplx>& values);
MatrixC assembleMultiplication(const BandTerms& terms, int channels,
                               const FourierWindow& in, const FourierWindow& out);
MatrixC assembleMultiplicationCyclic(const BandTerms& terms, int channels,
                                     const FourierWindow& window);
double minAbs(const std::vector<Cplx>& values);

// Applies FREDPAIR_THREADS to the OpenMP runtime; returns the thread count in use.
int applyThreadEnv();

} // namespace fredpair
