#pragma once

#include "fredpair/laurent.hpp"
#include "fredpair/subspace.hpp"
#include "fredpair/window.hpp"

#include <string>

namespace fredpair {

constexpr long kDefaultHalfWindow = 64;

// Windowed phi * P_flat + P_sharp (multiplication edge-clipped on s.window).
MatrixC lPhiOperator(const LaurentSymbol& phi, const SplitSpace& s);

// Truncated-subspace route. Generators phi * z^i e_c for i in [-N-d, 0) are
// expanded by exact band arithmetic, then projected to the ambient window
// [-N, N); the result is the pair index of their span against modes [0, N).
// The generator overhang below the window is what lets the span's tolerance
// dimension pick up the winding; see the module tests for the mode counts.
struct SubspaceRoute {
    PairIndexResult pair;
    RankInfo span;              // conditioning of the generator span
    Eigen::Index subspaceDim = 0;
    long halfWindow = 0;
};

SubspaceRoute kappaViaSubspace(const LaurentSymbol& phi, long halfWindow,
                               double tol = kDefaultTol);

// Same protocol with the roles of the two halves swapped (generators overhang
// above, reference subspace is the flat half). Equals minus the direct route.
SubspaceRoute kappaViaSubspaceReversed(const LaurentSymbol& phi, long halfWindow,
                                       double tol = kDefaultTol);

// Exact-arithmetic subspace route for the rational backend.
SubspaceRoute kappaViaSubspaceExact(const ExactLaurent& phi, long halfWindow);

// Relative trace of phi P_flat phi^{-1} - P_flat. The operator is assembled on
// a window padded by the bandwidths of phi and its truncated inverse, and the
// trace runs over the unpadded central modes only; without the padding the
// clipped conjugation is traceless.
struct TraceRoute {
    double raw = 0.0;
    long rounded = 0;
    bool converged = false;  // |raw - rounded| <= 0.1
    long halfWindow = 0;
};

TraceRoute kappaViaTrace(const LaurentSymbol& phi, long halfWindow,
                         const LaurentSymbol::Inverse* inverse = nullptr);

struct IndexReport {
    long windingRoute = 0;
    SubspaceRoute subspaceAtN;
    SubspaceRoute subspaceAt2N;
    TraceRoute traceAtN;
    TraceRoute traceAt2N;
    long windowUsed = 0;
    double tol = kDefaultTol;
    bool stabilized = false;
    long value = 0;

    std::string describe() const;
};

// All three routes at N and 2N; the stabilized flag records whether they
// agree. Never throws on disagreement, so callers can inspect the report.
IndexReport kappaReport(const LaurentSymbol& phi, long halfWindow = kDefaultHalfWindow,
                        double tol = kDefaultTol);

// Same, but throws route_disagreement (with the full report text) unless
// every route stabilizes to the same integer.
IndexReport kappa(const LaurentSymbol& phi, long halfWindow = kDefaultHalfWindow,
                  double tol = kDefaultTol);

// T(phi, psi) = 1/4 (1 - phi)(psi S - S psi)(1 - S) on s.window.
// Corrects the product law: L_{phi psi} = L_phi L_psi + T away from the edges.
MatrixC almostHomomorphismDefect(const LaurentSymbol& phi, const LaurentSymbol& psi,
                                 const SplitSpace& s);

// Max column norm of L_{phi psi} - L_phi L_psi - T over columns at distance
// >= d_phi + d_psi from both window edges.
double defectResidual(const LaurentSymbol& phi, const LaurentSymbol& psi, const SplitSpace& s);

// Invertible window operator carrying the flat half onto m (up to tol), built
// as a cut shift composed with the two-projector interpolation. The shift part
// is periodic on the window so that invertibility survives truncation.
struct TransitionResult {
    MatrixC op;
    long shift = 0;               // rounded trace of P_m - P_flat
    double smallestSingular = 0.0;
    double containment = 0.0;     // ||(1 - P_m) op P_flat||
};

TransitionResult transitionAutomorphism(const Subspace<FloatBackend>& m, const SplitSpace& s,
                                        double tol = kDefaultTol);

} // namespace fredpair
