#pragma once

#include "fredpair/correspondence.hpp"
#include "fredpair/errors.hpp"
#include "fredpair/subspace.hpp"
#include "fredpair/window.hpp"

#include <complex>
#include <random>
#include <vector>

namespace fredpair {

enum class CircleRole { incoming, outgoing };

// Boundary circle with local coordinate w = (z - center) / radius; local modes
// are w^k for k in the window (counterclockwise on every circle). `cut` is the
// circle's splitting parameter; whether it is a raw local cut or a surface-level
// lambda/mu depends on the caller (see calibratedDomain).
struct BoundaryCircle {
    Cplx center;
    double radius = 1.0;
    CircleRole role = CircleRole::incoming;
    long cut = 0;
    FourierWindow window;
};

enum class DomainKind { bounded, exterior };

// Genus-0 planar domain: either a disk with smaller disks removed (bounded,
// circles[0] is the outer boundary) or the complement of finitely many disks
// including the point at infinity (exterior).
struct PlanarDomain {
    DomainKind kind = DomainKind::bounded;
    std::vector<BoundaryCircle> circles;
    long taylorDepth = 0;     // 0 = default to the first circle's upper mode bound
    long principalDepth = 0;  // 0 = default likewise
};

// Disjointness and containment checks; throws geometry_error on violation.
void validateGeometry(const PlanarDomain& dom);

// Holomorphic basis function tag: (z - center)^power with power >= 0 (taylor)
// or (z - center)^(-power) with power >= 1 (principal).
struct BasisTerm {
    enum class Kind { taylor, principal };
    Kind kind = Kind::taylor;
    Cplx center;
    long power = 0;
};

// Closed-form local Fourier coefficients of the basis function on the circle,
// clipped to the circle's window. Principal tags expand by a geometric series
// whose form depends on whether the pole sits inside or outside the circle;
// a pole on the circle itself has no convergent expansion.
VectorC expandOnCircle(const BasisTerm& f, const BoundaryCircle& circle);

// The domain's meromorphic basis: bounded kind uses Taylor terms at the outer
// center plus principal parts at every removed disk; exterior kind uses the
// constant function plus principal parts at every removed disk.
std::vector<BasisTerm> domainBasis(const PlanarDomain& dom);

// Correspondence whose relation L spans the boundary values of the basis,
// incoming slots first, then outgoing slots, cuts taken as stored.
Correspondence buildCorrespondence(const PlanarDomain& dom, double tol = kDefaultTol);

struct SurfaceSpec {
    long g = 0;
    std::vector<long> lambdas;
    std::vector<long> mus;
    long l = 0;
};

SurfaceSpec makeSurfaceSpec(long g, std::vector<long> lambdas, std::vector<long> mus);

// 1 - g - sum(lambda) + sum(mu) - l.
long formulaIndex(const SurfaceSpec& spec);

// Cut-offset conventions fixed by the anchor models. The raw local cut of a
// circle is an integer offset minus the surface-level cut; the offset depends
// on the circle's role and on which side of the domain it bounds:
//   outer side:  incoming a,     outgoing a - 1
//   hole side:   incoming b - 1, outgoing b
struct Calibration {
    long a = 0;
    long b = 0;
};

long calibratedCut(const Calibration& cal, CircleRole role, bool outerSide, long surfaceCut);

// Copy of the domain with every stored surface cut replaced by its local cut.
PlanarDomain calibratedDomain(const PlanarDomain& dom, const Calibration& cal);

// Searches |a|, |b| <= 2 for the unique offsets reproducing the formula on the
// three anchor models (concentric annulus, disk cap, exterior cap); throws
// calibration_error unless exactly one candidate survives.
Calibration calibrateConventions(long halfWindow = 24, double tol = kDefaultTol);

struct SurfaceCheckResult {
    long computed = 0;
    long predicted = 0;
    bool match = false;
    PairIndexResult pair;
};

// Treats the stored cuts as surface-level lambdas/mus, maps them through the
// calibration, and compares the computed relation index with the formula.
SurfaceCheckResult verifySurfaceFormula(const PlanarDomain& dom, const Calibration& cal,
                                        double tol = kDefaultTol);

// Model builders. Cuts are stored as given; windows are symmetric half-open
// [-halfWindow, halfWindow). The annulus orients its inner circle opposite to
// the outer one.
PlanarDomain annulusDomain(double innerRadius, double outerRadius, CircleRole outerRole,
                           long outerCut, long innerCut, long halfWindow);
PlanarDomain diskCapDomain(Cplx center, double radius, CircleRole role, long cut,
                           long halfWindow);
PlanarDomain exteriorCapDomain(Cplx center, double radius, CircleRole role, long cut,
                               long halfWindow);

// Sphere chain: exterior cap (0 -> circle), annulus (circle -> circle), disk
// cap (circle -> 0), with interior cuts k1 at radius 2 and k2 at radius 1.
// The termwise indices sum to 1 for every choice of interior cuts.
std::vector<Correspondence> sphereChain(long k1, long k2, long halfWindow,
                                        double tol = kDefaultTol);

// Norm ratios of the paired boundary expansions of z^i: the singular values of
// the compact graph factor of the concentric annulus, (r/R)^i.
std::vector<double> annulusCompactProfile(double innerRadius, double outerRadius,
                                          long count, long halfWindow);

// Random genus-0 configuration with at most maxCircles boundary circles,
// surface cuts in [-2, 2], and disjointness margins wide enough that the
// expansions stay well conditioned.
PlanarDomain randomGenusZeroDomain(std::mt19937& rng, long halfWindow, int maxCircles = 4);

} // namespace fredpair
