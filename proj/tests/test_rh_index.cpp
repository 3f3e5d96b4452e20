#include "fredpair/rh_index.hpp"

#include <doctest.h>

#include <cmath>

using namespace fredpair;

namespace {

LaurentSymbol mono(long k, Cplx c = Cplx(1.0, 0.0)) {
    return LaurentSymbol::scalarMonomial(k, c);
}

} // namespace

TEST_CASE("windowed operator of the identity symbol") {
    SplitSpace s(symmetricWindow(4), 0);
    MatrixC l = lPhiOperator(LaurentSymbol::identity(1), s);
    CHECK((l - MatrixC::Identity(s.dim(), s.dim())).norm() == 0.0);
}

TEST_CASE("subspace route on monomials: index and dimension count") {
    const long n = 16;
    for (long k : {-3L, 0L, 2L}) {
        auto r = kappaViaSubspace(mono(k), n);
        CHECK(r.pair.index == k);
        // generators reach k - n - |k| below the cut; the window clips them to
        // -n, so the span holds the modes [-n, k), which is n + k directions
        CHECK(r.subspaceDim == n + k);
        CHECK(r.halfWindow == n);
        CHECK_FALSE(r.pair.illConditioned);
    }

    auto rev = kappaViaSubspaceReversed(mono(2), n);
    CHECK(rev.pair.index == -2);
    CHECK(kappaViaSubspaceReversed(mono(-3), n).pair.index == 3);

    CHECK_THROWS_AS(kappaViaSubspace(mono(9), 8), window_error);
}

TEST_CASE("subspace route on invertible non-monomials") {
    // 1/(2+z) has coefficient tail 2^{-j}, so the spurious span direction sits
    // at relative scale 2^{-N}; the window must push that below tol
    CHECK(kappaViaSubspace(mono(1) + mono(0, Cplx(2, 0)), 32).pair.index == 0);
    CHECK(kappaViaSubspace(mono(1, Cplx(2, 0)) + mono(0), 16).pair.index == 1);
    CHECK(kappaViaSubspace(LaurentSymbol::diagonalMonomials({2, -1}), 16).pair.index == 1);
}

TEST_CASE("exact subspace route") {
    CHECK(kappaViaSubspaceExact(ExactLaurent::scalarMonomial(2), 12).pair.index == 2);
    CHECK(kappaViaSubspaceExact(ExactLaurent::diagonalMonomials({1, -3}), 12).pair.index == -2);
}

TEST_CASE("trace route recovers the winding as a near-integer") {
    for (long k : {-3L, 1L, 0L}) {
        auto t = kappaViaTrace(mono(k), 16);
        CHECK(t.rounded == k);
        CHECK(t.converged);
        // conjugating the flat projector by a monomial moves the cut exactly
        CHECK(t.raw == doctest::Approx(static_cast<double>(k)).epsilon(1e-10));
    }

    auto t = kappaViaTrace(LaurentSymbol::diagonalMonomials({2, -1}), 20);
    CHECK(t.rounded == 1);
    CHECK(t.converged);

    // reusing a precomputed inverse gives the same answer
    auto phi = mono(1, Cplx(2, 0)) + mono(0);
    auto inv = phi.inverse();
    auto t1 = kappaViaTrace(phi, 16);
    auto t2 = kappaViaTrace(phi, 16, &inv);
    CHECK(t1.rounded == 1);
    CHECK(t2.rounded == 1);
    CHECK(t1.raw == doctest::Approx(t2.raw).epsilon(1e-12));
}

TEST_CASE("all routes agree and stabilize") {
    auto rep = kappa(mono(3), 16);
    CHECK(rep.value == 3);
    CHECK(rep.stabilized);
    CHECK(rep.windingRoute == 3);
    CHECK(rep.subspaceAtN.pair.index == 3);
    CHECK(rep.subspaceAt2N.pair.index == 3);
    CHECK(rep.traceAtN.rounded == 3);
    CHECK(rep.traceAt2N.rounded == 3);
    CHECK(rep.windowUsed == 16);
    CHECK_FALSE(rep.describe().empty());

    CHECK(kappa(mono(1) + mono(0, Cplx(2, 0)), 32).value == 0);
    CHECK(kappa(mono(1, Cplx(2, 0)) + mono(0), 16).value == 1);
}

TEST_CASE("route disagreement is reported, not silently rounded") {
    // a tolerance of 1 wipes out every span direction, so the subspace route
    // collapses while the winding stays put
    auto rep = kappaReport(mono(1), 16, 1.0);
    CHECK_FALSE(rep.stabilized);
    CHECK(rep.windingRoute == 1);
    CHECK_THROWS_AS(kappa(mono(1), 16, 1.0), route_disagreement);

    // sanity: the non-throwing variant matches the throwing one when clean
    auto clean = kappaReport(mono(-2), 16);
    CHECK(clean.stabilized);
    CHECK(clean.value == -2);
}

TEST_CASE("product law correction term") {
    SplitSpace s(symmetricWindow(16), 0);
    auto phi = mono(1) + mono(0, Cplx(2, 0));
    auto psi = mono(-1, Cplx(0.5, 0)) + mono(0);

    CHECK(defectResidual(phi, psi, s) < 1e-12);
    CHECK(defectResidual(psi, phi, s) < 1e-12);
    CHECK(defectResidual(phi, phi, s) < 1e-12);

    // the correction is nonzero only when the second factor crosses the cut
    // upward: it ends in [M_psi, P] P, which dies for non-positive degrees
    CHECK(almostHomomorphismDefect(phi, psi, s).norm() == 0.0);
    CHECK(almostHomomorphismDefect(psi, phi, s).norm() > 1e-8);

    CHECK_THROWS_AS(defectResidual(mono(5), mono(5), SplitSpace(symmetricWindow(8), 0)),
                    window_error);
}

TEST_CASE("transition automorphism onto a shifted cut") {
    SplitSpace s(symmetricWindow(8), 0);
    for (long shift : {0L, 3L}) {
        SplitSpace shifted = twistCut(s, shift);
        MatrixC gen = MatrixC::Zero(s.dim(), shifted.flatDim());
        gen.topRows(shifted.flatDim()).setIdentity();
        auto m = span<FloatBackend>(gen, kDefaultTol);

        auto tr = transitionAutomorphism(m, s);
        CHECK(tr.shift == shift);
        CHECK(tr.smallestSingular > 0.05);
        CHECK(tr.containment < 1e-8);

        // the image of the flat half sits inside m
        MatrixC image = tr.op * flatFrame(s);
        MatrixC res = image - m.frame * (m.frame.adjoint() * image);
        CHECK(res.norm() < 1e-8);
    }

    // a downward twist cannot be aligned: re-shifting its flat half loses the
    // modes clipped at the window bottom, so the projector gap hits 1
    SplitSpace down = twistCut(s, -2);
    MatrixC gen = MatrixC::Zero(s.dim(), down.flatDim());
    gen.topRows(down.flatDim()).setIdentity();
    auto m = span<FloatBackend>(gen, kDefaultTol);
    CHECK_THROWS_AS(transitionAutomorphism(m, s), no_transition_error);
}
