#include "fredpair/laurent.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace fredpair;

namespace {

LaurentSymbol mono(long k, Cplx c = Cplx(1.0, 0.0)) {
    return LaurentSymbol::scalarMonomial(k, c);
}

Cplx coeffAt(const LaurentSymbol& s, long deg, int r = 0, int c = 0) {
    for (const auto& [d, block] : s.terms())
        if (d == deg) return block(r, c);
    return Cplx(0.0, 0.0);
}

} // namespace

TEST_CASE("term normalization: sorting, merging, zero dropping") {
    BandTerms raw;
    raw.emplace_back(2, MatrixC::Identity(1, 1));
    raw.emplace_back(-1, 3.0 * MatrixC::Identity(1, 1));
    raw.emplace_back(2, -MatrixC::Identity(1, 1));  // cancels the first
    auto s = LaurentSymbol::fromTerms(1, std::move(raw));
    REQUIRE(s.terms().size() == 1);
    CHECK(s.degMin() == -1);
    CHECK(s.degMax() == -1);
    CHECK(s.bandwidth() == 1);
    CHECK(coeffAt(s, -1) == Cplx(3.0, 0.0));

    CHECK(LaurentSymbol::identity(3).channels() == 3);
    CHECK(mono(0).isZero() == false);
    CHECK(LaurentSymbol::fromTerms(1, {}).isZero());

    BandTerms bad;
    bad.emplace_back(0, MatrixC::Identity(2, 2));
    CHECK_THROWS_AS(LaurentSymbol::fromTerms(1, std::move(bad)), argument_error);
}

TEST_CASE("evaluation and arithmetic") {
    auto s = mono(1) + mono(0, Cplx(2.0, 0.0));  // 2 + z
    double th = 0.7;
    Cplx z = std::polar(1.0, th);
    CHECK(std::abs(s.evaluate(th)(0, 0) - (2.0 + z)) < 1e-14);

    auto p = s * mono(-3);
    CHECK(p.degMin() == -3);
    CHECK(p.degMax() == -2);
    CHECK(std::abs(p.evaluate(th)(0, 0) - (2.0 + z) * std::pow(z, -3)) < 1e-13);

    CHECK(s.scaled(Cplx(0.0, 1.0)).coeffScale() == doctest::Approx(2.0));
    CHECK(s.shiftedBy(5).degMin() == 5);
    CHECK(s.coeffScale() == doctest::Approx(2.0));

    auto d = LaurentSymbol::diagonalMonomials({2, -1});
    CHECK(d.channels() == 2);
    CHECK(d.degMin() == -1);
    CHECK(d.degMax() == 2);
    MatrixC dv = d.evaluate(th);
    CHECK(std::abs(dv(0, 0) - std::pow(z, 2)) < 1e-14);
    CHECK(std::abs(dv(1, 1) - std::pow(z, -1)) < 1e-14);
    CHECK(std::abs(dv(0, 1)) == 0.0);
}

TEST_CASE("winding numbers of known symbols") {
    for (long k : {-5L, -1L, 0L, 1L, 4L}) CHECK(mono(k).windingNumber() == k);

    CHECK((mono(1) + mono(0, Cplx(2, 0))).windingNumber() == 0);  // root at -2, outside
    CHECK((mono(1, Cplx(2, 0)) + mono(0)).windingNumber() == 1);  // root at -1/2, inside
    CHECK(LaurentSymbol::diagonalMonomials({2, -1}).windingNumber() == 1);

    // multiplicativity
    auto a = mono(1) + mono(0, Cplx(2, 0));
    auto b = mono(1, Cplx(2, 0)) + mono(0);
    CHECK((a * b).windingNumber() == 1);
    CHECK((a * b * mono(-4)).windingNumber() == -3);

    auto curve = b.windingCurve();
    CHECK(curve.winding == 1);
    CHECK(curve.det.size() == static_cast<size_t>(curve.gridSize));
    CHECK(curve.phase.size() == static_cast<size_t>(curve.gridSize));
    // unwrapped phase travels 2*pi*winding across one loop
    double span = curve.phase.back() - curve.phase.front();
    CHECK(span == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.01));
}

TEST_CASE("invertibility certificate") {
    auto good = mono(1) + mono(0, Cplx(2, 0));
    CHECK(good.certificateMinAbs() == doctest::Approx(1.0));
    CHECK(good.certified());
    CHECK_NOTHROW(good.requireCertificate());

    auto bad = mono(0) + mono(1, Cplx(-1, 0));  // 1 - z vanishes at theta = 0
    CHECK(bad.certificateMinAbs() < 1e-6);
    CHECK_FALSE(bad.certified());
    CHECK_THROWS_AS(bad.requireCertificate(), certificate_error);

    CHECK_THROWS_AS(LaurentSymbol::fromTerms(1, {}).requireCertificate(), certificate_error);
}

TEST_CASE("truncated inverse") {
    auto s = mono(0) + mono(1, Cplx(0.5, 0.0));  // 1 + z/2
    auto inv = s.inverse(1e-13);
    CHECK(inv.tailNorm <= 1e-13);
    CHECK(std::abs(coeffAt(inv.symbol, 0) - Cplx(1.0, 0.0)) < 1e-13);
    CHECK(std::abs(coeffAt(inv.symbol, 1) - Cplx(-0.5, 0.0)) < 1e-14);
    CHECK(std::abs(coeffAt(inv.symbol, 2) - Cplx(0.25, 0.0)) < 1e-14);

    for (double th : {0.0, 1.1, 2.9}) {
        MatrixC prod = s.evaluate(th) * inv.symbol.evaluate(th);
        CHECK(std::abs(prod(0, 0) - 1.0) < 1e-12);
    }

    // pure monomial inverts to the opposite monomial; the tail is roundoff
    auto invMono = mono(3, Cplx(2, 0)).inverse();
    CHECK(invMono.symbol.degMin() == -3);
    CHECK(invMono.symbol.degMax() == -3);
    CHECK(invMono.tailNorm < 1e-13);

    auto dm = LaurentSymbol::diagonalMonomials({2, -1});
    auto invD = dm.inverse();
    for (double th : {0.3, 2.0}) {
        MatrixC prod = dm.evaluate(th) * invD.symbol.evaluate(th);
        CHECK((prod - MatrixC::Identity(2, 2)).norm() < 1e-12);
    }

    CHECK_THROWS_AS((mono(0) + mono(1, Cplx(-1, 0))).inverse(), certificate_error);
}

TEST_CASE("multiplication matrices, straight and cyclic") {
    FourierWindow w(-2, 2, 1);
    MatrixC m = mono(1).multiplicationMatrix(w, w);
    // output mode k reads input mode k-1; the lowest input falls off the edge
    CHECK(m.sum() == Cplx(3.0, 0.0));
    for (long k = -1; k < 2; ++k) CHECK(m(w.index(k, 0), w.index(k - 1, 0)) == Cplx(1.0, 0.0));

    MatrixC c = mono(1).multiplicationMatrixCyclic(w);
    CHECK(c.sum() == Cplx(4.0, 0.0));
    CHECK(c(w.index(-2, 0), w.index(1, 0)) == Cplx(1.0, 0.0));  // wrap
    CHECK((c * c.adjoint() - MatrixC::Identity(4, 4)).norm() < 1e-14);

    // rectangular: clipped rows only
    FourierWindow out(0, 3, 1);
    MatrixC r = mono(1).multiplicationMatrix(w, out);
    CHECK(r.rows() == 3);
    CHECK(r.cols() == 4);
    CHECK(r.sum() == Cplx(3.0, 0.0));  // inputs -1, 0, 1 all lie inside [-2,2)
    CHECK(r(out.index(2, 0), w.index(1, 0)) == Cplx(1.0, 0.0));
}

TEST_CASE("block decomposition compresses the windowed matrix") {
    SplitSpace s(symmetricWindow(2), 0);
    auto phi = mono(1) + mono(-1, Cplx(0, 1));
    auto b = blockDecompose(phi, s);
    MatrixC whole = phi.multiplicationMatrix(s.window, s.window);
    CHECK((b.reassemble() - whole).norm() == 0.0);
    CHECK(b.alphaBlock.rows() == s.flatDim());
    CHECK(b.deltaBlock.cols() == s.sharpDim());

    // for the shift, the corner blocks carry exactly one entry each
    auto z = blockDecompose(mono(1), s);
    CHECK(z.gammaBlock.norm() == 1.0);  // mode -1 -> 0 crosses the cut
    CHECK(z.betaBlock.norm() == 0.0);

    CHECK_THROWS_AS(blockDecompose(LaurentSymbol::identity(2), s), argument_error);
}

TEST_CASE("commutator with the polarization has the seam-bounded rank") {
    SplitSpace s(symmetricWindow(16), 0);
    for (long k : {-4L, -1L, 1L, 3L}) {
        auto r = commutatorRank(mono(k), s);
        CHECK(r.rank == 2 * std::labs(k));
        CHECK(r.bound == 2 * std::labs(k));
    }
    CHECK(commutatorRank(LaurentSymbol::identity(1), s).rank == 0);

    SplitSpace s2(symmetricWindow(16, 2), 0);
    auto d = commutatorRank(LaurentSymbol::diagonalMonomials({2, -1}), s2);
    CHECK(d.rank == 6);   // per channel: 2|2| + 2|-1|
    CHECK(d.bound == 8);  // 2 * channels * bandwidth
    CHECK(d.rank <= d.bound);

    CHECK_THROWS_AS(commutatorRank(mono(3), SplitSpace(symmetricWindow(2), 0)), window_error);
}

TEST_CASE("exact symbols mirror the float ones") {
    auto e = ExactLaurent::scalarMonomial(2) * ExactLaurent::scalarMonomial(-5);
    CHECK(e.degMin() == -3);
    CHECK(e.degMax() == -3);
    CHECK(e.toFloat().windingNumber() == -3);

    auto d = ExactLaurent::diagonalMonomials({2, -1});
    auto inv = d.inverseDiagonal();
    auto prod = d * inv;
    REQUIRE(prod.terms().size() == 1);
    CHECK(prod.terms()[0].first == 0);
    CHECK(prod.terms()[0].second(0, 0) == GaussRat(1));
    CHECK(prod.terms()[0].second(1, 1) == GaussRat(1));
    CHECK(prod.terms()[0].second(0, 1).isZero());

    FourierWindow w(-3, 3, 2);
    MatrixC mf = d.toFloat().multiplicationMatrix(w, w);
    MatrixC me = d.multiplicationMatrix(w, w).toComplex();
    CHECK((mf - me).norm() == 0.0);

    ExactMatrix off(2, 2);
    off(0, 1) = GaussRat(1);
    off(1, 0) = GaussRat(1);
    auto swap = ExactLaurent::fromTerms(2, {{0, off}});
    CHECK_THROWS_AS(swap.inverseDiagonal(), argument_error);
}
