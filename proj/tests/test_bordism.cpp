#include "fredpair/correspondence.hpp"

#include <doctest.h>

using namespace fredpair;

namespace {

constexpr double kTol = 1e-9;

SplitSpace half(long n, long cut = 0) { return SplitSpace(symmetricWindow(n), cut); }

// graph of the identity map H -> H as a relation (orthonormalized frame)
Correspondence identityGraph(const SplitSpace& s) {
    MatrixC gens(2 * s.dim(), s.dim());
    gens.topRows(s.dim()).setIdentity();
    gens.bottomRows(s.dim()).setIdentity();
    return makeCorrespondence(ProductSpace{s}, ProductSpace{s}, span<FloatBackend>(gens, kTol));
}

Subspace<FloatBackend> frameSpan(const MatrixC& cols) { return span<FloatBackend>(cols, kTol); }

} // namespace

TEST_CASE("product space bookkeeping") {
    SplitSpace a = half(2, 0);   // dim 4, flat 2
    SplitSpace b = half(3, -1);  // dim 6, flat 2
    ProductSpace p{a, b};
    CHECK(p.dim() == 10);
    CHECK(p.flatDim() == 4);
    CHECK(p.slotOffset(0) == 0);
    CHECK(p.slotOffset(1) == 4);

    MatrixC ff = p.flatFrame();
    CHECK(ff.cols() == 4);
    // second slot's flat directions start at the slot offset
    CHECK(ff(4, 2) == Cplx(1.0, 0.0));

    ProductSpace zero;
    CHECK(zero.dim() == 0);
    CHECK(zero.flatFrame().cols() == 0);

    CHECK((ProductSpace{a, b} == ProductSpace{a, b}));
    CHECK_FALSE((ProductSpace{a} == ProductSpace{b}));
}

TEST_CASE("correspondence validation") {
    SplitSpace s = half(2);
    CHECK_THROWS_AS(
        makeCorrespondence(ProductSpace{s}, ProductSpace{s}, zeroSubspace<FloatBackend>(3)),
        argument_error);
    auto c = identityGraph(s);
    CHECK(c.sourceDim() == 4);
    CHECK(c.targetDim() == 4);
    CHECK(c.l.dim() == 4);
}

TEST_CASE("identity relation has index zero and composes cleanly") {
    SplitSpace s = half(3, 1);
    auto c = identityGraph(s);
    CHECK(bordismIndex(c, kTol).index == 0);

    auto rep = composeWithDefect(c, c, kTol);
    CHECK(rep.defect == 0);
    CHECK(rep.kappaLeft == 0);
    CHECK(rep.kappaRight == 0);
    CHECK(rep.kappaComposed == 0);
    CHECK(rep.composed.l.dim() == s.dim());

    // composing with a cut mismatch is refused
    MatrixC ig(2 * s.dim(), s.dim());
    ig.topRows(s.dim()).setIdentity();
    ig.bottomRows(s.dim()).setIdentity();
    auto twisted = makeCorrespondence(ProductSpace{twistCut(s, 1)}, ProductSpace{s},
                                      span<FloatBackend>(ig, kTol));
    CHECK_THROWS_AS(compose(c, twisted, kTol), argument_error);
}

TEST_CASE("twisting a cut shifts the relation index") {
    // raising the target cut by k shrinks the sharp reference by k directions,
    // so the identity relation between differently-cut copies has index -k
    // (dim L + dim ref - ambient, no transversality involved)
    SplitSpace s = half(3, 0);
    for (long k : {-2L, 1L}) {
        MatrixC ig(2 * s.dim(), s.dim());
        ig.topRows(s.dim()).setIdentity();
        ig.bottomRows(s.dim()).setIdentity();
        auto c = makeCorrespondence(ProductSpace{s}, ProductSpace{twistCut(s, k)},
                                    span<FloatBackend>(ig, kTol));
        CHECK(bordismIndex(c, kTol).index == -k);
    }
}

TEST_CASE("image of a subspace under a relation") {
    SplitSpace s = half(2);
    auto c = identityGraph(s);
    MatrixC gens = MatrixC::Zero(s.dim(), 2);
    gens(0, 0) = 1.0;
    gens(2, 1) = 1.0;
    auto u = frameSpan(gens);
    auto img = imageOfSubspace(c, u, kTol);
    CHECK(img.dim() == 2);
    auto p = pairIndex(img, u, kTol);
    CHECK(p.alpha == 2);  // image equals the input space

    // a relation that forgets everything: L = H x {0}
    MatrixC lg = MatrixC::Zero(2 * s.dim(), s.dim());
    lg.topRows(s.dim()).setIdentity();
    auto forget = makeCorrespondence(ProductSpace{s}, ProductSpace{s}, frameSpan(lg));
    CHECK(imageOfSubspace(forget, u, kTol).dim() == 0);
}

TEST_CASE("chains from the zero space to the zero space") {
    SplitSpace s = half(2, 0);

    // L1 = flat half as a relation 0 -> H, L2 = sharp half as H -> 0
    auto c1 = makeCorrespondence(ProductSpace{}, ProductSpace{s},
                                 frameSpan(flatFrame(s)));
    auto capSharp = makeCorrespondence(ProductSpace{s}, ProductSpace{},
                                       frameSpan(sharpFrame(s)));
    auto capFlat = makeCorrespondence(ProductSpace{s}, ProductSpace{},
                                      frameSpan(flatFrame(s)));

    std::vector<Correspondence> chainA{c1, capSharp};
    auto transversal = chainIndex(chainA, kTol);
    CHECK(transversal.terms.size() == 2);
    CHECK(transversal.total == 0);
    CHECK(transversal.composedIndex == 0);
    CHECK(transversal.defectTotal == 0);
    CHECK(transversal.finalPair.alpha == 0);
    CHECK(transversal.witness.cols() == 0);

    // maximal overlap in the middle: the witness space is the whole flat half
    std::vector<Correspondence> chainB{c1, capFlat};
    auto overlapping = chainIndex(chainB, kTol);
    CHECK(overlapping.total == 0);
    CHECK(overlapping.finalPair.alpha == s.flatDim());
    CHECK(overlapping.witness.cols() == s.flatDim());

    std::vector<Correspondence> empty;
    CHECK_THROWS_AS(chainIndex(empty, kTol), chain_error);
    std::vector<Correspondence> open{identityGraph(s)};
    CHECK_THROWS_AS(chainIndex(open, kTol), chain_error);
    auto other = makeCorrespondence(ProductSpace{half(3)}, ProductSpace{},
                                    frameSpan(MatrixC::Identity(6, 6)));
    std::vector<Correspondence> mismatched{c1, other};
    CHECK_THROWS_AS(chainIndex(mismatched, kTol), chain_error);

    // composing through the mismatched middle is what the glue check guards
    CHECK(bordismIndex(c1, kTol).index + bordismIndex(capSharp, kTol).index == 0);
}

TEST_CASE("index reduction hypotheses hold for the identity graph") {
    SplitSpace s = half(3, -1);
    auto r = indexReductionCheck(identityGraph(s), kTol);
    CHECK(r.injectiveOnFlat);
    CHECK(r.domainCondition);
    CHECK(r.indicesEqual);
    CHECK(r.fullPair.index == 0);
    CHECK(r.reducedPair.index == 0);
}

TEST_CASE("restricted-bordism screen") {
    SplitSpace s = half(2, 0);
    // L = sharp(source) x flat(target): the main projection is the identity on
    // L and the complementary one vanishes, the cleanest restricted case
    Eigen::Index d = s.dim();
    MatrixC gens = MatrixC::Zero(2 * d, s.sharpDim() + s.flatDim());
    gens.block(0, 0, d, s.sharpDim()) = sharpFrame(s);
    gens.block(d, s.sharpDim(), d, s.flatDim()) = flatFrame(s);
    auto c = makeCorrespondence(ProductSpace{s}, ProductSpace{s}, frameSpan(gens));
    auto r = restrictedBordismCheck(c, kTol);
    CHECK(r.isoDefect == 0);
    CHECK(r.compactRank == 0);
    CHECK(r.restricted);

    // the identity graph projects fully onto both coordinate pairs: the
    // complementary projection is not compact relative to L
    auto rid = restrictedBordismCheck(identityGraph(s), kTol);
    CHECK(rid.isoDefect == 0);
    CHECK(rid.compactRank == s.dim());
    CHECK_FALSE(rid.restricted);
}

TEST_CASE("graph-pair route reproduces the winding") {
    for (long k : {-2L, 0L, 3L}) {
        auto r = graphPairIndex(LaurentSymbol::scalarMonomial(k), 16);
        CHECK(r.pair.index == k);
        CHECK_FALSE(r.pair.illConditioned);
    }

    auto affine = LaurentSymbol::scalarMonomial(1, Cplx(2, 0)) + LaurentSymbol::scalarMonomial(0);
    CHECK(graphPairIndex(affine, 16).pair.index == affine.windingNumber());

    auto outside = LaurentSymbol::scalarMonomial(1) + LaurentSymbol::scalarMonomial(0, Cplx(2, 0));
    CHECK(graphPairIndex(outside, 16).pair.index == 0);

    CHECK(graphPairIndexExact(ExactLaurent::scalarMonomial(2), 12).pair.index == 2);
    CHECK(graphPairIndexExact(ExactLaurent::diagonalMonomials({1, -3}), 12).pair.index == -2);
}
