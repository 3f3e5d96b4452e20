#include "fredpair/correspondence.hpp"

#include <cmath>

namespace fredpair {

Eigen::Index ProductSpace::dim() const {
    Eigen::Index d = 0;
    for (const auto& s : slots) d += s.dim();
    return d;
}

Eigen::Index ProductSpace::flatDim() const {
    Eigen::Index d = 0;
    for (const auto& s : slots) d += s.flatDim();
    return d;
}

Eigen::Index ProductSpace::slotOffset(size_t i) const {
    Eigen::Index off = 0;
    for (size_t k = 0; k < i; ++k) off += slots[k].dim();
    return off;
}

MatrixC ProductSpace::flatFrame() const {
    MatrixC f = MatrixC::Zero(dim(), flatDim());
    Eigen::Index col = 0;
    for (size_t i = 0; i < slots.size(); ++i) {
        Eigen::Index off = slotOffset(i);
        for (Eigen::Index j = 0; j < slots[i].flatDim(); ++j) f(off + j, col++) = 1.0;
    }
    return f;
}

MatrixC ProductSpace::sharpFrame() const {
    MatrixC f = MatrixC::Zero(dim(), dim() - flatDim());
    Eigen::Index col = 0;
    for (size_t i = 0; i < slots.size(); ++i) {
        Eigen::Index off = slotOffset(i) + slots[i].flatDim();
        for (Eigen::Index j = 0; j < slots[i].sharpDim(); ++j) f(off + j, col++) = 1.0;
    }
    return f;
}

Correspondence makeCorrespondence(ProductSpace source, ProductSpace target,
                                  Subspace<FloatBackend> l) {
    if (l.ambient != source.dim() + target.dim())
        throw argument_error("correspondence: subspace ambient is not source + target");
    return Correspondence{std::move(source), std::move(target), std::move(l)};
}

PairIndexResult bordismIndex(const Correspondence& c, double tol) {
    Eigen::Index srcDim = c.sourceDim();
    Eigen::Index tgtDim = c.targetDim();
    MatrixC srcFlat = c.source.flatFrame();
    MatrixC tgtSharp = c.target.sharpFrame();
    Subspace<FloatBackend> ref;
    ref.ambient = srcDim + tgtDim;
    ref.frame = MatrixC::Zero(srcDim + tgtDim, srcFlat.cols() + tgtSharp.cols());
    ref.frame.topLeftCorner(srcDim, srcFlat.cols()) = srcFlat;
    ref.frame.bottomRightCorner(tgtDim, tgtSharp.cols()) = tgtSharp;
    return pairIndex<FloatBackend>(c.l, ref, tol);
}

Correspondence compose(const Correspondence& c1, const Correspondence& c2, double tol) {
    if (!(c1.target == c2.source))
        throw argument_error("compose: middle spaces disagree (window or cut)");
    Eigen::Index srcDim = c1.sourceDim();
    Eigen::Index midDim = c1.targetDim();
    Eigen::Index tgtDim = c2.targetDim();
    MatrixC a = c1.l.frame.bottomRows(midDim);  // middle part of L1
    MatrixC b = c2.l.frame.topRows(midDim);     // middle part of L2
    MatrixC mismatch(midDim, c1.l.dim() + c2.l.dim());
    mismatch << a, -b;
    MatrixC ker = FloatBackend::nullspace(mismatch, tol);
    if (srcDim + tgtDim == 0) {
        // zero-to-zero relation: only the zero subspace lives here
        return Correspondence{c1.source, c2.target, zeroSubspace<FloatBackend>(0, tol)};
    }
    MatrixC gens(srcDim + tgtDim, ker.cols());
    gens.topRows(srcDim) = c1.l.frame.topRows(srcDim) * ker.topRows(c1.l.dim());
    gens.bottomRows(tgtDim) = c2.l.frame.bottomRows(tgtDim) * ker.bottomRows(c2.l.dim());
    return Correspondence{c1.source, c2.target, span<FloatBackend>(gens, tol)};
}

CompositionReport composeWithDefect(const Correspondence& c1, const Correspondence& c2,
                                    double tol) {
    CompositionReport r;
    r.leftPair = bordismIndex(c1, tol);
    r.rightPair = bordismIndex(c2, tol);
    r.composed = compose(c1, c2, tol);
    r.middleKernel = r.composed.l.spanInfo;
    r.composedPair = bordismIndex(r.composed, tol);
    r.kappaLeft = r.leftPair.index;
    r.kappaRight = r.rightPair.index;
    r.kappaComposed = r.composedPair.index;
    r.defect = r.kappaLeft + r.kappaRight - r.kappaComposed;
    return r;
}

Subspace<FloatBackend> imageOfSubspace(const Correspondence& c, const Subspace<FloatBackend>& u,
                                       double tol) {
    Eigen::Index srcDim = c.sourceDim();
    Eigen::Index tgtDim = c.targetDim();
    if (u.ambient != srcDim) throw argument_error("imageOfSubspace: u not in the source space");
    MatrixC srcPart = c.l.frame.topRows(srcDim);
    MatrixC tgtPart = c.l.frame.bottomRows(tgtDim);
    MatrixC offU = srcPart - u.frame * (u.frame.adjoint() * srcPart);
    MatrixC ker = FloatBackend::nullspace(offU, tol);
    return span<FloatBackend>(tgtPart * ker, tol);
}

ReductionCheck indexReductionCheck(const Correspondence& c, double tol) {
    Eigen::Index srcDim = c.sourceDim();
    Eigen::Index tgtDim = c.targetDim();
    ReductionCheck r;

    MatrixC srcFlat = c.source.flatFrame();
    Subspace<FloatBackend> flatLift;
    flatLift.ambient = srcDim + tgtDim;
    flatLift.frame = MatrixC::Zero(srcDim + tgtDim, srcFlat.cols());
    flatLift.frame.topRows(srcDim) = srcFlat;
    // Relation kernel over the flat half: nonzero flat vectors related to 0.
    PairIndexResult flatKernel = pairIndex<FloatBackend>(c.l, flatLift, tol);
    r.injectiveOnFlat = flatKernel.alpha == 0;

    MatrixC domGens(srcDim, srcFlat.cols() + c.l.dim());
    domGens << srcFlat, c.l.frame.topRows(srcDim);
    r.domainCondition = FloatBackend::rank(domGens, tol).rank == srcDim;

    r.fullPair = bordismIndex(c, tol);
    Subspace<FloatBackend> flatSrc;
    flatSrc.ambient = srcDim;
    flatSrc.frame = srcFlat;
    Subspace<FloatBackend> image = imageOfSubspace(c, flatSrc, tol);
    Subspace<FloatBackend> tgtSharp;
    tgtSharp.ambient = tgtDim;
    tgtSharp.frame = c.target.sharpFrame();
    r.reducedPair = pairIndex<FloatBackend>(image, tgtSharp, tol);
    r.indicesEqual = r.fullPair.index == r.reducedPair.index;
    return r;
}

namespace {

template <class B, class Symbol, class InverseSymbol>
GraphPairRoute graphPairImpl(const Symbol& phi, const InverseSymbol& phiInv, long n, double tol) {
    long d = phi.bandwidth();
    if (n <= d) throw window_error("graphPairIndex: window half-size must exceed bandwidth");
    int ch = phi.channels();
    FourierWindow ambient(-n, n, ch);
    FourierWindow sharpSide(-d, n, ch);
    FourierWindow flatSide(-n, d, ch);
    auto ident = [&](const FourierWindow& in) {
        if constexpr (B::exact) {
            return ExactLaurent::identity(ch).multiplicationMatrix(in, ambient);
        } else {
            return LaurentSymbol::identity(ch).multiplicationMatrix(in, ambient);
        }
    };
    typename B::Matrix s1Sharp = ident(sharpSide);
    typename B::Matrix s2Sharp = phi.multiplicationMatrix(sharpSide, ambient);
    typename B::Matrix s1Flat = phiInv.multiplicationMatrix(flatSide, ambient);
    typename B::Matrix s2Flat = ident(flatSide);

    Eigen::Index amb = ambient.size();
    Eigen::Index sharpCols = sharpSide.size();
    Eigen::Index flatCols = flatSide.size();
    typename B::Matrix gens = B::zero(2 * amb, sharpCols + flatCols);
    for (Eigen::Index j = 0; j < sharpCols; ++j)
        for (Eigen::Index i = 0; i < amb; ++i) {
            gens(i, j) = s1Sharp(i, j);
            gens(amb + i, j) = s2Sharp(i, j);
        }
    for (Eigen::Index j = 0; j < flatCols; ++j)
        for (Eigen::Index i = 0; i < amb; ++i) {
            gens(i, sharpCols + j) = s1Flat(i, j);
            gens(amb + i, sharpCols + j) = s2Flat(i, j);
        }

    Subspace<B> l = span<B>(gens, tol);
    SplitSpace s(ambient, 0);
    Subspace<B> ref;
    ref.ambient = 2 * amb;
    ref.frame = B::zero(2 * amb, amb);
    // flat(source) in slot 1, sharp(target) in slot 2
    for (Eigen::Index j = 0; j < s.flatDim(); ++j) ref.frame(j, j) = typename B::Scalar(1);
    for (Eigen::Index j = 0; j < s.sharpDim(); ++j)
        ref.frame(amb + s.flatDim() + j, s.flatDim() + j) = typename B::Scalar(1);

    GraphPairRoute route;
    route.pair = pairIndex<B>(l, ref, tol);
    route.span = l.spanInfo;
    route.subspaceDim = l.dim();
    route.halfWindow = n;
    return route;
}

} // namespace

GraphPairRoute graphPairIndex(const LaurentSymbol& phi, long halfWindow, double tol) {
    LaurentSymbol::Inverse inv = phi.inverse();
    return graphPairImpl<FloatBackend>(phi, inv.symbol, halfWindow, tol);
}

GraphPairRoute graphPairIndexExact(const ExactLaurent& phi, long halfWindow) {
    ExactLaurent inv = phi.inverseDiagonal();
    return graphPairImpl<RationalBackend>(phi, inv, halfWindow, 0.0);
}

ChainReport chainIndex(const std::vector<Correspondence>& chain, double tol) {
    if (chain.empty()) throw chain_error("chainIndex: empty chain");
    if (!chain.front().source.slots.empty())
        throw chain_error("chainIndex: chain must start at the zero space");
    if (!chain.back().target.slots.empty())
        throw chain_error("chainIndex: chain must end at the zero space");
    for (size_t i = 0; i + 1 < chain.size(); ++i)
        if (!(chain[i].target == chain[i + 1].source))
            throw chain_error("chainIndex: adjacent spaces disagree");

    ChainReport r;
    for (const auto& c : chain) {
        r.terms.push_back(bordismIndex(c, tol));
        r.total += r.terms.back().index;
    }

    Correspondence composed = chain.front();
    for (size_t i = 1; i < chain.size(); ++i) composed = compose(composed, chain[i], tol);
    r.composedIndex = bordismIndex(composed, tol).index;
    r.defectTotal = r.total - r.composedIndex;

    if (chain.size() >= 2) {
        Correspondence prefix = chain.front();
        for (size_t i = 1; i + 1 < chain.size(); ++i) prefix = compose(prefix, chain[i], tol);
        // prefix: 0 -> H_last; final cap: H_last -> 0. Both are subspaces of H_last.
        Subspace<FloatBackend> reach = prefix.l;
        Subspace<FloatBackend> cap = chain.back().l;
        r.finalPair = pairIndex<FloatBackend>(reach, cap, tol);
        r.witness = intersectionBasis(reach, cap, tol);
    }
    return r;
}

RestrictedBordismResult restrictedBordismCheck(const Correspondence& c, double tol) {
    Eigen::Index srcDim = c.sourceDim();
    Eigen::Index tgtDim = c.targetDim();
    MatrixC top = c.l.frame.topRows(srcDim);
    MatrixC bottom = c.l.frame.bottomRows(tgtDim);

    MatrixC srcSharp = c.source.sharpFrame();
    MatrixC srcFlat = c.source.flatFrame();
    MatrixC tgtSharp = c.target.sharpFrame();
    MatrixC tgtFlat = c.target.flatFrame();

    MatrixC main(srcSharp.cols() + tgtFlat.cols(), c.l.dim());
    main.topRows(srcSharp.cols()) = srcSharp.adjoint() * top;
    main.bottomRows(tgtFlat.cols()) = tgtFlat.adjoint() * bottom;

    MatrixC rest(srcFlat.cols() + tgtSharp.cols(), c.l.dim());
    rest.topRows(srcFlat.cols()) = srcFlat.adjoint() * top;
    rest.bottomRows(tgtSharp.cols()) = tgtSharp.adjoint() * bottom;

    RestrictedBordismResult r;
    r.isoDefect = c.l.dim() - FloatBackend::rank(main, tol).rank;
    r.compactRank = FloatBackend::rank(rest, tol).rank;
    r.restricted = r.isoDefect == 0 && r.compactRank < c.l.dim();
    return r;
}

} // namespace fredpair
