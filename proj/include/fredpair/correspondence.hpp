#pragma once

#include "fredpair/laurent.hpp"
#include "fredpair/rh_index.hpp"
#include "fredpair/subspace.hpp"
#include "fredpair/window.hpp"

#include <vector>

namespace fredpair {

// Ordered product of split spaces; the zero space is the empty product.
// Coordinates are concatenated slot by slot.
struct ProductSpace {
    std::vector<SplitSpace> slots;

    ProductSpace() = default;
    ProductSpace(std::initializer_list<SplitSpace> s) : slots(s) {}
    explicit ProductSpace(std::vector<SplitSpace> s) : slots(std::move(s)) {}

    Eigen::Index dim() const;
    Eigen::Index flatDim() const;
    Eigen::Index slotOffset(size_t i) const;
    MatrixC flatFrame() const;   // columns: flat coordinate vectors of every slot
    MatrixC sharpFrame() const;

    friend bool operator==(const ProductSpace& a, const ProductSpace& b) {
        return a.slots == b.slots;
    }
};

// Linear relation between split spaces, stored as a subspace of source + target.
struct Correspondence {
    ProductSpace source;
    ProductSpace target;
    Subspace<FloatBackend> l;

    Eigen::Index sourceDim() const { return source.dim(); }
    Eigen::Index targetDim() const { return target.dim(); }
};

Correspondence makeCorrespondence(ProductSpace source, ProductSpace target,
                                  Subspace<FloatBackend> l);

// Index of the pair (L, flat(source) + sharp(target)).
PairIndexResult bordismIndex(const Correspondence& c, double tol = kDefaultTol);

// Relation composition: image under (first, last) of the middle-mismatch kernel.
Correspondence compose(const Correspondence& c1, const Correspondence& c2,
                       double tol = kDefaultTol);

struct CompositionReport {
    Correspondence composed;
    long kappaLeft = 0;
    long kappaRight = 0;
    long kappaComposed = 0;
    long defect = 0;  // kappaLeft + kappaRight - kappaComposed
    PairIndexResult leftPair, rightPair, composedPair;
    RankInfo middleKernel;
};

CompositionReport composeWithDefect(const Correspondence& c1, const Correspondence& c2,
                                    double tol = kDefaultTol);

// {y in target : exists x in u with (x, y) in L}.
Subspace<FloatBackend> imageOfSubspace(const Correspondence& c, const Subspace<FloatBackend>& u,
                                       double tol = kDefaultTol);

// Hypotheses and conclusion of the index-reduction statement: if L is injective
// on the source flat half and flat + dom L fills the source, the bordism index
// equals the pair index of (L(flat), sharp(target)) in the target alone.
struct ReductionCheck {
    bool injectiveOnFlat = false;
    bool domainCondition = false;
    bool indicesEqual = false;
    PairIndexResult fullPair;
    PairIndexResult reducedPair;
};

ReductionCheck indexReductionCheck(const Correspondence& c, double tol = kDefaultTol);

// Graph-pair route to the symbol index: the span of two-sided graph generators
// (z^i, phi z^i) for i in [-d, N) and (phi^{-1} z^j, z^j) for j in [-N, d),
// paired against flat + sharp at cuts (0, 0). One-sided generation cannot see
// the winding (its dimension count is forced by the band reach alone), so both
// directions are generated and the inverse symbol ties them together.
struct GraphPairRoute {
    PairIndexResult pair;
    RankInfo span;
    Eigen::Index subspaceDim = 0;
    long halfWindow = 0;
};

GraphPairRoute graphPairIndex(const LaurentSymbol& phi, long halfWindow,
                              double tol = kDefaultTol);
// Exact variant for mode-diagonal symbols (exact inverse available).
GraphPairRoute graphPairIndexExact(const ExactLaurent& phi, long halfWindow);

// Chains 0 -> H_1 -> ... -> H_n -> 0: termwise indices, the fully composed
// relation, and the witness basis of the final intersection.
struct ChainReport {
    std::vector<PairIndexResult> terms;
    long total = 0;
    long composedIndex = 0;   // index of the fully composed (zero-to-zero) relation
    long defectTotal = 0;     // total - composedIndex
    PairIndexResult finalPair;  // prefix image vs final cap, in the last middle space
    MatrixC witness;            // basis of their intersection
};

ChainReport chainIndex(const std::vector<Correspondence>& chain, double tol = kDefaultTol);

// Operational reading of the restricted-bordism condition: the projection of L
// onto sharp(source) + flat(target) is injective up to a small defect, and the
// complementary projection has finite tolerance rank.
struct RestrictedBordismResult {
    Eigen::Index isoDefect = 0;      // dim L - tolerance rank of the main projection
    Eigen::Index compactRank = 0;    // tolerance rank of the complementary projection
    bool restricted = false;         // isoDefect == 0 and compactRank < dim L
};

RestrictedBordismResult restrictedBordismCheck(const Correspondence& c,
                                               double tol = kDefaultTol);

} // namespace fredpair
