#include "fredpair/planar.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

using namespace fredpair;

namespace {

constexpr double kTol = 1e-9;

Cplx ipow(Cplx z, long p) {
    Cplx r(1.0, 0.0);
    for (long i = 0; i < std::labs(p); ++i) r *= z;
    return p >= 0 ? r : Cplx(1.0, 0.0) / r;
}

// Independent check of the closed-form expansions: trapezoid quadrature of
// the local Fourier integral. Exact up to aliasing of the geometric tail.
VectorC quadratureCoeffs(const BasisTerm& f, const BoundaryCircle& circle) {
    const Eigen::Index n = 4096;
    VectorC out = VectorC::Zero(circle.window.size());
    for (long k = circle.window.lo; k < circle.window.hi; ++k) {
        Cplx acc(0.0, 0.0);
        for (Eigen::Index t = 0; t < n; ++t) {
            double theta = 2.0 * std::numbers::pi * static_cast<double>(t) / n;
            Cplx z = circle.center + circle.radius * std::polar(1.0, theta);
            Cplx val = f.kind == BasisTerm::Kind::taylor ? ipow(z - f.center, f.power)
                                                         : ipow(z - f.center, -f.power);
            acc += val * std::polar(1.0, -static_cast<double>(k) * theta);
        }
        out(circle.window.index(k, 0)) = acc / static_cast<double>(n);
    }
    return out;
}

BoundaryCircle circleAt(Cplx center, double radius, long halfWindow,
                        CircleRole role = CircleRole::incoming, long cut = 0) {
    return BoundaryCircle{center, radius, role, cut, symmetricWindow(halfWindow)};
}

long domainIndex(const PlanarDomain& dom, double tol = kTol) {
    return bordismIndex(buildCorrespondence(dom, tol), tol).index;
}

} // namespace

TEST_CASE("expansion of a pole outside the circle") {
    // 1/(z-2) on the unit circle: geometric series, only nonnegative modes
    BasisTerm f{BasisTerm::Kind::principal, Cplx(2, 0), 1};
    BoundaryCircle c = circleAt(Cplx(0, 0), 1.0, 16);
    VectorC v = expandOnCircle(f, c);
    for (long k = 0; k < 6; ++k) {
        double expected = -std::pow(2.0, -static_cast<double>(k + 1));
        CHECK(std::abs(v(c.window.index(k, 0)) - expected) < 1e-14);
    }
    for (long k = c.window.lo; k < 0; ++k) CHECK(std::abs(v(c.window.index(k, 0))) == 0.0);
}

TEST_CASE("expansion of a shifted polynomial") {
    // z^2 around center 1 with radius 1/2: (1 + w/2)^2 = 1 + w + w^2/4
    BasisTerm f{BasisTerm::Kind::taylor, Cplx(0, 0), 2};
    BoundaryCircle c = circleAt(Cplx(1, 0), 0.5, 8);
    VectorC v = expandOnCircle(f, c);
    CHECK(std::abs(v(c.window.index(0, 0)) - 1.0) < 1e-14);
    CHECK(std::abs(v(c.window.index(1, 0)) - 1.0) < 1e-14);
    CHECK(std::abs(v(c.window.index(2, 0)) - 0.25) < 1e-14);
    CHECK(std::abs(v(c.window.index(3, 0))) == 0.0);
    CHECK(std::abs(v(c.window.index(-1, 0))) == 0.0);
}

TEST_CASE("expansion on the pole's own circle") {
    BasisTerm f{BasisTerm::Kind::principal, Cplx(0.3, 0.1), 2};
    BoundaryCircle c = circleAt(Cplx(0.3, 0.1), 0.7, 8);
    VectorC v = expandOnCircle(f, c);
    for (long k = c.window.lo; k < c.window.hi; ++k) {
        Cplx got = v(c.window.index(k, 0));
        if (k == -2)
            CHECK(std::abs(got - std::pow(0.7, -2.0)) < 1e-12);
        else
            CHECK(std::abs(got) == 0.0);
    }
}

TEST_CASE("expansion of a pole strictly inside") {
    // 1/(z-0.3) on the unit circle: only modes <= -1, coefficients 0.3^j
    BasisTerm f{BasisTerm::Kind::principal, Cplx(0.3, 0), 1};
    BoundaryCircle c = circleAt(Cplx(0, 0), 1.0, 12);
    VectorC v = expandOnCircle(f, c);
    for (long j = 0; j < 6; ++j) {
        double expected = std::pow(0.3, static_cast<double>(j));
        CHECK(std::abs(v(c.window.index(-1 - j, 0)) - expected) < 1e-13);
    }
    CHECK(std::abs(v(c.window.index(0, 0))) == 0.0);
    CHECK(std::abs(v(c.window.index(3, 0))) == 0.0);
}

TEST_CASE("closed forms agree with contour quadrature") {
    std::vector<std::pair<BasisTerm, BoundaryCircle>> cases = {
        {{BasisTerm::Kind::principal, Cplx(2, 1), 2}, circleAt(Cplx(0.2, -0.1), 1.1, 10)},
        {{BasisTerm::Kind::principal, Cplx(-0.2, 0.15), 3}, circleAt(Cplx(0.1, 0.1), 1.3, 10)},
        {{BasisTerm::Kind::principal, Cplx(0.5, 0.5), 1}, circleAt(Cplx(0.5, 0.5), 0.8, 10)},
        {{BasisTerm::Kind::taylor, Cplx(-1, 0.5), 5}, circleAt(Cplx(0.3, 0), 0.9, 10)},
        {{BasisTerm::Kind::taylor, Cplx(0, 0), 0}, circleAt(Cplx(2, 3), 0.4, 10)},
    };
    for (const auto& [term, circle] : cases) {
        VectorC closed = expandOnCircle(term, circle);
        VectorC quad = quadratureCoeffs(term, circle);
        CHECK((closed - quad).lpNorm<Eigen::Infinity>() < 1e-10);
    }
}

TEST_CASE("geometry rejections") {
    BasisTerm onEdge{BasisTerm::Kind::principal, Cplx(1, 0), 1};
    CHECK_THROWS_AS(expandOnCircle(onEdge, circleAt(Cplx(0, 0), 1.0, 8)), geometry_error);

    BasisTerm negPow{BasisTerm::Kind::taylor, Cplx(0, 0), -1};
    CHECK_THROWS_AS(expandOnCircle(negPow, circleAt(Cplx(0, 0), 1.0, 8)), argument_error);

    PlanarDomain bad = annulusDomain(1.0, 2.0, CircleRole::incoming, 0, 0, 8);
    bad.circles[1].center = Cplx(1.5, 0);  // hole pokes through the outer circle
    CHECK_THROWS_AS(validateGeometry(bad), geometry_error);

    PlanarDomain overlap;
    overlap.kind = DomainKind::bounded;
    overlap.circles = {circleAt(Cplx(0, 0), 3.0, 8),
                       circleAt(Cplx(-0.5, 0), 0.6, 8, CircleRole::outgoing),
                       circleAt(Cplx(0.5, 0), 0.6, 8, CircleRole::outgoing)};
    CHECK_THROWS_AS(validateGeometry(overlap), geometry_error);

    PlanarDomain empty;
    CHECK_THROWS_AS(validateGeometry(empty), geometry_error);

    PlanarDomain deep = annulusDomain(1.0, 2.0, CircleRole::incoming, 0, 0, 8);
    deep.taylorDepth = 9;
    CHECK_THROWS_AS(buildCorrespondence(deep, kTol), argument_error);
}

TEST_CASE("domain basis counts") {
    auto ann = annulusDomain(1.0, 2.0, CircleRole::incoming, 0, 0, 8);
    CHECK(domainBasis(ann).size() == 16);  // 8 taylor + 8 principal by default

    ann.taylorDepth = 3;
    ann.principalDepth = 2;
    CHECK(domainBasis(ann).size() == 5);

    auto cap = exteriorCapDomain(Cplx(0, 0), 1.0, CircleRole::incoming, 0, 8);
    CHECK(domainBasis(cap).size() == 9);  // constant + 8 principal
}

TEST_CASE("annulus transfer profile is the radius ratio") {
    auto sv = annulusCompactProfile(1.0, 2.0, 13, 16);
    REQUIRE(sv.size() == 13);
    for (size_t i = 0; i < sv.size(); ++i)
        CHECK(std::abs(sv[i] - std::pow(2.0, -static_cast<double>(i))) < 1e-12);
}

TEST_CASE("relation indices of the model domains") {
    const long n = 12;
    CHECK(domainIndex(annulusDomain(1, 2, CircleRole::incoming, 0, 0, n)) == 0);
    CHECK(domainIndex(annulusDomain(1, 2, CircleRole::incoming, 2, -1, n)) == 3);
    CHECK(domainIndex(annulusDomain(1, 2, CircleRole::outgoing, 1, 0, n)) == -1);

    for (long t : {-1L, 0L, 2L}) {
        CHECK(domainIndex(diskCapDomain(Cplx(0, 0), 1.0, CircleRole::incoming, t, n)) == t);
        CHECK(domainIndex(diskCapDomain(Cplx(0, 0), 1.0, CircleRole::outgoing, t, n)) == -t);
        CHECK(domainIndex(exteriorCapDomain(Cplx(0, 0), 1.0, CircleRole::incoming, t, n)) ==
              t + 1);
        CHECK(domainIndex(exteriorCapDomain(Cplx(0, 0), 1.0, CircleRole::outgoing, t, n)) ==
              1 - t);
    }

    // the index only sees the cut data, not the embedding
    PlanarDomain offCenter = annulusDomain(1, 2, CircleRole::incoming, 2, -1, n);
    offCenter.circles[1].center = Cplx(0.4, -0.3);
    offCenter.circles[1].radius = 0.5;
    CHECK(domainIndex(offCenter) == 3);
}

TEST_CASE("calibration is pinned by the anchor models") {
    Calibration cal = calibrateConventions(12, kTol);
    CHECK(cal.a == 1);
    CHECK(cal.b == 1);
    Calibration cal2 = calibrateConventions(18, kTol);
    CHECK(cal2.a == cal.a);
    CHECK(cal2.b == cal.b);

    CHECK(calibratedCut(cal, CircleRole::incoming, true, 0) == 1);
    CHECK(calibratedCut(cal, CircleRole::outgoing, true, 0) == 0);
    CHECK(calibratedCut(cal, CircleRole::incoming, false, 2) == -2);
    CHECK(calibratedCut(cal, CircleRole::outgoing, false, -1) == 2);
}

TEST_CASE("surface formula on explicit domains") {
    Calibration cal{1, 1};

    // annulus with surface cuts (lambda, mu): predicted mu - lambda
    for (auto [lambda, mu] : std::vector<std::pair<long, long>>{{0, 0}, {2, -1}, {-2, 1}}) {
        auto r = verifySurfaceFormula(
            annulusDomain(1, 2, CircleRole::incoming, lambda, mu, 12), cal, kTol);
        CHECK(r.match);
        CHECK(r.predicted == mu - lambda);
        CHECK(r.computed == r.predicted);
    }

    // pair of pants: outgoing outer boundary, two incoming holes
    PlanarDomain pants;
    pants.kind = DomainKind::bounded;
    pants.circles = {circleAt(Cplx(0, 0), 3.0, 12, CircleRole::outgoing, 1),
                     circleAt(Cplx(-1, 0), 0.6, 12, CircleRole::incoming, 0),
                     circleAt(Cplx(1.2, 0.2), 0.5, 12, CircleRole::incoming, -1)};
    auto r = verifySurfaceFormula(pants, cal, kTol);
    CHECK(r.match);
    long pantsPredicted = formulaIndex(makeSurfaceSpec(0, {0, -1}, {1}));
    CHECK(r.predicted == pantsPredicted);
    CHECK(r.predicted == 2);  // 1 - 0 - (0 + (-1)) + 1 - 1

    // exterior domain with two incoming circles
    PlanarDomain ext;
    ext.kind = DomainKind::exterior;
    ext.circles = {circleAt(Cplx(-2, 0), 0.7, 12, CircleRole::incoming, 1),
                   circleAt(Cplx(2, 0), 0.7, 12, CircleRole::incoming, 0)};
    auto re = verifySurfaceFormula(ext, cal, kTol);
    CHECK(re.match);
    CHECK(re.predicted == 0);  // 1 - (1 + 0) - 0
}

TEST_CASE("surface formula survives random genus-zero domains") {
    std::mt19937 rng(2024u);
    Calibration cal{1, 1};
    for (int rep = 0; rep < 5; ++rep) {
        PlanarDomain dom = randomGenusZeroDomain(rng, 12);
        CHECK_NOTHROW(validateGeometry(dom));
        auto r = verifySurfaceFormula(dom, cal, kTol);
        CHECK(r.match);
    }
}

TEST_CASE("sphere chain sums to one for every twist") {
    auto chain = sphereChain(0, 0, 12, kTol);
    REQUIRE(chain.size() == 3);
    auto rep = chainIndex(chain, kTol);
    CHECK(rep.total == 1);
    CHECK(rep.composedIndex == 0);
    CHECK(rep.defectTotal == 1);
    CHECK(rep.finalPair.alpha == 1);
    REQUIRE(rep.witness.cols() == 1);
    // the witness is the constant function: mode 0 on the final circle
    Eigen::Index mode0 = 12;  // symmetric window [-12, 12)
    CHECK(std::abs(rep.witness(mode0, 0)) > 0.999);

    for (auto [k1, k2] : std::vector<std::pair<long, long>>{{1, 0}, {-2, 1}, {2, 2}}) {
        auto r = chainIndex(sphereChain(k1, k2, 12, kTol), kTol);
        CHECK(r.total == 1);
        // termwise: (1 - k1) + (k1 - k2) + k2
        CHECK(r.terms[0].index == 1 - k1);
        CHECK(r.terms[1].index == k1 - k2);
        CHECK(r.terms[2].index == k2);
    }
}

TEST_CASE("capping a disk against its exterior leaves one defect") {
    auto c1 = buildCorrespondence(diskCapDomain(Cplx(0, 0), 1.0, CircleRole::outgoing, 0, 12),
                                  kTol);
    auto c2 = buildCorrespondence(exteriorCapDomain(Cplx(0, 0), 1.0, CircleRole::incoming, 0, 12),
                                  kTol);
    auto rep = composeWithDefect(c1, c2, kTol);
    CHECK(rep.kappaLeft == 0);
    CHECK(rep.kappaRight == 1);
    CHECK(rep.defect == 1);
    CHECK(rep.kappaComposed == 0);

    // two annuli glued along matching cuts compose without defect
    auto a1 = buildCorrespondence(annulusDomain(1, 2, CircleRole::outgoing, -1, 1, 12), kTol);
    auto a2 = buildCorrespondence(annulusDomain(2, 4, CircleRole::outgoing, 2, -1, 12), kTol);
    auto ra = composeWithDefect(a1, a2, kTol);
    CHECK(ra.defect == 0);
    CHECK(ra.kappaLeft + ra.kappaRight == ra.kappaComposed);
}

TEST_CASE("random domains stay inside the validated geometry") {
    std::mt19937 rng(7u);
    for (int rep = 0; rep < 20; ++rep) {
        PlanarDomain dom = randomGenusZeroDomain(rng, 8);
        CHECK_NOTHROW(validateGeometry(dom));
        CHECK(dom.circles.size() >= 1);
        for (const auto& c : dom.circles) CHECK(c.radius > 0.0);
    }
}
