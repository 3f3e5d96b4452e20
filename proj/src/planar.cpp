#include "fredpair/planar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fredpair {

namespace {

constexpr double kPoleOnCircleTol = 1e-9;

// Geometric-series coefficients of (base + rho*w)^(-n) in the regime |rho*w| <
// |base|: coeff(k) = base^(-n) * binom(-n, k) * (rho/base)^k for modes k >= 0.
void expandPoleOutside(long n, Cplx base, double rho, const FourierWindow& win, VectorC& out) {
    Cplx term = std::pow(base, static_cast<double>(-n));
    Cplx ratio = rho / base;
    for (long k = 0; k < win.hi; ++k) {
        if (win.containsMode(k)) out(win.index(k, 0)) += term;
        term *= ratio * Cplx(static_cast<double>(-n - k) / static_cast<double>(k + 1), 0.0);
    }
}

// Coefficients of (base + rho*w)^(-n) in the regime |base| < |rho*w|:
// coeff(-n - k) = rho^(-n) * binom(-n, k) * (base/rho)^k for k >= 0.
void expandPoleInside(long n, Cplx base, double rho, const FourierWindow& win, VectorC& out) {
    Cplx term = std::pow(Cplx(rho, 0.0), static_cast<double>(-n));
    Cplx ratio = base / rho;
    for (long k = 0; -n - k >= win.lo; ++k) {
        long mode = -n - k;
        if (win.containsMode(mode)) out(win.index(mode, 0)) += term;
        term *= ratio * Cplx(static_cast<double>(-n - k) / static_cast<double>(k + 1), 0.0);
    }
}

bool isOuterSide(const PlanarDomain& dom, size_t circleIdx) {
    return dom.kind == DomainKind::bounded && circleIdx == 0;
}

long defaultDepth(const PlanarDomain& dom, long stored) {
    if (stored > 0) return stored;
    return dom.circles.empty() ? 0 : dom.circles.front().window.hi;
}

} // namespace

void validateGeometry(const PlanarDomain& dom) {
    if (dom.circles.empty()) throw geometry_error("domain has no boundary circles");
    for (const auto& c : dom.circles) {
        if (!(c.radius > 0.0)) throw geometry_error("circle radius must be positive");
        if (c.window.channels != 1) throw argument_error("boundary windows are single-channel");
    }
    size_t holeStart = dom.kind == DomainKind::bounded ? 1 : 0;
    if (dom.kind == DomainKind::bounded) {
        const auto& outer = dom.circles[0];
        for (size_t i = 1; i < dom.circles.size(); ++i) {
            const auto& c = dom.circles[i];
            if (!(std::abs(c.center - outer.center) + c.radius < outer.radius))
                throw geometry_error("removed disk not strictly inside the outer circle");
        }
    }
    for (size_t i = holeStart; i < dom.circles.size(); ++i)
        for (size_t j = i + 1; j < dom.circles.size(); ++j) {
            const auto& a = dom.circles[i];
            const auto& b = dom.circles[j];
            if (!(std::abs(a.center - b.center) > a.radius + b.radius))
                throw geometry_error("removed disks overlap");
        }
}

VectorC expandOnCircle(const BasisTerm& f, const BoundaryCircle& circle) {
    const FourierWindow& win = circle.window;
    if (win.channels != 1) throw argument_error("expandOnCircle: single-channel windows only");
    VectorC out = VectorC::Zero(win.size());
    const Cplx c = circle.center;
    const double rho = circle.radius;

    if (f.kind == BasisTerm::Kind::taylor) {
        if (f.power < 0) throw argument_error("taylor power must be nonnegative");
        const long m = f.power;
        Cplx base = c - f.center;
        if (std::abs(base) == 0.0) {
            if (win.containsMode(m)) out(win.index(m, 0)) = std::pow(rho, static_cast<double>(m));
            return out;
        }
        // (base + rho*w)^m, finite binomial: coeff(k) = binom(m,k) base^(m-k) rho^k
        Cplx term = std::pow(base, static_cast<double>(m));
        for (long k = 0; k <= m; ++k) {
            if (win.containsMode(k)) out(win.index(k, 0)) += term;
            term *= (rho / base) * Cplx(static_cast<double>(m - k) / static_cast<double>(k + 1), 0.0);
        }
        return out;
    }

    if (f.power < 1) throw argument_error("principal power must be at least 1");
    const long n = f.power;
    const Cplx d = f.center;
    const double dist = std::abs(d - c);
    if (dist == 0.0) {
        // own circle: (rho*w)^(-n)
        if (win.containsMode(-n)) out(win.index(-n, 0)) = std::pow(rho, static_cast<double>(-n));
        return out;
    }
    if (std::abs(dist - rho) <= kPoleOnCircleTol * std::max(1.0, rho))
        throw geometry_error("pole lies on the expansion circle");
    if (dist > rho) {
        expandPoleOutside(n, c - d, rho, win, out);
    } else {
        expandPoleInside(n, c - d, rho, win, out);
    }
    return out;
}

std::vector<BasisTerm> domainBasis(const PlanarDomain& dom) {
    validateGeometry(dom);
    const long taylorDepth = defaultDepth(dom, dom.taylorDepth);
    const long principalDepth = defaultDepth(dom, dom.principalDepth);
    std::vector<BasisTerm> basis;
    if (dom.kind == DomainKind::bounded) {
        const Cplx c0 = dom.circles[0].center;
        for (long m = 0; m < taylorDepth; ++m)
            basis.push_back({BasisTerm::Kind::taylor, c0, m});
        for (size_t i = 1; i < dom.circles.size(); ++i)
            for (long p = 1; p <= principalDepth; ++p)
                basis.push_back({BasisTerm::Kind::principal, dom.circles[i].center, p});
    } else {
        basis.push_back({BasisTerm::Kind::taylor, Cplx(0.0, 0.0), 0});
        for (const auto& circle : dom.circles)
            for (long p = 1; p <= principalDepth; ++p)
                basis.push_back({BasisTerm::Kind::principal, circle.center, p});
    }
    return basis;
}

Correspondence buildCorrespondence(const PlanarDomain& dom, double tol) {
    validateGeometry(dom);
    const long taylorDepth = defaultDepth(dom, dom.taylorDepth);
    const long principalDepth = defaultDepth(dom, dom.principalDepth);
    for (size_t i = 0; i < dom.circles.size(); ++i) {
        const auto& circle = dom.circles[i];
        if (dom.kind == DomainKind::bounded && i == 0 && taylorDepth > circle.window.hi)
            throw argument_error("taylor depth exceeds the outer window");
        if (!isOuterSide(dom, i) && principalDepth > -circle.window.lo)
            throw argument_error("principal depth exceeds the circle window");
    }

    std::vector<size_t> slotOrder;
    std::vector<SplitSpace> sourceSlots, targetSlots;
    for (size_t i = 0; i < dom.circles.size(); ++i)
        if (dom.circles[i].role == CircleRole::incoming) {
            slotOrder.push_back(i);
            sourceSlots.emplace_back(dom.circles[i].window, dom.circles[i].cut);
        }
    for (size_t i = 0; i < dom.circles.size(); ++i)
        if (dom.circles[i].role == CircleRole::outgoing) {
            slotOrder.push_back(i);
            targetSlots.emplace_back(dom.circles[i].window, dom.circles[i].cut);
        }

    Eigen::Index ambient = 0;
    for (size_t i : slotOrder) ambient += dom.circles[i].window.size();

    std::vector<BasisTerm> basis = domainBasis(dom);
    MatrixC gens(ambient, static_cast<Eigen::Index>(basis.size()));
    for (size_t t = 0; t < basis.size(); ++t) {
        Eigen::Index row = 0;
        for (size_t i : slotOrder) {
            VectorC seg = expandOnCircle(basis[t], dom.circles[i]);
            gens.block(row, static_cast<Eigen::Index>(t), seg.size(), 1) = seg;
            row += seg.size();
        }
    }

    return makeCorrespondence(ProductSpace(std::move(sourceSlots)),
                              ProductSpace(std::move(targetSlots)),
                              span<FloatBackend>(gens, tol));
}

SurfaceSpec makeSurfaceSpec(long g, std::vector<long> lambdas, std::vector<long> mus) {
    if (g < 0) throw argument_error("genus must be nonnegative");
    SurfaceSpec s;
    s.g = g;
    s.lambdas = std::move(lambdas);
    s.mus = std::move(mus);
    s.l = static_cast<long>(s.mus.size());
    return s;
}

long formulaIndex(const SurfaceSpec& spec) {
    if (spec.l != static_cast<long>(spec.mus.size()))
        throw argument_error("surface spec: l must equal the number of outgoing cuts");
    long sum = 1 - spec.g - spec.l;
    for (long v : spec.lambdas) sum -= v;
    for (long v : spec.mus) sum += v;
    return sum;
}

long calibratedCut(const Calibration& cal, CircleRole role, bool outerSide, long surfaceCut) {
    long offset;
    if (role == CircleRole::incoming)
        offset = outerSide ? cal.a : cal.b - 1;
    else
        offset = outerSide ? cal.a - 1 : cal.b;
    return offset - surfaceCut;
}

PlanarDomain calibratedDomain(const PlanarDomain& dom, const Calibration& cal) {
    PlanarDomain out = dom;
    for (size_t i = 0; i < out.circles.size(); ++i)
        out.circles[i].cut =
            calibratedCut(cal, out.circles[i].role, isOuterSide(dom, i), dom.circles[i].cut);
    return out;
}

PlanarDomain annulusDomain(double innerRadius, double outerRadius, CircleRole outerRole,
                           long outerCut, long innerCut, long halfWindow) {
    CircleRole innerRole =
        outerRole == CircleRole::incoming ? CircleRole::outgoing : CircleRole::incoming;
    PlanarDomain dom;
    dom.kind = DomainKind::bounded;
    dom.circles = {
        {Cplx(0, 0), outerRadius, outerRole, outerCut, symmetricWindow(halfWindow)},
        {Cplx(0, 0), innerRadius, innerRole, innerCut, symmetricWindow(halfWindow)},
    };
    return dom;
}

PlanarDomain diskCapDomain(Cplx center, double radius, CircleRole role, long cut,
                           long halfWindow) {
    PlanarDomain dom;
    dom.kind = DomainKind::bounded;
    dom.circles = {{center, radius, role, cut, symmetricWindow(halfWindow)}};
    return dom;
}

PlanarDomain exteriorCapDomain(Cplx center, double radius, CircleRole role, long cut,
                               long halfWindow) {
    PlanarDomain dom;
    dom.kind = DomainKind::exterior;
    dom.circles = {{center, radius, role, cut, symmetricWindow(halfWindow)}};
    return dom;
}

Calibration calibrateConventions(long halfWindow, double tol) {
    struct Anchor {
        PlanarDomain dom;
        long predicted;
    };
    std::vector<Anchor> anchors;
    anchors.push_back({annulusDomain(1.0, 2.0, CircleRole::incoming, 0, 0, halfWindow),
                       formulaIndex(makeSurfaceSpec(0, {0}, {0}))});
    anchors.push_back({diskCapDomain(Cplx(0, 0), 1.0, CircleRole::incoming, 0, halfWindow),
                       formulaIndex(makeSurfaceSpec(0, {0}, {}))});
    anchors.push_back({exteriorCapDomain(Cplx(0, 0), 1.0, CircleRole::outgoing, 0, halfWindow),
                       formulaIndex(makeSurfaceSpec(0, {}, {0}))});

    std::vector<Calibration> matches;
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b) {
            Calibration cal{a, b};
            bool ok = true;
            for (const auto& anchor : anchors) {
                Correspondence c = buildCorrespondence(calibratedDomain(anchor.dom, cal), tol);
                if (bordismIndex(c, tol).index != anchor.predicted) {
                    ok = false;
                    break;
                }
            }
            if (ok) matches.push_back(cal);
        }
    if (matches.size() != 1)
        throw calibration_error("anchor calibration admits " + std::to_string(matches.size()) +
                                " offset pairs instead of one");
    return matches.front();
}

SurfaceCheckResult verifySurfaceFormula(const PlanarDomain& dom, const Calibration& cal,
                                        double tol) {
    std::vector<long> lambdas, mus;
    for (const auto& circle : dom.circles)
        (circle.role == CircleRole::incoming ? lambdas : mus).push_back(circle.cut);
    SurfaceCheckResult r;
    r.predicted = formulaIndex(makeSurfaceSpec(0, lambdas, mus));
    r.pair = bordismIndex(buildCorrespondence(calibratedDomain(dom, cal), tol), tol);
    r.computed = r.pair.index;
    r.match = r.computed == r.predicted;
    return r;
}

std::vector<Correspondence> sphereChain(long k1, long k2, long halfWindow, double tol) {
    PlanarDomain cap1 = exteriorCapDomain(Cplx(0, 0), 2.0, CircleRole::outgoing, k1, halfWindow);
    PlanarDomain ann = annulusDomain(1.0, 2.0, CircleRole::incoming, k1, k2, halfWindow);
    PlanarDomain cap2 = diskCapDomain(Cplx(0, 0), 1.0, CircleRole::incoming, k2, halfWindow);
    return {buildCorrespondence(cap1, tol), buildCorrespondence(ann, tol),
            buildCorrespondence(cap2, tol)};
}

std::vector<double> annulusCompactProfile(double innerRadius, double outerRadius, long count,
                                          long halfWindow) {
    BoundaryCircle inner{Cplx(0, 0), innerRadius, CircleRole::incoming, 0,
                         symmetricWindow(halfWindow)};
    BoundaryCircle outer{Cplx(0, 0), outerRadius, CircleRole::outgoing, 0,
                         symmetricWindow(halfWindow)};
    std::vector<double> sv;
    sv.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count && i < halfWindow; ++i) {
        BasisTerm term{BasisTerm::Kind::taylor, Cplx(0, 0), i};
        double u = expandOnCircle(term, inner).norm();
        double v = expandOnCircle(term, outer).norm();
        sv.push_back(u / v);
    }
    return sv;
}

PlanarDomain randomGenusZeroDomain(std::mt19937& rng, long halfWindow, int maxCircles) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<long> cutDist(-2, 2);
    auto roleOf = [&](double p) {
        return p < 0.5 ? CircleRole::incoming : CircleRole::outgoing;
    };
    const double margin = 0.12;

    for (int attempt = 0; attempt < 200; ++attempt) {
        PlanarDomain dom;
        dom.kind = unit(rng) < 0.5 ? DomainKind::bounded : DomainKind::exterior;
        int total = 1 + static_cast<int>(unit(rng) * maxCircles);
        total = std::min(total, maxCircles);

        std::vector<BoundaryCircle> circles;
        bool ok = true;
        if (dom.kind == DomainKind::bounded) {
            circles.push_back({Cplx(0, 0), 2.0, roleOf(unit(rng)), cutDist(rng),
                               symmetricWindow(halfWindow)});
            for (int i = 1; i < total; ++i) {
                bool placed = false;
                for (int tries = 0; tries < 300 && !placed; ++tries) {
                    double r = 0.15 + 0.25 * unit(rng);
                    Cplx c(-1.5 + 3.0 * unit(rng), -1.5 + 3.0 * unit(rng));
                    if (std::abs(c) + r > 2.0 - margin) continue;
                    bool clear = true;
                    for (size_t j = 1; j < circles.size(); ++j)
                        if (std::abs(c - circles[j].center) <
                            r + circles[j].radius + margin) {
                            clear = false;
                            break;
                        }
                    if (!clear) continue;
                    circles.push_back({c, r, roleOf(unit(rng)), cutDist(rng),
                                       symmetricWindow(halfWindow)});
                    placed = true;
                }
                if (!placed) { ok = false; break; }
            }
        } else {
            for (int i = 0; i < total; ++i) {
                bool placed = false;
                for (int tries = 0; tries < 300 && !placed; ++tries) {
                    double r = 0.2 + 0.3 * unit(rng);
                    Cplx c(-1.5 + 3.0 * unit(rng), -1.5 + 3.0 * unit(rng));
                    bool clear = true;
                    for (const auto& other : circles)
                        if (std::abs(c - other.center) < r + other.radius + margin) {
                            clear = false;
                            break;
                        }
                    if (!clear) continue;
                    circles.push_back({c, r, roleOf(unit(rng)), cutDist(rng),
                                       symmetricWindow(halfWindow)});
                    placed = true;
                }
                if (!placed) { ok = false; break; }
            }
        }
        if (!ok) continue;
        dom.circles = std::move(circles);
        validateGeometry(dom);
        return dom;
    }
    throw geometry_error("random domain generation failed to satisfy the margins");
}

} // namespace fredpair
