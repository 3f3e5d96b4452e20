#include "fredpair/rh_index.hpp"

#include <cmath>
#include <sstream>

namespace fredpair {

MatrixC lPhiOperator(const LaurentSymbol& phi, const SplitSpace& s) {
    if (phi.channels() != s.window.channels)
        throw argument_error("lPhiOperator: channel mismatch");
    MatrixC m = phi.multiplicationMatrix(s.window, s.window);
    MatrixC pb = flatProjector<FloatBackend>(s);
    return m * pb + (MatrixC::Identity(s.dim(), s.dim()) - pb);
}

namespace {

template <class B, class Symbol>
SubspaceRoute subspaceRouteImpl(const Symbol& phi, long n, double tol, bool reversed) {
    long d = phi.bandwidth();
    if (n <= d) throw window_error("kappaViaSubspace: window half-size must exceed bandwidth");
    int ch = phi.channels();
    FourierWindow ambient(-n, n, ch);
    FourierWindow generators = reversed ? FourierWindow(0, n + d, ch)
                                        : FourierWindow(-n - d, 0, ch);
    typename B::Matrix g = phi.multiplicationMatrix(generators, ambient);
    Subspace<B> m = span<B>(g, tol);
    SplitSpace s(ambient, 0);
    Subspace<B> reference;
    reference.ambient = ambient.size();
    reference.frame = reversed ? flatFrame<B>(s) : sharpFrame<B>(s);
    SubspaceRoute route;
    route.pair = pairIndex<B>(m, reference, tol);
    route.span = m.spanInfo;
    route.subspaceDim = m.dim();
    route.halfWindow = n;
    return route;
}

} // namespace

SubspaceRoute kappaViaSubspace(const LaurentSymbol& phi, long halfWindow, double tol) {
    return subspaceRouteImpl<FloatBackend>(phi, halfWindow, tol, false);
}

SubspaceRoute kappaViaSubspaceReversed(const LaurentSymbol& phi, long halfWindow, double tol) {
    return subspaceRouteImpl<FloatBackend>(phi, halfWindow, tol, true);
}

SubspaceRoute kappaViaSubspaceExact(const ExactLaurent& phi, long halfWindow) {
    return subspaceRouteImpl<RationalBackend>(phi, halfWindow, 0.0, false);
}

TraceRoute kappaViaTrace(const LaurentSymbol& phi, long halfWindow,
                         const LaurentSymbol::Inverse* inverse) {
    LaurentSymbol::Inverse local;
    if (!inverse) {
        local = phi.inverse();
        inverse = &local;
    }
    long d = phi.bandwidth();
    long dInv = std::max(std::labs(inverse->symbol.degMin()), inverse->symbol.degMax());
    long pad = d + dInv;
    int ch = phi.channels();
    FourierWindow w(-halfWindow - pad, halfWindow + pad, ch);
    SplitSpace s(w, 0);
    MatrixC mPhi = phi.multiplicationMatrix(w, w);
    MatrixC mInv = inverse->symbol.multiplicationMatrix(w, w);
    // Only the central diagonal of phi P_flat phi^{-1} - P_flat is summed, and
    // P_flat zeroes all sharp columns, so each entry is a dot product over the
    // flat block instead of a full triple product.
    Eigen::Index flat = s.flatDim();
    double raw = 0.0;
    for (long mode = -halfWindow; mode < halfWindow; ++mode)
        for (int c = 0; c < ch; ++c) {
            Eigen::Index i = w.index(mode, c);
            Cplx conj = (mPhi.row(i).head(flat) * mInv.col(i).head(flat)).value();
            raw += conj.real() - (i < flat ? 1.0 : 0.0);
        }
    TraceRoute t;
    t.raw = raw;
    t.rounded = std::lround(raw);
    t.converged = std::abs(raw - static_cast<double>(t.rounded)) <= 0.1;
    t.halfWindow = halfWindow;
    return t;
}

std::string IndexReport::describe() const {
    std::ostringstream os;
    os << "index report (N=" << windowUsed << ", tol=" << tol << ")\n";
    os << "  winding route:  " << windingRoute << "\n";
    os << "  subspace route: " << subspaceAtN.pair.index << " at N, " << subspaceAt2N.pair.index
       << " at 2N (dims " << subspaceAtN.subspaceDim << ", " << subspaceAt2N.subspaceDim
       << "; span gaps " << subspaceAtN.span.gap << ", " << subspaceAt2N.span.gap << ")\n";
    os << "  trace route:    " << traceAtN.raw << " at N, " << traceAt2N.raw << " at 2N"
       << (traceAt2N.converged ? "" : " (not near an integer)") << "\n";
    os << "  pair (alpha, beta, gap) at 2N: (" << subspaceAt2N.pair.alpha << ", "
       << subspaceAt2N.pair.beta << ", " << subspaceAt2N.pair.rankGap << ")\n";
    os << "  stabilized: " << (stabilized ? "yes" : "no") << ", value " << value << "\n";
    return os.str();
}

IndexReport kappaReport(const LaurentSymbol& phi, long halfWindow, double tol) {
    phi.requireCertificate();
    IndexReport r;
    r.windowUsed = halfWindow;
    r.tol = tol;
    r.windingRoute = phi.windingNumber();
    r.subspaceAtN = kappaViaSubspace(phi, halfWindow, tol);
    r.subspaceAt2N = kappaViaSubspace(phi, 2 * halfWindow, tol);
    LaurentSymbol::Inverse inv = phi.inverse();
    r.traceAtN = kappaViaTrace(phi, halfWindow, &inv);
    r.traceAt2N = kappaViaTrace(phi, 2 * halfWindow, &inv);
    r.stabilized = r.subspaceAtN.pair.index == r.subspaceAt2N.pair.index &&
                   r.subspaceAt2N.pair.index == r.windingRoute &&
                   r.traceAtN.converged && r.traceAt2N.converged &&
                   r.traceAtN.rounded == r.windingRoute &&
                   r.traceAt2N.rounded == r.windingRoute;
    r.value = r.windingRoute;
    return r;
}

IndexReport kappa(const LaurentSymbol& phi, long halfWindow, double tol) {
    IndexReport r = kappaReport(phi, halfWindow, tol);
    if (!r.stabilized) throw route_disagreement("kappa: routes disagree\n" + r.describe());
    return r;
}

MatrixC almostHomomorphismDefect(const LaurentSymbol& phi, const LaurentSymbol& psi,
                                 const SplitSpace& s) {
    if (phi.channels() != s.window.channels || psi.channels() != s.window.channels)
        throw argument_error("almostHomomorphismDefect: channel mismatch");
    long margin = phi.bandwidth() + psi.bandwidth();
    if (s.cut - s.window.lo < margin || s.window.hi - s.cut < margin)
        throw window_error("almostHomomorphismDefect: window margin below d_phi + d_psi");
    Eigen::Index dim = s.dim();
    MatrixC mPhi = phi.multiplicationMatrix(s.window, s.window);
    MatrixC mPsi = psi.multiplicationMatrix(s.window, s.window);
    MatrixC sym = polarizationSymmetry<FloatBackend>(s);
    MatrixC eye = MatrixC::Identity(dim, dim);
    return 0.25 * (eye - mPhi) * (mPsi * sym - sym * mPsi) * (eye - sym);
}

double defectResidual(const LaurentSymbol& phi, const LaurentSymbol& psi, const SplitSpace& s) {
    MatrixC t = almostHomomorphismDefect(phi, psi, s);
    MatrixC lhs = lPhiOperator(phi * psi, s);
    MatrixC rhs = lPhiOperator(phi, s) * lPhiOperator(psi, s) + t;
    MatrixC res = lhs - rhs;
    long margin = phi.bandwidth() + psi.bandwidth();
    double worst = 0.0;
    for (long mode = s.window.lo + margin; mode < s.window.hi - margin; ++mode)
        for (int c = 0; c < s.window.channels; ++c)
            worst = std::max(worst, res.col(s.window.index(mode, c)).norm());
    return worst;
}

TransitionResult transitionAutomorphism(const Subspace<FloatBackend>& m, const SplitSpace& s,
                                        double tol) {
    if (m.ambient != s.dim())
        throw argument_error("transitionAutomorphism: subspace not on the split space window");
    Eigen::Index dim = s.dim();
    MatrixC pb = flatProjector<FloatBackend>(s);
    MatrixC pm = m.frame * m.frame.adjoint();
    long w = std::lround((pm - pb).trace().real());

    LaurentSymbol shiftDown = LaurentSymbol::fromTerms(
        s.window.channels,
        {{-w, MatrixC::Identity(s.window.channels, s.window.channels)}});
    MatrixC shifted = shiftDown.multiplicationMatrix(s.window, s.window) * m.frame;
    MatrixC frame2 = FloatBackend::spanFrame(shifted, tol);
    MatrixC pm2 = frame2 * frame2.adjoint();
    if (FloatBackend::operatorNorm(pm2 - pb) >= 1.0 - 1e-9)
        throw no_transition_error(
            "transitionAutomorphism: shifted subspace too far from the flat half");

    MatrixC eye = MatrixC::Identity(dim, dim);
    MatrixC interp = pm2 * pb + (eye - pm2) * (eye - pb);
    LaurentSymbol shiftUp = LaurentSymbol::fromTerms(
        s.window.channels,
        {{w, MatrixC::Identity(s.window.channels, s.window.channels)}});
    MatrixC op = shiftUp.multiplicationMatrixCyclic(s.window) * interp;

    TransitionResult r;
    r.op = op;
    r.shift = w;
    r.smallestSingular = FloatBackend::smallestSingularValue(op);
    r.containment = FloatBackend::operatorNorm((eye - pm) * op * pb);
    return r;
}

} // namespace fredpair
