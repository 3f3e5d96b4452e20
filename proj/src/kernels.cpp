#include "fredpair/kernels.hpp"

#include "fredpair/errors.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>

#ifdef FREDPAIR_HAVE_OPENMP
#include <omp.h>
#endif

namespace fredpair {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Cplx detAt(const BandTerms& terms, int channels, double theta) {
    if (channels == 1) {
        Cplx v = 0.0;
        for (const auto& [k, c] : terms) v += c(0, 0) * std::polar(1.0, k * theta);
        return v;
    }
    MatrixC m = MatrixC::Zero(channels, channels);
    for (const auto& [k, c] : terms) m += c * std::polar(1.0, k * theta);
    return m.determinant();
}

std::vector<double> phaseIncrements(const std::vector<Cplx>& v, bool parallel) {
    const Eigen::Index n = static_cast<Eigen::Index>(v.size());
    std::vector<double> delta(static_cast<size_t>(n), 0.0);
#ifdef FREDPAIR_HAVE_OPENMP
#pragma omp parallel for if (parallel) schedule(static)
#endif
    for (Eigen::Index t = 1; t < n; ++t)
        delta[static_cast<size_t>(t)] =
            std::arg(v[static_cast<size_t>(t)] / v[static_cast<size_t>(t - 1)]);
    (void)parallel;
    return delta;
}

UnwrapResult unwrapImpl(const std::vector<Cplx>& v, bool parallel) {
    UnwrapResult r;
    if (v.empty()) return r;
    for (const Cplx& z : v)
        if (z == Cplx(0.0, 0.0)) throw argument_error("unwrapPhase: zero value on grid");
    std::vector<double> delta = phaseIncrements(v, parallel);
    r.phase.resize(v.size());
    r.phase[0] = std::arg(v[0]);
    for (size_t t = 1; t < v.size(); ++t) r.phase[t] = r.phase[t - 1] + delta[t];
    double wrap = std::arg(v.front() / v.back());
    r.total = (r.phase.back() - r.phase.front()) + wrap;
    return r;
}

std::vector<Cplx> detGridImpl(const BandTerms& terms, int channels, Eigen::Index gridSize,
                              bool parallel) {
    if (gridSize <= 0) throw argument_error("detGrid: grid size must be positive");
    std::vector<Cplx> values(static_cast<size_t>(gridSize));
#ifdef FREDPAIR_HAVE_OPENMP
#pragma omp parallel for if (parallel) schedule(static)
#endif
    for (Eigen::Index t = 0; t < gridSize; ++t)
        values[static_cast<size_t>(t)] =
            detAt(terms, channels, kTwoPi * static_cast<double>(t) / static_cast<double>(gridSize));
    (void)parallel;
    return values;
}

MatrixC assembleImpl(const BandTerms& terms, int channels, const FourierWindow& in,
                     const FourierWindow& out, bool parallel) {
    if (in.channels != channels || out.channels != channels)
        throw argument_error("assembleMultiplication: channel mismatch");
    MatrixC m = MatrixC::Zero(out.size(), in.size());
#ifdef FREDPAIR_HAVE_OPENMP
#pragma omp parallel for if (parallel) schedule(static)
#endif
    for (long i = in.lo; i < in.hi; ++i) {
        for (const auto& [k, c] : terms) {
            long j = i + k;
            if (!out.containsMode(j)) continue;
            m.block(out.index(j, 0), in.index(i, 0), channels, channels) += c;
        }
    }
    (void)parallel;
    return m;
}

MatrixC assembleCyclicImpl(const BandTerms& terms, int channels, const FourierWindow& w,
                           bool parallel) {
    if (w.channels != channels)
        throw argument_error("assembleMultiplicationCyclic: channel mismatch");
    const long count = w.modeCount();
    if (count == 0) return MatrixC::Zero(0, 0);
    MatrixC m = MatrixC::Zero(w.size(), w.size());
#ifdef FREDPAIR_HAVE_OPENMP
#pragma omp parallel for if (parallel) schedule(static)
#endif
    for (long i = w.lo; i < w.hi; ++i) {
        for (const auto& [k, c] : terms) {
            long j = i + k - w.lo;
            j %= count;
            if (j < 0) j += count;
            m.block(w.index(w.lo + j, 0), w.index(i, 0), channels, channels) += c;
        }
    }
    (void)parallel;
    return m;
}

double minAbsImpl(const std::vector<Cplx>& values, bool parallel) {
    if (values.empty()) throw argument_error("minAbs: empty grid");
    double best = std::abs(values[0]);
    const Eigen::Index n = static_cast<Eigen::Index>(values.size());
#ifdef FREDPAIR_HAVE_OPENMP
#pragma omp parallel for if (parallel) schedule(static) reduction(min : best)
#endif
    for (Eigen::Index t = 0; t < n; ++t) {
        double a = std::abs(values[static_cast<size_t>(t)]);
        if (a < best) best = a;
    }
    (void)parallel;
    return best;
}

#ifdef FREDPAIR_HAVE_OPENMP
constexpr bool kHaveOpenMP = true;
#else
constexpr bool kHaveOpenMP = false;
#endif

} // namespace

namespace serial {
std::vector<Cplx> detGrid(const BandTerms& t, int ch, Eigen::Index g) {
    return detGridImpl(t, ch, g, false);
}
UnwrapResult unwrapPhase(const std::vector<Cplx>& v) { return unwrapImpl(v, false); }
MatrixC assembleMultiplication(const BandTerms& t, int ch, const FourierWindow& in,
                               const FourierWindow& out) {
    return assembleImpl(t, ch, in, out, false);
}
MatrixC assembleMultiplicationCyclic(const BandTerms& t, int ch, const FourierWindow& w) {
    return assembleCyclicImpl(t, ch, w, false);
}
double minAbs(const std::vector<Cplx>& v) { return minAbsImpl(v, false); }
} // namespace serial

namespace par {
std::vector<Cplx> detGrid(const BandTerms& t, int ch, Eigen::Index g) {
    return detGridImpl(t, ch, g, true);
}
UnwrapResult unwrapPhase(const std::vector<Cplx>& v) { return unwrapImpl(v, true); }
MatrixC assembleMultiplication(const BandTerms& t, int ch, const FourierWindow& in,
                               const FourierWindow& out) {
    return assembleImpl(t, ch, in, out, true);
}
MatrixC assembleMultiplicationCyclic(const BandTerms& t, int ch, const FourierWindow& w) {
    return assembleCyclicImpl(t, ch, w, true);
}
double minAbs(const std::vector<Cplx>& v) { return minAbsImpl(v, true); }
} // namespace par

std::vector<Cplx> detGrid(const BandTerms& t, int ch, Eigen::Index g) {
    return kHaveOpenMP ? par::detGrid(t, ch, g) : serial::detGrid(t, ch, g);
}
UnwrapResult unwrapPhase(const std::vector<Cplx>& v) {
    return kHaveOpenMP ? par::unwrapPhase(v) : serial::unwrapPhase(v);
}
MatrixC assembleMultiplication(const BandTerms& t, int ch, const FourierWindow& in,
                               const FourierWindow& out) {
    return kHaveOpenMP ? par::assembleMultiplication(t, ch, in, out)
                       : serial::assembleMultiplication(t, ch, in, out);
}
MatrixC assembleMultiplicationCyclic(const BandTerms& t, int ch, const FourierWindow& w) {
    return kHaveOpenMP ? par::assembleMultiplicationCyclic(t, ch, w)
                       : serial::assembleMultiplicationCyclic(t, ch, w);
}
double minAbs(const std::vector<Cplx>& v) {
    return kHaveOpenMP ? par::minAbs(v) : serial::minAbs(v);
}

int applyThreadEnv() {
#ifdef FREDPAIR_HAVE_OPENMP
    if (const char* env = std::getenv("FREDPAIR_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace fredpair
