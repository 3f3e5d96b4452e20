#pragma once

#include "fredpair/backend.hpp"
#include "fredpair/errors.hpp"

#include <string>

namespace fredpair {

// Finite block of Fourier modes [lo, hi) with `channels` components per mode.
// Coordinates are ordered mode-major: index(m, c) = (m - lo) * channels + c.
struct FourierWindow {
    long lo = 0;
    long hi = 0;
    int channels = 1;

    FourierWindow() = default;
    FourierWindow(long lo_, long hi_, int channels_) : lo(lo_), hi(hi_), channels(channels_) {
        if (hi < lo) throw window_error("window: hi < lo");
        if (channels < 1) throw argument_error("window: channels must be positive");
    }

    long modeCount() const { return hi - lo; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(modeCount()) * channels; }

    bool containsMode(long m) const { return m >= lo && m < hi; }

    Eigen::Index index(long mode, int channel) const {
        if (!containsMode(mode)) throw window_error("window: mode outside [lo, hi)");
        if (channel < 0 || channel >= channels) throw argument_error("window: bad channel");
        return static_cast<Eigen::Index>(mode - lo) * channels + channel;
    }

    long modeOf(Eigen::Index idx) const { return lo + static_cast<long>(idx / channels); }
    int channelOf(Eigen::Index idx) const { return static_cast<int>(idx % channels); }

    friend bool operator==(const FourierWindow& a, const FourierWindow& b) {
        return a.lo == b.lo && a.hi == b.hi && a.channels == b.channels;
    }
    friend bool operator!=(const FourierWindow& a, const FourierWindow& b) { return !(a == b); }
};

inline FourierWindow symmetricWindow(long n, int channels = 1) {
    return FourierWindow(-n, n, channels);
}

// Window with a polarization cut: modes below `cut` are the flat half,
// modes at or above it the sharp half.
struct SplitSpace {
    FourierWindow window;
    long cut = 0;

    SplitSpace() = default;
    SplitSpace(FourierWindow w, long cut_) : window(w), cut(cut_) {
        if (cut < window.lo || cut > window.hi)
            throw window_error("split space: cut outside [lo, hi]");
    }

    Eigen::Index dim() const { return window.size(); }
    Eigen::Index flatDim() const {
        return static_cast<Eigen::Index>(cut - window.lo) * window.channels;
    }
    Eigen::Index sharpDim() const { return dim() - flatDim(); }

    bool isFlatIndex(Eigen::Index idx) const { return window.modeOf(idx) < cut; }

    friend bool operator==(const SplitSpace& a, const SplitSpace& b) {
        return a.window == b.window && a.cut == b.cut;
    }
    friend bool operator!=(const SplitSpace& a, const SplitSpace& b) { return !(a == b); }
};

// Shift of the polarization cut by k; the shifted cut must stay inside the window.
inline SplitSpace twistCut(const SplitSpace& s, long k) {
    long c = s.cut + k;
    if (c < s.window.lo || c > s.window.hi)
        throw window_error("twistCut: shifted cut leaves the window");
    return SplitSpace(s.window, c);
}

// Diagonal projector onto modes below the cut.
template <class B = FloatBackend>
typename B::Matrix flatProjector(const SplitSpace& s) {
    typename B::Matrix p = B::zero(s.dim(), s.dim());
    for (Eigen::Index i = 0; i < s.flatDim(); ++i) p(i, i) = typename B::Scalar(1);
    return p;
}

// S = P_sharp - P_flat = I - 2 P_flat; an involution.
template <class B = FloatBackend>
typename B::Matrix polarizationSymmetry(const SplitSpace& s) {
    typename B::Matrix m = B::identity(s.dim());
    for (Eigen::Index i = 0; i < s.flatDim(); ++i) m(i, i) = typename B::Scalar(-1);
    return m;
}

// Coordinate frames of the two halves (columns are unit vectors).
template <class B = FloatBackend>
typename B::Matrix flatFrame(const SplitSpace& s) {
    typename B::Matrix f = B::zero(s.dim(), s.flatDim());
    for (Eigen::Index i = 0; i < s.flatDim(); ++i) f(i, i) = typename B::Scalar(1);
    return f;
}

template <class B = FloatBackend>
typename B::Matrix sharpFrame(const SplitSpace& s) {
    typename B::Matrix f = B::zero(s.dim(), s.sharpDim());
    for (Eigen::Index i = 0; i < s.sharpDim(); ++i) f(s.flatDim() + i, i) = typename B::Scalar(1);
    return f;
}

} // namespace fredpair
