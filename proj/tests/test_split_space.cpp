#include "fredpair/window.hpp"

#include <doctest.h>

using namespace fredpair;

TEST_CASE("window indexing round-trips mode and channel") {
    FourierWindow w(-3, 5, 2);
    CHECK(w.modeCount() == 8);
    CHECK(w.size() == 16);
    CHECK(w.containsMode(-3));
    CHECK(w.containsMode(4));
    CHECK_FALSE(w.containsMode(5));

    for (long m = w.lo; m < w.hi; ++m)
        for (int c = 0; c < w.channels; ++c) {
            Eigen::Index idx = w.index(m, c);
            CHECK(w.modeOf(idx) == m);
            CHECK(w.channelOf(idx) == c);
        }
    // mode-major: consecutive channels are adjacent
    CHECK(w.index(-3, 0) == 0);
    CHECK(w.index(-3, 1) == 1);
    CHECK(w.index(-2, 0) == 2);

    CHECK_THROWS_AS(w.index(5, 0), window_error);
    CHECK_THROWS_AS(w.index(0, 2), argument_error);
    CHECK_THROWS_AS(FourierWindow(3, 1, 1), window_error);
    CHECK_THROWS_AS(FourierWindow(0, 4, 0), argument_error);
}

TEST_CASE("symmetric window") {
    FourierWindow w = symmetricWindow(4, 3);
    CHECK(w.lo == -4);
    CHECK(w.hi == 4);
    CHECK(w.channels == 3);
    CHECK(w.size() == 24);
}

TEST_CASE("split space halves") {
    SplitSpace s(symmetricWindow(4, 2), 1);
    CHECK(s.dim() == 16);
    CHECK(s.flatDim() == 10);  // modes -4..0, two channels each
    CHECK(s.sharpDim() == 6);

    CHECK(s.isFlatIndex(s.window.index(0, 1)));
    CHECK_FALSE(s.isFlatIndex(s.window.index(1, 0)));

    CHECK_THROWS_AS(SplitSpace(symmetricWindow(2), 3), window_error);

    // cut at either end: one half is empty
    CHECK(SplitSpace(symmetricWindow(2), -2).flatDim() == 0);
    CHECK(SplitSpace(symmetricWindow(2), 2).sharpDim() == 0);
}

TEST_CASE("twisting the cut") {
    SplitSpace s(symmetricWindow(4), 0);
    CHECK(twistCut(s, 2).cut == 2);
    CHECK(twistCut(s, 2).flatDim() == 6);
    CHECK(twistCut(s, -3).flatDim() == 1);
    CHECK_THROWS_AS(twistCut(s, 5), window_error);
}

TEST_CASE("projector, symmetry, and frames are consistent") {
    SplitSpace s(symmetricWindow(3, 2), -1);
    MatrixC p = flatProjector(s);
    MatrixC sym = polarizationSymmetry(s);

    CHECK((p * p - p).norm() == 0.0);
    CHECK((sym * sym - MatrixC::Identity(s.dim(), s.dim())).norm() == 0.0);
    CHECK((sym - (MatrixC::Identity(s.dim(), s.dim()) - 2.0 * p)).norm() == 0.0);

    MatrixC ff = flatFrame(s);
    MatrixC sf = sharpFrame(s);
    CHECK(ff.cols() == s.flatDim());
    CHECK(sf.cols() == s.sharpDim());
    CHECK((p * ff - ff).norm() == 0.0);
    CHECK((p * sf).norm() == 0.0);

    MatrixC joined(s.dim(), s.dim());
    joined << ff, sf;
    CHECK((joined - MatrixC::Identity(s.dim(), s.dim())).norm() == 0.0);

    // exact backend mirrors the float one
    ExactMatrix pe = flatProjector<RationalBackend>(s);
    for (Eigen::Index i = 0; i < s.dim(); ++i)
        CHECK(pe(i, i) == (s.isFlatIndex(i) ? GaussRat(1) : GaussRat(0)));
}
