#pragma once

#include "fredpair/backend.hpp"
#include "fredpair/errors.hpp"

#include <utility>

namespace fredpair {

constexpr double kDefaultTol = 1e-8;

// Finite-dimensional subspace of C^ambient, held as a column frame.
// Float frames are orthonormal; exact frames are an independent generating set.
template <class B = FloatBackend>
struct Subspace {
    Eigen::Index ambient = 0;
    typename B::Matrix frame;
    RankInfo spanInfo;
    double tol = kDefaultTol;

    Eigen::Index dim() const { return frame.cols(); }
};

// Span of generator columns at the given tolerance. Float generators are
// column-normalized first so the tolerance is relative per generator set.
template <class B = FloatBackend>
Subspace<B> span(const typename B::Matrix& generators, double tol) {
    if (generators.rows() == 0) throw argument_error("span: ambient dimension is zero");
    Subspace<B> s;
    s.ambient = generators.rows();
    s.tol = tol;
    if constexpr (B::exact) {
        s.frame = B::spanFrame(generators, tol, &s.spanInfo);
    } else {
        MatrixC g = generators;
        Eigen::Index kept = 0;
        MatrixC cleaned(g.rows(), g.cols());
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            double n = g.col(j).norm();
            if (n > 0.0) cleaned.col(kept++) = g.col(j) / n;
        }
        s.frame = B::spanFrame(cleaned.leftCols(kept), tol, &s.spanInfo);
    }
    return s;
}

template <class B = FloatBackend>
Subspace<B> fullSpace(Eigen::Index ambient, double tol = kDefaultTol) {
    Subspace<B> s;
    s.ambient = ambient;
    s.frame = B::identity(ambient);
    s.tol = tol;
    return s;
}

template <class B = FloatBackend>
Subspace<B> zeroSubspace(Eigen::Index ambient, double tol = kDefaultTol) {
    Subspace<B> s;
    s.ambient = ambient;
    s.frame = B::zero(ambient, 0);
    s.tol = tol;
    return s;
}

struct PairIndexResult {
    Eigen::Index alpha = 0;     // dim of the intersection
    Eigen::Index beta = 0;      // codim of the sum
    long index = 0;             // alpha - beta
    double rankGap = kRankGapInf;
    bool illConditioned = false;
};

// Index of the pair (u, v): dim(u ∩ v) - codim(u + v).
template <class B = FloatBackend>
PairIndexResult pairIndex(const Subspace<B>& u, const Subspace<B>& v, double tol) {
    if (u.ambient != v.ambient) throw argument_error("pairIndex: ambient spaces differ");
    RankInfo info;
    if constexpr (B::exact) {
        info = B::rank(B::hstack(u.frame, v.frame), tol);
    } else {
        // rank([U V]) = dim V + rank((1 - P_V) U) when V is orthonormal, which
        // float frames are. This keeps the decomposition at the smaller width.
        // The stacked matrix has sigma_max >= 1, hence the cutoff floor.
        const bool maskU = u.dim() <= v.dim();
        const MatrixC& small = maskU ? u.frame : v.frame;
        const MatrixC& big = maskU ? v.frame : u.frame;
        if (small.cols() == 0) {
            info.rank = big.cols();  // frames have full column rank
        } else {
            MatrixC masked = small - big * (big.adjoint() * small).eval();
            auto sv = detail::svdDecompose(masked, false, false).values;
            info = FloatBackend::decide(sv, tol, 1.0);
            info.rank += big.cols();
        }
    }
    PairIndexResult r;
    r.alpha = u.dim() + v.dim() - info.rank;
    r.beta = u.ambient - info.rank;
    r.index = static_cast<long>(r.alpha - r.beta);
    r.rankGap = info.gap;
    r.illConditioned = info.illConditioned();
    return r;
}

// Graph {(x, Ax)} of a k -> m map, inside C^(k+m); domain slot first.
template <class B = FloatBackend>
Subspace<B> graph(const typename B::Matrix& a) {
    Eigen::Index k = a.cols();
    Eigen::Index m = a.rows();
    Subspace<B> s;
    s.ambient = k + m;
    s.frame = B::zero(k + m, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        s.frame(j, j) = typename B::Scalar(1);
        for (Eigen::Index i = 0; i < m; ++i) s.frame(k + i, j) = a(i, j);
    }
    return s;
}

// Domain coordinate slab C^k ⊕ {0} in C^(k+m).
template <class B = FloatBackend>
Subspace<B> domainSlot(Eigen::Index k, Eigen::Index m) {
    Subspace<B> s;
    s.ambient = k + m;
    s.frame = B::zero(k + m, k);
    for (Eigen::Index j = 0; j < k; ++j) s.frame(j, j) = typename B::Scalar(1);
    return s;
}

// Pair index of (graph A, domain slot); alpha is dim ker A, beta is dim coker A,
// and the index is always cols - rows.
template <class B = FloatBackend>
PairIndexResult katoIndex(const typename B::Matrix& a, double tol) {
    return pairIndex<B>(graph<B>(a), domainSlot<B>(a.cols(), a.rows()), tol);
}

// Orthogonal complement (exact annihilator in the rational backend).
template <class B = FloatBackend>
Subspace<B> complement(const Subspace<B>& u, double tol) {
    Subspace<B> s;
    s.ambient = u.ambient;
    if (u.dim() == 0) {
        s.frame = B::identity(u.ambient);
        return s;
    }
    s.frame = B::nullspace(B::adjointOf(u.frame), tol, &s.spanInfo);
    return s;
}

// Orthonormal basis of u ∩ v (float only; used for witness extraction).
inline MatrixC intersectionBasis(const Subspace<FloatBackend>& u,
                                 const Subspace<FloatBackend>& v, double tol) {
    if (u.ambient != v.ambient) throw argument_error("intersection: ambient spaces differ");
    if (u.dim() == 0 || v.dim() == 0) return MatrixC::Zero(u.ambient, 0);
    MatrixC stacked(u.ambient, u.dim() + v.dim());
    stacked << u.frame, -v.frame;
    MatrixC ker = FloatBackend::nullspace(stacked, tol);
    if (ker.cols() == 0) return MatrixC::Zero(u.ambient, 0);
    MatrixC inter = u.frame * ker.topRows(u.dim());
    return FloatBackend::spanFrame(inter, tol);
}

} // namespace fredpair
