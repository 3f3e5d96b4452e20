#pragma once

#include "fredpair/errors.hpp"
#include "fredpair/rational.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

namespace fredpair {

using Cplx = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;

// Smallest kept singular value over largest dropped one; +inf when nothing was
// dropped (or nothing kept). A small gap means the rank decision is fragile.
constexpr double kRankGapInf = std::numeric_limits<double>::infinity();
constexpr double kRankGapWarn = 10.0;

struct RankInfo {
    Eigen::Index rank = 0;
    double gap = kRankGapInf;
    bool illConditioned() const { return gap < kRankGapWarn; }
};

// Dense matrix over Gaussian rationals. Only the operations the exact backend
// needs: products, adjoints, stacking, elimination.
class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(Eigen::Index rows, Eigen::Index cols)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows * cols)) {}

    static ExactMatrix Zero(Eigen::Index rows, Eigen::Index cols) { return {rows, cols}; }
    static ExactMatrix Identity(Eigen::Index n) {
        ExactMatrix m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) m(i, i) = GaussRat(1);
        return m;
    }

    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }

    GaussRat& operator()(Eigen::Index i, Eigen::Index j) {
        return data_[static_cast<size_t>(i * cols_ + j)];
    }
    const GaussRat& operator()(Eigen::Index i, Eigen::Index j) const {
        return data_[static_cast<size_t>(i * cols_ + j)];
    }

    ExactMatrix adjoint() const {
        ExactMatrix m(cols_, rows_);
        for (Eigen::Index i = 0; i < rows_; ++i)
            for (Eigen::Index j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j).conj();
        return m;
    }

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.cols_ != b.rows_) throw argument_error("exact product: inner dimensions differ");
        ExactMatrix c(a.rows_, b.cols_);
        for (Eigen::Index i = 0; i < a.rows_; ++i)
            for (Eigen::Index k = 0; k < a.cols_; ++k) {
                const GaussRat& aik = a(i, k);
                if (aik.isZero()) continue;
                for (Eigen::Index j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw argument_error("exact difference: shapes differ");
        ExactMatrix c(a.rows_, a.cols_);
        for (Eigen::Index i = 0; i < a.rows_; ++i)
            for (Eigen::Index j = 0; j < a.cols_; ++j) c(i, j) = a(i, j) - b(i, j);
        return c;
    }

    static ExactMatrix hstack(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.rows_ != b.rows_) throw argument_error("hstack: row counts differ");
        ExactMatrix c(a.rows_, a.cols_ + b.cols_);
        for (Eigen::Index i = 0; i < a.rows_; ++i) {
            for (Eigen::Index j = 0; j < a.cols_; ++j) c(i, j) = a(i, j);
            for (Eigen::Index j = 0; j < b.cols_; ++j) c(i, a.cols_ + j) = b(i, j);
        }
        return c;
    }

    ExactMatrix selectColumns(const std::vector<Eigen::Index>& idx) const {
        ExactMatrix c(rows_, static_cast<Eigen::Index>(idx.size()));
        for (Eigen::Index j = 0; j < c.cols_; ++j)
            for (Eigen::Index i = 0; i < rows_; ++i) c(i, j) = (*this)(i, idx[static_cast<size_t>(j)]);
        return c;
    }

    MatrixC toComplex() const {
        MatrixC m(rows_, cols_);
        for (Eigen::Index i = 0; i < rows_; ++i)
            for (Eigen::Index j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).toComplex();
        return m;
    }

private:
    Eigen::Index rows_ = 0;
    Eigen::Index cols_ = 0;
    std::vector<GaussRat> data_;
};

namespace detail {

// Dense complex SVD. Values are sorted descending; u holds the thin left
// factor when wantThinU, v holds the full right factor when wantFullV.
// Large problems go through LAPACK's divide-and-conquer driver.
struct SvdParts {
    Eigen::VectorXd values;
    MatrixC u;
    MatrixC v;
};
SvdParts svdDecompose(const MatrixC& m, bool wantThinU, bool wantFullV);

// Fraction-free style elimination; returns pivot column indices.
// `work` is destroyed. Pivot choice: first nonzero in the column scan order.
inline std::vector<Eigen::Index> eliminate(ExactMatrix& work) {
    std::vector<Eigen::Index> pivots;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < work.cols() && row < work.rows(); ++col) {
        Eigen::Index p = -1;
        for (Eigen::Index i = row; i < work.rows(); ++i)
            if (!work(i, col).isZero()) { p = i; break; }
        if (p < 0) continue;
        if (p != row)
            for (Eigen::Index j = 0; j < work.cols(); ++j) std::swap(work(p, j), work(row, j));
        GaussRat inv = GaussRat(1) / work(row, col);
        for (Eigen::Index j = col; j < work.cols(); ++j) work(row, j) *= inv;
        for (Eigen::Index i = 0; i < work.rows(); ++i) {
            if (i == row || work(i, col).isZero()) continue;
            GaussRat f = work(i, col);
            for (Eigen::Index j = col; j < work.cols(); ++j)
                work(i, j) -= f * work(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace detail

// Exact rank.
inline Eigen::Index exactRank(const ExactMatrix& m) {
    ExactMatrix work = m;
    return static_cast<Eigen::Index>(detail::eliminate(work).size());
}

// Columns spanning the kernel of m (exact).
inline ExactMatrix exactNullspace(const ExactMatrix& m) {
    ExactMatrix work = m;
    std::vector<Eigen::Index> pivots = detail::eliminate(work);
    std::vector<bool> isPivot(static_cast<size_t>(m.cols()), false);
    for (Eigen::Index p : pivots) isPivot[static_cast<size_t>(p)] = true;
    std::vector<Eigen::Index> freeCols;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (!isPivot[static_cast<size_t>(j)]) freeCols.push_back(j);
    ExactMatrix ker(m.cols(), static_cast<Eigen::Index>(freeCols.size()));
    for (size_t f = 0; f < freeCols.size(); ++f) {
        Eigen::Index fc = freeCols[f];
        ker(fc, static_cast<Eigen::Index>(f)) = GaussRat(1);
        for (size_t r = 0; r < pivots.size(); ++r)
            ker(pivots[r], static_cast<Eigen::Index>(f)) = -work(static_cast<Eigen::Index>(r), fc);
    }
    return ker;
}

struct FloatBackend {
    using Scalar = Cplx;
    using Matrix = MatrixC;
    static constexpr bool exact = false;

    static Matrix zero(Eigen::Index rows, Eigen::Index cols) { return Matrix::Zero(rows, cols); }
    static Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }
    static Matrix hstack(const Matrix& a, const Matrix& b) {
        if (a.rows() != b.rows()) throw argument_error("hstack: row counts differ");
        Matrix c(a.rows(), a.cols() + b.cols());
        c << a, b;
        return c;
    }
    static Matrix adjointOf(const Matrix& m) { return m.adjoint(); }
    static Matrix product(const Matrix& a, const Matrix& b) { return a * b; }

    // Rank decision shared by rank/spanFrame/nullspace: singular values above
    // tol * sigma_max count. `floorScale` guards the cutoff from collapsing
    // when the matrix itself is a residual of near-cancelling data.
    static RankInfo decide(const Eigen::VectorXd& sv, double tol, double floorScale = 0.0) {
        RankInfo info;
        double top = sv.size() > 0 ? sv(0) : 0.0;
        if (std::max(top, floorScale) <= 0.0) return info;
        double cutoff = tol * std::max(top, floorScale);
        Eigen::Index r = 0;
        while (r < sv.size() && sv(r) > cutoff) ++r;
        info.rank = r;
        if (r > 0 && r < sv.size() && sv(r) > 0.0) info.gap = sv(r - 1) / sv(r);
        // A tolerance at or above 1 discards even the dominant direction of
        // real data; report the most fragile possible gap instead of "clean".
        if (r == 0 && top > 0.0 && tol >= 1.0) info.gap = 1.0;
        return info;
    }

    static RankInfo rank(const Matrix& m, double tol) {
        if (m.rows() == 0 || m.cols() == 0) return RankInfo{};
        return decide(detail::svdDecompose(m, false, false).values, tol);
    }

    // Orthonormal frame for the tolerance column span; drops near-zero directions.
    static Matrix spanFrame(const Matrix& gens, double tol, RankInfo* infoOut = nullptr) {
        if (gens.cols() == 0 || gens.rows() == 0) {
            if (infoOut) *infoOut = RankInfo{};
            return Matrix::Zero(gens.rows(), 0);
        }
        auto svd = detail::svdDecompose(gens, true, false);
        RankInfo info = decide(svd.values, tol);
        if (infoOut) *infoOut = info;
        return svd.u.leftCols(info.rank);
    }

    // Columns spanning the tolerance kernel.
    static Matrix nullspace(const Matrix& m, double tol, RankInfo* infoOut = nullptr) {
        if (m.cols() == 0) {
            if (infoOut) *infoOut = RankInfo{};
            return Matrix::Zero(0, 0);
        }
        if (m.rows() == 0) {
            if (infoOut) *infoOut = RankInfo{};
            return Matrix::Identity(m.cols(), m.cols());
        }
        auto svd = detail::svdDecompose(m, false, true);
        RankInfo info = decide(svd.values, tol);
        if (infoOut) *infoOut = info;
        return svd.v.rightCols(m.cols() - info.rank);
    }

    static double frobenius(const Matrix& m) { return m.norm(); }
    static double operatorNorm(const Matrix& m) {
        if (m.rows() == 0 || m.cols() == 0) return 0.0;
        return detail::svdDecompose(m, false, false).values(0);
    }
    static double smallestSingularValue(const Matrix& m) {
        if (m.rows() == 0 || m.cols() == 0) return 0.0;
        const auto& sv = detail::svdDecompose(m, false, false).values;
        return sv(sv.size() - 1);
    }
};

struct RationalBackend {
    using Scalar = GaussRat;
    using Matrix = ExactMatrix;
    static constexpr bool exact = true;

    static Matrix zero(Eigen::Index rows, Eigen::Index cols) { return Matrix::Zero(rows, cols); }
    static Matrix identity(Eigen::Index n) { return Matrix::Identity(n); }
    static Matrix hstack(const Matrix& a, const Matrix& b) { return Matrix::hstack(a, b); }
    static Matrix adjointOf(const Matrix& m) { return m.adjoint(); }
    static Matrix product(const Matrix& a, const Matrix& b) { return a * b; }

    static RankInfo rank(const Matrix& m, double) {
        RankInfo info;
        info.rank = exactRank(m);
        info.gap = kRankGapInf;
        return info;
    }

    // Independent generating columns (no orthonormalization; rank logic is exact).
    static Matrix spanFrame(const Matrix& gens, double, RankInfo* infoOut = nullptr) {
        ExactMatrix work = gens;
        std::vector<Eigen::Index> pivots = detail::eliminate(work);
        RankInfo info;
        info.rank = static_cast<Eigen::Index>(pivots.size());
        info.gap = kRankGapInf;
        if (infoOut) *infoOut = info;
        return gens.selectColumns(pivots);
    }

    static Matrix nullspace(const Matrix& m, double, RankInfo* infoOut = nullptr) {
        if (infoOut) {
            infoOut->rank = exactRank(m);
            infoOut->gap = kRankGapInf;
        }
        return exactNullspace(m);
    }
};

} // namespace fredpair
