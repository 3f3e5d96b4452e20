#include "fredpair/backend.hpp"

#include <complex>

#define LAPACK_COMPLEX_CPP
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace fredpair {
namespace detail {

namespace {

// Below this size the classical one-sided Jacobi iteration is both fast and
// the most accurate option; above it the divide-and-conquer driver wins big.
constexpr Eigen::Index kLapackThreshold = 48;

SvdParts eigenSvd(const MatrixC& m, bool wantThinU, bool wantFullV) {
    unsigned opts = 0;
    if (wantThinU) opts |= Eigen::ComputeThinU;
    if (wantFullV) opts |= Eigen::ComputeFullV;
    Eigen::JacobiSVD<MatrixC> svd(m, opts);
    SvdParts out;
    out.values = svd.singularValues();
    if (wantThinU) out.u = svd.matrixU();
    if (wantFullV) out.v = svd.matrixV();
    return out;
}

bool lapackSvd(const MatrixC& m, bool wantThinU, bool wantFullV, SvdParts& out) {
    const lapack_int rows = static_cast<lapack_int>(m.rows());
    const lapack_int cols = static_cast<lapack_int>(m.cols());
    const lapack_int k = std::min(rows, cols);
    MatrixC work = m;  // gesdd destroys its input
    out.values.resize(k);

    char jobz = 'N';
    lapack_int ldu = 1, ldvt = 1;
    MatrixC u, vt;
    if (wantFullV) {
        jobz = 'A';
        u.resize(rows, rows);
        vt.resize(cols, cols);
        ldu = rows;
        ldvt = cols;
    } else if (wantThinU) {
        jobz = 'S';
        u.resize(rows, k);
        vt.resize(k, cols);
        ldu = rows;
        ldvt = k;
    }

    lapack_int info = LAPACKE_zgesdd(
        LAPACK_COL_MAJOR, jobz, rows, cols, work.data(), rows, out.values.data(),
        jobz == 'N' ? nullptr : u.data(), ldu, jobz == 'N' ? nullptr : vt.data(), ldvt);
    if (info != 0) return false;

    if (wantThinU) out.u = u.leftCols(k);
    if (wantFullV) out.v = vt.adjoint();
    return true;
}

}  // namespace

SvdParts svdDecompose(const MatrixC& m, bool wantThinU, bool wantFullV) {
    if (std::min(m.rows(), m.cols()) >= kLapackThreshold) {
        SvdParts out;
        if (lapackSvd(m, wantThinU, wantFullV, out)) return out;
    }
    return eigenSvd(m, wantThinU, wantFullV);
}

}  // namespace detail
}  // namespace fredpair
