#pragma once

#include "fredpair/backend.hpp"
#include "fredpair/errors.hpp"
#include "fredpair/kernels.hpp"
#include "fredpair/window.hpp"

#include <optional>
#include <vector>

namespace fredpair {

// Grid and margin for the stored invertibility certificate.
constexpr Eigen::Index kCertificateGrid = 4096;
constexpr double kCertificateDelta = 1e-6;
constexpr Eigen::Index kWindingGridCap = 1 << 20;

struct LaurentInverse;

// Matrix Laurent polynomial acting on channel vectors by multiplication.
// Coefficient blocks are kept sorted by degree with exact-zero blocks dropped.
class LaurentSymbol {
public:
    LaurentSymbol() = default;

    static LaurentSymbol fromTerms(int channels, BandTerms terms);
    static LaurentSymbol identity(int channels);
    static LaurentSymbol scalarMonomial(long degree, Cplx coeff = Cplx(1.0, 0.0));
    // diag(z^{k_0}, ..., z^{k_{n-1}}).
    static LaurentSymbol diagonalMonomials(const std::vector<long>& powers);

    int channels() const { return channels_; }
    const BandTerms& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }
    long degMin() const;
    long degMax() const;
    long bandwidth() const;
    // Largest coefficient-block Frobenius norm; the scale for relative perturbations.
    double coeffScale() const;

    MatrixC evaluate(double theta) const;

    LaurentSymbol operator*(const LaurentSymbol& rhs) const;
    LaurentSymbol operator+(const LaurentSymbol& rhs) const;
    LaurentSymbol scaled(Cplx factor) const;
    LaurentSymbol shiftedBy(long degree) const;  // multiply by z^degree

    // min |det| over the fixed certificate grid; computed once, cached.
    double certificateMinAbs() const;
    bool certified(double delta = kCertificateDelta) const;
    void requireCertificate(double delta = kCertificateDelta) const;

    struct WindingCurve {
        Eigen::Index gridSize = 0;
        std::vector<Cplx> det;
        std::vector<double> phase;
        long winding = 0;
    };
    // Degree of det around 0; doubles the grid until two sizes agree.
    long windingNumber() const;
    WindingCurve windingCurve() const;

    using Inverse = LaurentInverse;
    Inverse inverse(double tol = 1e-12) const;

    MatrixC multiplicationMatrix(const FourierWindow& in, const FourierWindow& out) const;
    MatrixC multiplicationMatrixCyclic(const FourierWindow& window) const;

private:
    int channels_ = 1;
    BandTerms terms_;
    mutable std::optional<double> certMin_;
};

struct LaurentInverse {
    LaurentSymbol symbol;
    long degMin = 0;   // truncation band actually kept
    long degMax = 0;
    double tailNorm = 0.0;  // largest dropped coefficient norm
};

struct BlockDecomposition {
    MatrixC alphaBlock;  // flat  -> flat
    MatrixC betaBlock;   // sharp -> flat
    MatrixC gammaBlock;  // flat  -> sharp
    MatrixC deltaBlock;  // sharp -> sharp

    MatrixC reassemble() const;
};

// Compressions of the windowed multiplication matrix by the cut.
BlockDecomposition blockDecompose(const LaurentSymbol& phi, const SplitSpace& s);

struct CommutatorRankResult {
    Eigen::Index rank = 0;
    Eigen::Index bound = 0;  // 2 * channels * bandwidth
    double rankGap = kRankGapInf;
};

// Tolerance rank of [phi, S] in the mode-periodic window model; the periodic
// wrap is a second polarization seam, so the bound counts both seams.
CommutatorRankResult commutatorRank(const LaurentSymbol& phi, const SplitSpace& s,
                                    double tol = 1e-8);

// Exact-coefficient Laurent polynomial for the rational backend oracles.
class ExactLaurent {
public:
    ExactLaurent() = default;

    static ExactLaurent fromTerms(int channels, std::vector<std::pair<long, ExactMatrix>> terms);
    static ExactLaurent identity(int channels);
    static ExactLaurent scalarMonomial(long degree, GaussRat coeff = GaussRat(1));
    static ExactLaurent diagonalMonomials(const std::vector<long>& powers);

    int channels() const { return channels_; }
    const std::vector<std::pair<long, ExactMatrix>>& terms() const { return terms_; }
    long degMin() const;
    long degMax() const;
    long bandwidth() const;

    ExactLaurent operator*(const ExactLaurent& rhs) const;
    // Exact inverse for mode-diagonal symbols (one invertible block per channel
    // power pattern); throws argument_error otherwise.
    ExactLaurent inverseDiagonal() const;

    ExactMatrix multiplicationMatrix(const FourierWindow& in, const FourierWindow& out) const;

    LaurentSymbol toFloat() const;

private:
    int channels_ = 1;
    std::vector<std::pair<long, ExactMatrix>> terms_;
};

} // namespace fredpair
