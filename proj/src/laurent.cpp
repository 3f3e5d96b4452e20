#include "fredpair/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace fredpair {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

BandTerms normalizeTerms(int channels, BandTerms raw) {
    if (channels < 1) throw argument_error("symbol: channels must be positive");
    std::map<long, MatrixC> merged;
    for (auto& [deg, block] : raw) {
        if (block.rows() != channels || block.cols() != channels)
            throw argument_error("symbol: coefficient block is not channels x channels");
        auto [it, fresh] = merged.try_emplace(deg, std::move(block));
        if (!fresh) it->second += block;
    }
    BandTerms out;
    out.reserve(merged.size());
    for (auto& [deg, block] : merged)
        if (block.norm() > 0.0) out.emplace_back(deg, std::move(block));
    return out;
}

} // namespace

LaurentSymbol LaurentSymbol::fromTerms(int channels, BandTerms terms) {
    LaurentSymbol s;
    s.channels_ = channels;
    s.terms_ = normalizeTerms(channels, std::move(terms));
    return s;
}

LaurentSymbol LaurentSymbol::identity(int channels) {
    BandTerms t;
    t.emplace_back(0, MatrixC::Identity(channels, channels));
    return fromTerms(channels, std::move(t));
}

LaurentSymbol LaurentSymbol::scalarMonomial(long degree, Cplx coeff) {
    BandTerms t;
    t.emplace_back(degree, coeff * MatrixC::Identity(1, 1));
    return fromTerms(1, std::move(t));
}

LaurentSymbol LaurentSymbol::diagonalMonomials(const std::vector<long>& powers) {
    int n = static_cast<int>(powers.size());
    if (n == 0) throw argument_error("diagonalMonomials: empty power list");
    BandTerms t;
    for (int c = 0; c < n; ++c) {
        MatrixC block = MatrixC::Zero(n, n);
        block(c, c) = 1.0;
        t.emplace_back(powers[static_cast<size_t>(c)], std::move(block));
    }
    return fromTerms(n, std::move(t));
}

long LaurentSymbol::degMin() const { return terms_.empty() ? 0 : terms_.front().first; }
long LaurentSymbol::degMax() const { return terms_.empty() ? 0 : terms_.back().first; }
long LaurentSymbol::bandwidth() const {
    return std::max(std::labs(degMin()), std::labs(degMax()));
}

double LaurentSymbol::coeffScale() const {
    double s = 0.0;
    for (const auto& [deg, block] : terms_) s = std::max(s, block.norm());
    return s;
}

MatrixC LaurentSymbol::evaluate(double theta) const {
    MatrixC m = MatrixC::Zero(channels_, channels_);
    for (const auto& [deg, block] : terms_) m += block * std::polar(1.0, deg * theta);
    return m;
}

LaurentSymbol LaurentSymbol::operator*(const LaurentSymbol& rhs) const {
    if (channels_ != rhs.channels_) throw argument_error("symbol product: channel mismatch");
    BandTerms t;
    for (const auto& [da, a] : terms_)
        for (const auto& [db, b] : rhs.terms_) t.emplace_back(da + db, a * b);
    return fromTerms(channels_, std::move(t));
}

LaurentSymbol LaurentSymbol::operator+(const LaurentSymbol& rhs) const {
    if (channels_ != rhs.channels_) throw argument_error("symbol sum: channel mismatch");
    BandTerms t = terms_;
    for (const auto& term : rhs.terms_) t.push_back(term);
    return fromTerms(channels_, std::move(t));
}

LaurentSymbol LaurentSymbol::scaled(Cplx factor) const {
    BandTerms t = terms_;
    for (auto& [deg, block] : t) block *= factor;
    return fromTerms(channels_, std::move(t));
}

LaurentSymbol LaurentSymbol::shiftedBy(long degree) const {
    BandTerms t = terms_;
    for (auto& [deg, block] : t) deg += degree;
    return fromTerms(channels_, std::move(t));
}

double LaurentSymbol::certificateMinAbs() const {
    if (!certMin_) {
        if (terms_.empty()) {
            certMin_ = 0.0;
        } else {
            certMin_ = minAbs(detGrid(terms_, channels_, kCertificateGrid));
        }
    }
    return *certMin_;
}

bool LaurentSymbol::certified(double delta) const { return certificateMinAbs() >= delta; }

void LaurentSymbol::requireCertificate(double delta) const {
    if (!certified(delta))
        throw certificate_error("symbol certificate: min |det| on grid below threshold");
}

LaurentSymbol::WindingCurve LaurentSymbol::windingCurve() const {
    requireCertificate();
    std::optional<long> prev;
    for (Eigen::Index grid = kCertificateGrid; grid <= kWindingGridCap; grid *= 2) {
        std::vector<Cplx> values = detGrid(terms_, channels_, grid);
        UnwrapResult unwrapped = unwrapPhase(values);
        double w = unwrapped.total / kTwoPi;
        long rounded = std::lround(w);
        bool clean = std::abs(w - static_cast<double>(rounded)) < 0.25;
        if (clean && prev && *prev == rounded) {
            WindingCurve curve;
            curve.gridSize = grid;
            curve.det = std::move(values);
            curve.phase = std::move(unwrapped.phase);
            curve.winding = rounded;
            return curve;
        }
        prev = clean ? std::optional<long>(rounded) : std::nullopt;
    }
    throw certificate_error("windingNumber: no grid agreement within the refinement cap");
}

long LaurentSymbol::windingNumber() const { return windingCurve().winding; }

LaurentSymbol::Inverse LaurentSymbol::inverse(double tol) const {
    requireCertificate();
    Eigen::Index grid = kCertificateGrid;
    long dmax = 512;
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<MatrixC> inv(static_cast<size_t>(grid));
        for (Eigen::Index t = 0; t < grid; ++t) {
            double theta = kTwoPi * static_cast<double>(t) / static_cast<double>(grid);
            inv[static_cast<size_t>(t)] = evaluate(theta).inverse();
        }
        // Direct Fourier extraction: C_d = (1/M) sum_t inv(theta_t) e^{-i d theta_t}.
        std::vector<MatrixC> coeff(static_cast<size_t>(2 * dmax + 1),
                                   MatrixC::Zero(channels_, channels_));
        for (Eigen::Index t = 0; t < grid; ++t) {
            double theta = kTwoPi * static_cast<double>(t) / static_cast<double>(grid);
            Cplx step = std::polar(1.0, -theta);
            Cplx w = std::polar(1.0, static_cast<double>(dmax) * theta);  // e^{-i(-dmax)theta}
            for (long d = -dmax; d <= dmax; ++d) {
                coeff[static_cast<size_t>(d + dmax)] += inv[static_cast<size_t>(t)] * w;
                w *= step;
            }
        }
        double maxNorm = 0.0;
        for (auto& c : coeff) {
            c /= static_cast<double>(grid);
            maxNorm = std::max(maxNorm, c.norm());
        }
        // The band must die out well inside [-dmax, dmax]; otherwise refine.
        double edgeNorm = 0.0;
        for (long d = dmax - 15; d <= dmax; ++d) {
            edgeNorm = std::max(edgeNorm, coeff[static_cast<size_t>(d + dmax)].norm());
            edgeNorm = std::max(edgeNorm, coeff[static_cast<size_t>(-d + dmax)].norm());
        }
        if (edgeNorm > tol * maxNorm && attempt == 0) {
            grid *= 4;
            dmax *= 4;
            continue;
        }
        Inverse result;
        double cutoff = tol * maxNorm;
        BandTerms kept;
        for (long d = -dmax; d <= dmax; ++d) {
            const MatrixC& c = coeff[static_cast<size_t>(d + dmax)];
            double n = c.norm();
            if (n > cutoff) {
                kept.emplace_back(d, c);
            } else {
                result.tailNorm = std::max(result.tailNorm, n);
            }
        }
        result.symbol = fromTerms(channels_, std::move(kept));
        result.degMin = result.symbol.degMin();
        result.degMax = result.symbol.degMax();
        return result;
    }
    throw certificate_error("inverse: coefficient band exceeds the truncation cap");
}

MatrixC LaurentSymbol::multiplicationMatrix(const FourierWindow& in,
                                            const FourierWindow& out) const {
    return assembleMultiplication(terms_, channels_, in, out);
}

MatrixC LaurentSymbol::multiplicationMatrixCyclic(const FourierWindow& window) const {
    return assembleMultiplicationCyclic(terms_, channels_, window);
}

MatrixC BlockDecomposition::reassemble() const {
    Eigen::Index f = alphaBlock.rows();
    Eigen::Index sh = deltaBlock.rows();
    MatrixC m(f + sh, f + sh);
    m.topLeftCorner(f, f) = alphaBlock;
    m.topRightCorner(f, sh) = betaBlock;
    m.bottomLeftCorner(sh, f) = gammaBlock;
    m.bottomRightCorner(sh, sh) = deltaBlock;
    return m;
}

BlockDecomposition blockDecompose(const LaurentSymbol& phi, const SplitSpace& s) {
    if (phi.channels() != s.window.channels)
        throw argument_error("blockDecompose: channel mismatch");
    MatrixC m = phi.multiplicationMatrix(s.window, s.window);
    Eigen::Index f = s.flatDim();
    Eigen::Index sh = s.sharpDim();
    BlockDecomposition b;
    b.alphaBlock = m.topLeftCorner(f, f);
    b.betaBlock = m.topRightCorner(f, sh);
    b.gammaBlock = m.bottomLeftCorner(sh, f);
    b.deltaBlock = m.bottomRightCorner(sh, sh);
    return b;
}

CommutatorRankResult commutatorRank(const LaurentSymbol& phi, const SplitSpace& s, double tol) {
    long d = phi.bandwidth();
    if (s.cut - s.window.lo < d || s.window.hi - s.cut < d)
        throw window_error("commutatorRank: window margin around the cut below bandwidth");
    MatrixC m = phi.multiplicationMatrixCyclic(s.window);
    MatrixC sym = polarizationSymmetry<FloatBackend>(s);
    MatrixC comm = m * sym - sym * m;
    RankInfo info = FloatBackend::rank(comm, tol);
    CommutatorRankResult r;
    r.rank = info.rank;
    r.bound = 2 * static_cast<Eigen::Index>(phi.channels()) * d;
    r.rankGap = info.gap;
    return r;
}

ExactLaurent ExactLaurent::fromTerms(int channels,
                                     std::vector<std::pair<long, ExactMatrix>> terms) {
    if (channels < 1) throw argument_error("symbol: channels must be positive");
    ExactLaurent s;
    s.channels_ = channels;
    std::map<long, ExactMatrix> merged;
    for (auto& [deg, block] : terms) {
        if (block.rows() != channels || block.cols() != channels)
            throw argument_error("symbol: coefficient block is not channels x channels");
        auto [it, fresh] = merged.try_emplace(deg, std::move(block));
        if (!fresh) {
            for (Eigen::Index i = 0; i < channels; ++i)
                for (Eigen::Index j = 0; j < channels; ++j) it->second(i, j) += block(i, j);
        }
    }
    for (auto& [deg, block] : merged) {
        bool zero = true;
        for (Eigen::Index i = 0; zero && i < channels; ++i)
            for (Eigen::Index j = 0; zero && j < channels; ++j)
                if (!block(i, j).isZero()) zero = false;
        if (!zero) s.terms_.emplace_back(deg, std::move(block));
    }
    return s;
}

ExactLaurent ExactLaurent::identity(int channels) {
    std::vector<std::pair<long, ExactMatrix>> t;
    t.emplace_back(0, ExactMatrix::Identity(channels));
    return fromTerms(channels, std::move(t));
}

ExactLaurent ExactLaurent::scalarMonomial(long degree, GaussRat coeff) {
    ExactMatrix block(1, 1);
    block(0, 0) = std::move(coeff);
    std::vector<std::pair<long, ExactMatrix>> t;
    t.emplace_back(degree, std::move(block));
    return fromTerms(1, std::move(t));
}

ExactLaurent ExactLaurent::diagonalMonomials(const std::vector<long>& powers) {
    int n = static_cast<int>(powers.size());
    if (n == 0) throw argument_error("diagonalMonomials: empty power list");
    std::vector<std::pair<long, ExactMatrix>> t;
    for (int c = 0; c < n; ++c) {
        ExactMatrix block(n, n);
        block(c, c) = GaussRat(1);
        t.emplace_back(powers[static_cast<size_t>(c)], std::move(block));
    }
    return fromTerms(n, std::move(t));
}

long ExactLaurent::degMin() const { return terms_.empty() ? 0 : terms_.front().first; }
long ExactLaurent::degMax() const { return terms_.empty() ? 0 : terms_.back().first; }
long ExactLaurent::bandwidth() const {
    return std::max(std::labs(degMin()), std::labs(degMax()));
}

ExactLaurent ExactLaurent::operator*(const ExactLaurent& rhs) const {
    if (channels_ != rhs.channels_) throw argument_error("symbol product: channel mismatch");
    std::vector<std::pair<long, ExactMatrix>> t;
    for (const auto& [da, a] : terms_)
        for (const auto& [db, b] : rhs.terms_) t.emplace_back(da + db, a * b);
    return fromTerms(channels_, std::move(t));
}

ExactLaurent ExactLaurent::inverseDiagonal() const {
    // One monomial per channel, diagonal blocks only.
    std::vector<std::optional<std::pair<long, GaussRat>>> perChannel(
        static_cast<size_t>(channels_));
    for (const auto& [deg, block] : terms_) {
        for (Eigen::Index i = 0; i < channels_; ++i)
            for (Eigen::Index j = 0; j < channels_; ++j) {
                if (block(i, j).isZero()) continue;
                if (i != j)
                    throw argument_error("inverseDiagonal: off-diagonal coefficient present");
                auto& slot = perChannel[static_cast<size_t>(i)];
                if (slot) throw argument_error("inverseDiagonal: channel has two monomials");
                slot = std::make_pair(deg, block(i, j));
            }
    }
    std::vector<std::pair<long, ExactMatrix>> t;
    for (int c = 0; c < channels_; ++c) {
        const auto& slot = perChannel[static_cast<size_t>(c)];
        if (!slot) throw argument_error("inverseDiagonal: channel has no monomial");
        ExactMatrix block(channels_, channels_);
        block(c, c) = GaussRat(1) / slot->second;
        t.emplace_back(-slot->first, std::move(block));
    }
    return fromTerms(channels_, std::move(t));
}

ExactMatrix ExactLaurent::multiplicationMatrix(const FourierWindow& in,
                                               const FourierWindow& out) const {
    if (in.channels != channels_ || out.channels != channels_)
        throw argument_error("multiplicationMatrix: channel mismatch");
    ExactMatrix m(out.size(), in.size());
    for (long i = in.lo; i < in.hi; ++i) {
        for (const auto& [k, block] : terms_) {
            long j = i + k;
            if (!out.containsMode(j)) continue;
            for (Eigen::Index r = 0; r < channels_; ++r)
                for (Eigen::Index c = 0; c < channels_; ++c)
                    m(out.index(j, static_cast<int>(r)), in.index(i, static_cast<int>(c))) +=
                        block(r, c);
        }
    }
    return m;
}

LaurentSymbol ExactLaurent::toFloat() const {
    BandTerms t;
    for (const auto& [deg, block] : terms_) t.emplace_back(deg, block.toComplex());
    return LaurentSymbol::fromTerms(channels_, std::move(t));
}

} // namespace fredpair
