#include "fredpair/corpus.hpp"

#include "fredpair/errors.hpp"

#include <cmath>
#include <optional>

namespace fredpair {

namespace {

MatrixC randomComplexMatrix(int n, std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    MatrixC m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Cplx(g(rng), g(rng)) / std::sqrt(2.0);
    return m;
}

// Keep determinant roots away from the unit circle: inside roots below 0.70,
// outside roots above 1.43. The near-kernel ladders of the window routes then
// clear the rank cutoff by two orders of magnitude at both working sizes.
bool rootInMargin(Cplx r, bool& inside) {
    double a = std::abs(r);
    if (a < 0.70) {
        inside = true;
        return true;
    }
    if (a > 1.43) {
        inside = false;
        return true;
    }
    return false;
}

struct Factor {
    MatrixC a, b;  // a + b z
    long inside = 0;
};

// Stable quadratic roots of c2 z^2 + c1 z + c0.
std::pair<Cplx, Cplx> quadraticRoots(Cplx c2, Cplx c1, Cplx c0) {
    Cplx disc = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
    double sgn = (std::conj(c1) * disc).real() >= 0.0 ? 1.0 : -1.0;
    Cplx q = -0.5 * (c1 + sgn * disc);
    return {q / c2, c0 / q};
}

std::optional<Factor> sampleFactor(int n, std::mt19937& rng) {
    Factor f;
    f.a = randomComplexMatrix(n, rng);
    f.b = randomComplexMatrix(n, rng);
    if (n == 1) {
        Cplx c0 = f.a(0, 0), c1 = f.b(0, 0);
        double s = std::max(std::abs(c0), std::abs(c1));
        if (s == 0.0 || std::abs(c1) < 0.05 * s) return std::nullopt;
        bool inside = false;
        if (!rootInMargin(-c0 / c1, inside)) return std::nullopt;
        f.inside = inside ? 1 : 0;
        return f;
    }
    Cplx c0 = f.a.determinant();
    Cplx c2 = f.b.determinant();
    Cplx c1 = f.a(0, 0) * f.b(1, 1) + f.b(0, 0) * f.a(1, 1) - f.a(0, 1) * f.b(1, 0) -
              f.b(0, 1) * f.a(1, 0);
    double s = std::max({std::abs(c0), std::abs(c1), std::abs(c2)});
    if (s == 0.0 || std::abs(c2) < 0.05 * s || std::abs(c0) < 1e-9 * s) return std::nullopt;
    auto [r1, r2] = quadraticRoots(c2, c1, c0);
    bool in1 = false, in2 = false;
    if (!rootInMargin(r1, in1) || !rootInMargin(r2, in2)) return std::nullopt;
    f.inside = (in1 ? 1 : 0) + (in2 ? 1 : 0);
    return f;
}

LaurentSymbol affineSymbol(const Factor& f, int n) {
    return LaurentSymbol::fromTerms(n, {{0, f.a}, {1, f.b}});
}

// Normalize to unit leading coefficient scale, then demand a determinant
// margin that survives 1e-3 relative block perturbations with 3x headroom.
std::optional<LaurentSymbol> finishEntry(LaurentSymbol sym, int n) {
    double scale = sym.coeffScale();
    if (scale == 0.0) return std::nullopt;
    sym = sym.scaled(Cplx(1.0 / scale, 0.0));
    double sumNorm = 0.0;
    for (const auto& [k, c] : sym.terms()) sumNorm += c.norm();
    double wiggle = n == 1 ? 1e-3 * sumNorm : 2.2e-3 * sumNorm * sumNorm;
    double need = std::max(0.05, 3.0 * wiggle);
    if (sym.certificateMinAbs() < need) return std::nullopt;
    return sym;
}

} // namespace

std::vector<CorpusEntry> standardCorpus(std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::vector<CorpusEntry> out;

    for (long k = -8; k <= 8; ++k)
        out.push_back({"z^" + std::to_string(k), LaurentSymbol::scalarMonomial(k), k});

    out.push_back({"diag(z^2,z^-1)", LaurentSymbol::diagonalMonomials({2, -1}), 1});
    std::uniform_int_distribution<long> powDist(-4, 4);
    for (int n = 2; n <= 4; ++n)
        for (int rep = 0; rep < 2; ++rep) {
            std::vector<long> ks(static_cast<size_t>(n));
            long total = 0;
            std::string name = "diag(";
            for (size_t i = 0; i < ks.size(); ++i) {
                ks[i] = powDist(rng);
                total += ks[i];
                name += (i ? "," : "") + std::string("z^") + std::to_string(ks[i]);
            }
            name += ")";
            out.push_back({name, LaurentSymbol::diagonalMonomials(ks), total});
        }

    int made = 0;
    long guard = 0;
    while (made < 10 && guard++ < 100000) {
        auto f = sampleFactor(2, rng);
        if (!f) continue;
        auto sym = finishEntry(affineSymbol(*f, 2), 2);
        if (!sym) continue;
        out.push_back({"affine-" + std::to_string(made), *sym, f->inside});
        ++made;
    }
    if (made < 10) throw argument_error("corpus: affine sampling exhausted its attempts");

    made = 0;
    guard = 0;
    std::uniform_int_distribution<int> chanDist(1, 2);
    std::uniform_int_distribution<int> nfDist(2, 3);
    std::bernoulli_distribution shiftDist(0.5);
    while (made < 20 && guard++ < 400000) {
        int n = chanDist(rng);
        int nf = nfDist(rng);
        LaurentSymbol sym = LaurentSymbol::identity(n);
        long inside = 0;
        bool ok = true;
        for (int i = 0; i < nf; ++i) {
            auto f = sampleFactor(n, rng);
            if (!f) {
                ok = false;
                break;
            }
            sym = sym * affineSymbol(*f, n);
            inside += f->inside;
        }
        if (!ok) continue;
        auto fin = finishEntry(sym, n);
        if (!fin) continue;
        LaurentSymbol entry = *fin;
        long expected = inside;
        if (shiftDist(rng)) {
            long d = entry.degMax();
            entry = entry.shiftedBy(-d);
            expected -= static_cast<long>(n) * d;
        }
        out.push_back({"product-" + std::to_string(made), entry, expected});
        ++made;
    }
    if (made < 20) throw argument_error("corpus: product sampling exhausted its attempts");
    return out;
}

LaurentSymbol perturbSymbol(const LaurentSymbol& s, double relAmount, std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    BandTerms terms;
    for (const auto& [k, c] : s.terms()) {
        MatrixC noise(c.rows(), c.cols());
        for (Eigen::Index i = 0; i < c.rows(); ++i)
            for (Eigen::Index j = 0; j < c.cols(); ++j) noise(i, j) = Cplx(g(rng), g(rng));
        double nn = noise.norm();
        if (nn > 0.0) noise *= relAmount * c.norm() / nn;
        terms.emplace_back(k, c + noise);
    }
    return LaurentSymbol::fromTerms(s.channels(), std::move(terms));
}

} // namespace fredpair
