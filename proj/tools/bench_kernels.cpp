#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>

#include "fredpair/kernels.hpp"

namespace {

using fredpair::BandTerms;
using fredpair::Cplx;
using fredpair::MatrixC;

template <class F>
double bestOf(F&& f, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, s);
    }
    return best;
}

void row(const char* name, double serial, double parallel, double maxDiff) {
    std::cout << std::left << std::setw(24) << name << std::right << std::fixed
              << std::setprecision(4) << std::setw(10) << serial << "s" << std::setw(10)
              << parallel << "s" << std::setw(9) << std::setprecision(2)
              << (parallel > 0 ? serial / parallel : 0.0) << "x   max|diff| " << std::scientific
              << std::setprecision(1) << maxDiff << "\n";
}

} // namespace

int main(int argc, char** argv) {
    int threads = fredpair::applyThreadEnv();
    long n = argc > 1 ? std::atol(argv[1]) : 256;
    Eigen::Index grid = argc > 2 ? std::atol(argv[2]) : (1 << 16);
    if (n < 8 || grid < 64) {
        std::cerr << "usage: bench_kernels [half-window >= 8] [grid >= 64]\n";
        return 1;
    }

    std::mt19937 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int channels = 2;
    BandTerms terms;
    for (long d = -3; d <= 3; ++d) {
        MatrixC block(channels, channels);
        for (Eigen::Index r = 0; r < channels; ++r)
            for (Eigen::Index c = 0; c < channels; ++c)
                block(r, c) = Cplx(gauss(rng), gauss(rng));
        terms.emplace_back(d, block);
    }

    std::cout << "kernel benchmark: channels " << channels << ", band 7, window " << n
              << ", grid " << grid << ", threads " << threads << "\n\n";

    bool allEqual = true;

    auto detS = fredpair::serial::detGrid(terms, channels, grid);
    auto detP = fredpair::par::detGrid(terms, channels, grid);
    double detDiff = 0.0;
    for (size_t i = 0; i < detS.size(); ++i)
        detDiff = std::max(detDiff, std::abs(detS[i] - detP[i]));
    allEqual = allEqual && detDiff == 0.0;
    row("detGrid", bestOf([&] { fredpair::serial::detGrid(terms, channels, grid); }, 3),
        bestOf([&] { fredpair::par::detGrid(terms, channels, grid); }, 3), detDiff);

    auto unwrapS = fredpair::serial::unwrapPhase(detS);
    auto unwrapP = fredpair::par::unwrapPhase(detS);
    double unwrapDiff = std::abs(unwrapS.total - unwrapP.total);
    for (size_t i = 0; i < unwrapS.phase.size(); ++i)
        unwrapDiff = std::max(unwrapDiff, std::abs(unwrapS.phase[i] - unwrapP.phase[i]));
    allEqual = allEqual && unwrapDiff == 0.0;
    row("unwrapPhase", bestOf([&] { fredpair::serial::unwrapPhase(detS); }, 3),
        bestOf([&] { fredpair::par::unwrapPhase(detS); }, 3), unwrapDiff);

    fredpair::FourierWindow win = fredpair::symmetricWindow(n, channels);
    auto mulS = fredpair::serial::assembleMultiplication(terms, channels, win, win);
    auto mulP = fredpair::par::assembleMultiplication(terms, channels, win, win);
    double mulDiff = (mulS - mulP).cwiseAbs().maxCoeff();
    allEqual = allEqual && mulDiff == 0.0;
    row("assembleMultiplication",
        bestOf([&] { fredpair::serial::assembleMultiplication(terms, channels, win, win); }, 3),
        bestOf([&] { fredpair::par::assembleMultiplication(terms, channels, win, win); }, 3),
        mulDiff);

    auto cycS = fredpair::serial::assembleMultiplicationCyclic(terms, channels, win);
    auto cycP = fredpair::par::assembleMultiplicationCyclic(terms, channels, win);
    double cycDiff = (cycS - cycP).cwiseAbs().maxCoeff();
    allEqual = allEqual && cycDiff == 0.0;
    row("assembleCyclic",
        bestOf([&] { fredpair::serial::assembleMultiplicationCyclic(terms, channels, win); }, 3),
        bestOf([&] { fredpair::par::assembleMultiplicationCyclic(terms, channels, win); }, 3),
        cycDiff);

    double minS = fredpair::serial::minAbs(detS);
    double minP = fredpair::par::minAbs(detS);
    double minDiff = std::abs(minS - minP);
    allEqual = allEqual && minDiff == 0.0;
    row("minAbs", bestOf([&] { fredpair::serial::minAbs(detS); }, 3),
        bestOf([&] { fredpair::par::minAbs(detS); }, 3), minDiff);

    std::cout << "\n" << (allEqual ? "serial and parallel kernels agree bitwise"
                                   : "MISMATCH between serial and parallel kernels")
              << "\n";
    return allEqual ? 0 : 1;
}
