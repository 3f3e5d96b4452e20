#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fredpair/corpus.hpp"
#include "fredpair/subspace.hpp"

namespace fredpair {

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Sizes and sample counts for one run of the invariant battery. The defaults
// are the full gate; quickSuiteOptions() shrinks windows and counts to a
// smoke-test level for interactive use.
struct SuiteOptions {
    long routeN1 = 64;        // primary window for the index routes
    long routeN2 = 128;       // stabilization window
    long homomorphismN = 64;  // window for product-law checks (products have wider bands)
    long defectN = 64;        // window for the multiplicative-defect residual
    long commutatorN = 64;    // window for the commutator rank bound
    long planarN1 = 48;       // primary window for planar domains
    long planarN2 = 96;       // doubled window for planar domains
    long sewingN = 48;        // window for sewing-defect checks
    int surfaceConfigs = 32;  // random genus-zero configurations
    int homomorphismPairs = 50;
    int defectPairs = 20;
    int katoSamples = 100;
    int perturbationsPerEntry = 2;
    double routeBudget = 30.0;    // seconds allowed for the route-agreement pass
    double surfaceBudget = 120.0; // seconds allowed for the surface-formula pass
    double tol = kDefaultTol;
    std::uint32_t seed = kCorpusSeed;
};

SuiteOptions fullSuiteOptions();
SuiteOptions quickSuiteOptions();

// Runs all criteria in order, streaming one result line per criterion to log.
std::vector<CriterionResult> runSuite(const SuiteOptions& opt, std::ostream& log);

// 0 when every criterion passed, 2 otherwise.
int suiteExitCode(const std::vector<CriterionResult>& results);

// Runs a handful of index routes at the given tolerance and reports whether
// the rank decisions degraded. A sane tolerance yields exit code 0; a
// sabotaged one (tol near 1) must flag rank gaps and yield exit code 2.
struct SabotageProbe {
    bool rankGapFlagged = false;
    bool indexCorrupted = false;
    int exitCode = 0;
    std::string detail;
};

SabotageProbe toleranceSabotageProbe(double tol, long halfWindow = 32);

} // namespace fredpair
