#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "fredpair/corpus.hpp"
#include "fredpair/laurent.hpp"
#include "fredpair/planar.hpp"
#include "fredpair/rh_index.hpp"

namespace fredpair {

// Ordered keys keep reports byte-stable across runs.
using Json = nlohmann::ordered_json;

enum class ProblemKind { symbolIndex, pair, bordism, surface, chain, verify };

std::string kindName(ProblemKind k);
ProblemKind kindFromName(const std::string& name);

struct ProblemConfig {
    ProblemKind kind = ProblemKind::symbolIndex;
    long window = kDefaultHalfWindow;
    double tol = kDefaultTol;
    std::string backend = "float";  // float | rational
    std::uint32_t seed = kCorpusSeed;
    Json payload = Json::object();
};

// Strict parse: unknown fields anywhere raise argument_error.
ProblemConfig parseConfig(const Json& j);

// The config with every default materialized, as echoed into reports.
Json resolvedConfig(const ProblemConfig& c);

// Symbol and domain codecs shared by payloads, reports, and tests. Complex
// entries are [re, im] number pairs; the exact variant accepts integers or
// "p/q" strings instead of floating-point values.
Json symbolToJson(const LaurentSymbol& s);
LaurentSymbol symbolFromJson(const Json& j);
ExactLaurent exactSymbolFromJson(const Json& j);
Json domainToJson(const PlanarDomain& d);
PlanarDomain domainFromJson(const Json& j, long halfWindow);

// One row per grid point: theta, re_det, im_det, unwrapped_phase.
std::string windingCurveCsv(const LaurentSymbol& phi);

struct RunOutcome {
    int exitCode = 0;          // 0 success, 2 route disagreement or calibration failure
    Json results;              // kind-specific results block of the report
    std::string curveCsv;      // winding curve for symbol runs, empty otherwise
};

// Executes the configured computation. verify streams its per-criterion lines
// to out; every kind sends diagnostics to diag. Invalid inputs (bad payloads,
// bad geometry, non-invertible symbols) raise exceptions for the caller to map
// to exit code 1; disagreements and failed verifications return exit code 2.
RunOutcome runProblem(const ProblemConfig& c, std::ostream& out, std::ostream& diag);

} // namespace fredpair
