#include "fredpair/config.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fredpair/acceptance.hpp"
#include "fredpair/correspondence.hpp"
#include "fredpair/errors.hpp"

namespace fredpair {

namespace {

[[noreturn]] void badConfig(const std::string& msg) { throw argument_error("config: " + msg); }

void requireObject(const Json& j, const std::string& where) {
    if (!j.is_object()) badConfig(where + " must be a JSON object");
}

void requireKeys(const Json& j, std::initializer_list<const char*> allowed,
                 const std::string& where) {
    requireObject(j, where);
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known) badConfig("unknown field '" + item.key() + "' in " + where);
    }
}

const Json& requiredField(const Json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) badConfig("missing field '" + std::string(key) + "' in " + where);
    return *it;
}

long asLong(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) badConfig(where + " must be an integer");
    return j.get<long>();
}

double asDouble(const Json& j, const std::string& where) {
    if (!j.is_number()) badConfig(where + " must be a number");
    return j.get<double>();
}

Cplx asComplex(const Json& j, const std::string& where) {
    if (j.is_number()) return Cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Cplx(j[0].get<double>(), j[1].get<double>());
    badConfig(where + " must be a number or an [re, im] pair");
}

Rational asRational(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) {
        try {
            return Rational(j.get<std::string>());
        } catch (const std::exception&) {
            badConfig(where + " is not a valid p/q rational");
        }
    }
    badConfig(where + " must be an integer or a \"p/q\" string");
}

GaussRat asGaussRat(const Json& j, const std::string& where) {
    if (j.is_array()) {
        if (j.size() != 2) badConfig(where + " must be an [re, im] pair");
        return GaussRat(asRational(j[0], where + "[0]"), asRational(j[1], where + "[1]"));
    }
    return GaussRat(asRational(j, where));
}

std::string jsonNumber(double v) {
    // shortest round-trip form keeps the reports diff-able
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

Json pairJson(const PairIndexResult& p) {
    Json out = Json::object();
    out["alpha"] = static_cast<long>(p.alpha);
    out["beta"] = static_cast<long>(p.beta);
    out["index"] = p.index;
    out["rank_gap"] = std::isfinite(p.rankGap) ? Json(p.rankGap) : Json("inf");
    out["ill_conditioned"] = p.illConditioned;
    return out;
}

Json subspaceRouteJson(const SubspaceRoute& r) {
    Json out = pairJson(r.pair);
    out["subspace_dim"] = static_cast<long>(r.subspaceDim);
    out["span_gap"] = std::isfinite(r.span.gap) ? Json(r.span.gap) : Json("inf");
    out["half_window"] = r.halfWindow;
    return out;
}

Json traceRouteJson(const TraceRoute& t) {
    Json out = Json::object();
    out["raw"] = t.raw;
    out["rounded"] = t.rounded;
    out["converged"] = t.converged;
    out["half_window"] = t.halfWindow;
    return out;
}

RunOutcome runSymbolIndex(const ProblemConfig& c, std::ostream& out, std::ostream& diag) {
    requireKeys(c.payload, {"symbol"}, "payload");
    const Json& symJson = requiredField(c.payload, "symbol", "payload");
    RunOutcome outcome;
    if (c.backend == "rational") {
        ExactLaurent sym = exactSymbolFromJson(symJson);
        auto r1 = kappaViaSubspaceExact(sym, c.window);
        auto r2 = kappaViaSubspaceExact(sym, 2 * c.window);
        LaurentSymbol asFloat = sym.toFloat();
        long winding = asFloat.windingNumber();
        bool stabilized = r1.pair.index == r2.pair.index && r1.pair.index == winding;
        outcome.results["winding"] = winding;
        outcome.results["subspace_at_n"] = subspaceRouteJson(r1);
        outcome.results["subspace_at_2n"] = subspaceRouteJson(r2);
        outcome.results["stabilized"] = stabilized;
        outcome.results["value"] = r1.pair.index;
        outcome.exitCode = stabilized ? 0 : 2;
        outcome.curveCsv = windingCurveCsv(asFloat);
        out << "index " << r1.pair.index << (stabilized ? " (stabilized, exact)" : " (UNSTABLE)")
            << "\n";
        if (!stabilized) diag << "exact route disagrees with the winding route\n";
        return outcome;
    }
    LaurentSymbol sym = symbolFromJson(symJson);
    IndexReport rep = kappaReport(sym, c.window, c.tol);
    outcome.results["winding"] = rep.windingRoute;
    outcome.results["subspace_at_n"] = subspaceRouteJson(rep.subspaceAtN);
    outcome.results["subspace_at_2n"] = subspaceRouteJson(rep.subspaceAt2N);
    outcome.results["trace_at_n"] = traceRouteJson(rep.traceAtN);
    outcome.results["trace_at_2n"] = traceRouteJson(rep.traceAt2N);
    outcome.results["stabilized"] = rep.stabilized;
    outcome.results["value"] = rep.value;
    outcome.exitCode = rep.stabilized ? 0 : 2;
    outcome.curveCsv = windingCurveCsv(sym);
    out << "index " << rep.value << (rep.stabilized ? " (stabilized)" : " (UNSTABLE)") << "\n";
    if (!rep.stabilized) diag << rep.describe();
    return outcome;
}

template <class B>
typename B::Matrix generatorsFromJson(const Json& gens, Eigen::Index ambient,
                                      const std::string& where) {
    if (!gens.is_array()) badConfig(where + " must be an array of generators");
    typename B::Matrix m(ambient, static_cast<Eigen::Index>(gens.size()));
    Eigen::Index col = 0;
    for (const auto& g : gens) {
        if (!g.is_array() || static_cast<Eigen::Index>(g.size()) != ambient)
            badConfig(where + " generators must be length-" + std::to_string(ambient) +
                      " arrays");
        for (Eigen::Index row = 0; row < ambient; ++row) {
            const std::string entryWhere = where + " entry";
            if constexpr (std::is_same_v<B, RationalBackend>)
                m(row, col) = asGaussRat(g[static_cast<size_t>(row)], entryWhere);
            else
                m(row, col) = asComplex(g[static_cast<size_t>(row)], entryWhere);
        }
        ++col;
    }
    return m;
}

template <class B>
RunOutcome runPairWith(const ProblemConfig& c, std::ostream& out) {
    long ambient = asLong(requiredField(c.payload, "ambient", "payload"), "payload.ambient");
    if (ambient <= 0) badConfig("payload.ambient must be positive");
    auto gu = generatorsFromJson<B>(requiredField(c.payload, "u", "payload"), ambient,
                                    "payload.u");
    auto gv = generatorsFromJson<B>(requiredField(c.payload, "v", "payload"), ambient,
                                    "payload.v");
    Subspace<B> u = gu.cols() > 0 ? span<B>(gu, c.tol) : zeroSubspace<B>(ambient, c.tol);
    Subspace<B> v = gv.cols() > 0 ? span<B>(gv, c.tol) : zeroSubspace<B>(ambient, c.tol);
    auto pr = pairIndex<B>(u, v, c.tol);
    RunOutcome outcome;
    outcome.results = pairJson(pr);
    outcome.results["dim_u"] = static_cast<long>(u.dim());
    outcome.results["dim_v"] = static_cast<long>(v.dim());
    out << "pair index " << pr.index << " (alpha " << pr.alpha << ", beta " << pr.beta << ")\n";
    return outcome;
}

RunOutcome runPair(const ProblemConfig& c, std::ostream& out) {
    requireKeys(c.payload, {"ambient", "u", "v"}, "payload");
    if (c.backend == "rational") return runPairWith<RationalBackend>(c, out);
    return runPairWith<FloatBackend>(c, out);
}

RunOutcome runBordism(const ProblemConfig& c, std::ostream& out) {
    requireKeys(c.payload, {"domain"}, "payload");
    PlanarDomain dom = domainFromJson(requiredField(c.payload, "domain", "payload"), c.window);
    validateGeometry(dom);
    Correspondence corr = buildCorrespondence(dom, c.tol);
    auto pr = bordismIndex(corr, c.tol);
    RunOutcome outcome;
    outcome.results = pairJson(pr);
    outcome.results["source_dim"] = static_cast<long>(corr.sourceDim());
    outcome.results["target_dim"] = static_cast<long>(corr.targetDim());
    outcome.results["relation_dim"] = static_cast<long>(corr.l.dim());
    out << "bordism index " << pr.index << " (alpha " << pr.alpha << ", beta " << pr.beta
        << ")\n";
    return outcome;
}

RunOutcome runSurface(const ProblemConfig& c, std::ostream& out, std::ostream& diag) {
    requireKeys(c.payload, {"domain", "calibration"}, "payload");
    PlanarDomain dom = domainFromJson(requiredField(c.payload, "domain", "payload"), c.window);
    validateGeometry(dom);
    RunOutcome outcome;
    Calibration cal;
    if (c.payload.contains("calibration")) {
        const Json& cj = c.payload["calibration"];
        requireKeys(cj, {"a", "b"}, "payload.calibration");
        cal.a = asLong(requiredField(cj, "a", "payload.calibration"), "calibration.a");
        cal.b = asLong(requiredField(cj, "b", "payload.calibration"), "calibration.b");
    } else {
        try {
            cal = calibrateConventions(24, c.tol);
        } catch (const calibration_error& e) {
            diag << "calibration failed: " << e.what() << "\n";
            outcome.results["calibration_failed"] = true;
            outcome.exitCode = 2;
            return outcome;
        }
    }
    auto res = verifySurfaceFormula(dom, cal, c.tol);
    outcome.results["calibration"] = Json{{"a", cal.a}, {"b", cal.b}};
    outcome.results["computed"] = res.computed;
    outcome.results["predicted"] = res.predicted;
    outcome.results["match"] = res.match;
    outcome.results["pair"] = pairJson(res.pair);
    outcome.exitCode = res.match ? 0 : 2;
    out << "surface index " << res.computed << ", formula " << res.predicted
        << (res.match ? " (match)" : " (MISMATCH)") << "\n";
    if (!res.match) diag << "surface formula mismatch\n";
    return outcome;
}

RunOutcome runChain(const ProblemConfig& c, std::ostream& out) {
    std::vector<Correspondence> chain;
    if (c.payload.contains("sphere")) {
        requireKeys(c.payload, {"sphere"}, "payload");
        const Json& s = c.payload["sphere"];
        requireKeys(s, {"k1", "k2"}, "payload.sphere");
        long k1 = s.contains("k1") ? asLong(s["k1"], "sphere.k1") : 0;
        long k2 = s.contains("k2") ? asLong(s["k2"], "sphere.k2") : 0;
        chain = sphereChain(k1, k2, c.window, c.tol);
    } else {
        requireKeys(c.payload, {"domains"}, "payload");
        const Json& doms = requiredField(c.payload, "domains", "payload");
        if (!doms.is_array() || doms.empty())
            badConfig("payload.domains must be a non-empty array");
        for (const auto& dj : doms) {
            PlanarDomain dom = domainFromJson(dj, c.window);
            validateGeometry(dom);
            chain.push_back(buildCorrespondence(dom, c.tol));
        }
    }
    auto rep = chainIndex(chain, c.tol);
    RunOutcome outcome;
    Json terms = Json::array();
    for (const auto& t : rep.terms) terms.push_back(t.index);
    outcome.results["terms"] = terms;
    outcome.results["total"] = rep.total;
    outcome.results["composed_index"] = rep.composedIndex;
    outcome.results["defect_total"] = rep.defectTotal;
    outcome.results["witness_dim"] = static_cast<long>(rep.witness.cols());
    outcome.results["final_alpha"] = static_cast<long>(rep.finalPair.alpha);
    out << "chain total " << rep.total << " (" << chain.size() << " pieces, defect "
        << rep.defectTotal << ")\n";
    return outcome;
}

RunOutcome runVerify(const ProblemConfig& c, std::ostream& out) {
    requireKeys(c.payload, {"level"}, "payload");
    std::string level = "quick";
    if (c.payload.contains("level")) {
        const Json& l = c.payload["level"];
        if (!l.is_string()) badConfig("payload.level must be \"quick\" or \"full\"");
        level = l.get<std::string>();
    }
    if (level != "quick" && level != "full")
        badConfig("payload.level must be \"quick\" or \"full\"");
    SuiteOptions opt = level == "full" ? fullSuiteOptions() : quickSuiteOptions();
    opt.tol = c.tol;
    opt.seed = c.seed;
    auto results = runSuite(opt, out);
    int passed = 0;
    Json criteria = Json::array();
    for (const auto& r : results) {
        if (r.pass) ++passed;
        criteria.push_back(Json{{"number", r.number},
                                {"name", r.name},
                                {"pass", r.pass},
                                {"detail", r.detail}});
    }
    out << "verify " << level << ": " << passed << "/" << results.size()
        << " criteria passed\n";
    RunOutcome outcome;
    outcome.results["level"] = level;
    outcome.results["criteria"] = criteria;
    outcome.results["passed"] = passed;
    outcome.results["total"] = static_cast<long>(results.size());
    outcome.exitCode = suiteExitCode(results);
    return outcome;
}

} // namespace

std::string kindName(ProblemKind k) {
    switch (k) {
        case ProblemKind::symbolIndex: return "symbol-index";
        case ProblemKind::pair: return "pair";
        case ProblemKind::bordism: return "bordism";
        case ProblemKind::surface: return "surface";
        case ProblemKind::chain: return "chain";
        case ProblemKind::verify: return "verify";
    }
    return "symbol-index";
}

ProblemKind kindFromName(const std::string& name) {
    if (name == "symbol-index") return ProblemKind::symbolIndex;
    if (name == "pair") return ProblemKind::pair;
    if (name == "bordism") return ProblemKind::bordism;
    if (name == "surface") return ProblemKind::surface;
    if (name == "chain") return ProblemKind::chain;
    if (name == "verify") return ProblemKind::verify;
    badConfig("unknown kind '" + name + "'");
}

ProblemConfig parseConfig(const Json& j) {
    requireKeys(j, {"kind", "window", "tol", "backend", "seed", "payload"}, "config");
    ProblemConfig c;
    const Json& kindField = requiredField(j, "kind", "config");
    if (!kindField.is_string()) badConfig("config.kind must be a string");
    c.kind = kindFromName(kindField.get<std::string>());
    if (j.contains("window")) {
        c.window = asLong(j["window"], "config.window");
        if (c.window < 2) badConfig("config.window must be at least 2");
    }
    if (j.contains("tol")) {
        c.tol = asDouble(j["tol"], "config.tol");
        if (!(c.tol > 0.0)) badConfig("config.tol must be positive");
    }
    if (j.contains("backend")) {
        if (!j["backend"].is_string()) badConfig("config.backend must be a string");
        c.backend = j["backend"].get<std::string>();
        if (c.backend != "float" && c.backend != "rational")
            badConfig("config.backend must be \"float\" or \"rational\"");
    }
    if (j.contains("seed")) {
        long s = asLong(j["seed"], "config.seed");
        if (s < 0) badConfig("config.seed must be non-negative");
        c.seed = static_cast<std::uint32_t>(s);
    }
    if (j.contains("payload")) {
        requireObject(j["payload"], "config.payload");
        c.payload = j["payload"];
    }
    if (c.backend == "rational" && c.kind != ProblemKind::symbolIndex &&
        c.kind != ProblemKind::pair)
        badConfig("backend \"rational\" supports only kinds \"symbol-index\" and \"pair\"");
    return c;
}

Json resolvedConfig(const ProblemConfig& c) {
    Json j = Json::object();
    j["kind"] = kindName(c.kind);
    j["window"] = c.window;
    j["tol"] = c.tol;
    j["backend"] = c.backend;
    j["seed"] = c.seed;
    j["payload"] = c.payload.is_null() ? Json::object() : c.payload;
    return j;
}

Json symbolToJson(const LaurentSymbol& s) {
    Json terms = Json::array();
    for (const auto& [deg, block] : s.terms()) {
        Json rows = Json::array();
        for (Eigen::Index r = 0; r < block.rows(); ++r) {
            Json row = Json::array();
            for (Eigen::Index c = 0; c < block.cols(); ++c)
                row.push_back(Json::array({block(r, c).real(), block(r, c).imag()}));
            rows.push_back(row);
        }
        terms.push_back(Json{{"degree", deg}, {"block", rows}});
    }
    return Json{{"channels", s.channels()}, {"terms", terms}};
}

namespace {

template <class Matrix, class EntryParser>
std::vector<std::pair<long, Matrix>> termsFromJson(const Json& j, EntryParser&& entry,
                                                   int& channelsOut) {
    requireKeys(j, {"channels", "terms"}, "symbol");
    long ch = asLong(requiredField(j, "channels", "symbol"), "symbol.channels");
    if (ch < 1 || ch > 64) badConfig("symbol.channels must be in [1, 64]");
    channelsOut = static_cast<int>(ch);
    const Json& terms = requiredField(j, "terms", "symbol");
    if (!terms.is_array()) badConfig("symbol.terms must be an array");
    std::vector<std::pair<long, Matrix>> out;
    for (const auto& t : terms) {
        requireKeys(t, {"degree", "block"}, "symbol term");
        long deg = asLong(requiredField(t, "degree", "symbol term"), "term.degree");
        const Json& block = requiredField(t, "block", "symbol term");
        if (!block.is_array() || static_cast<long>(block.size()) != ch)
            badConfig("term.block must have one row per channel");
        Matrix m(ch, ch);
        for (long r = 0; r < ch; ++r) {
            const Json& row = block[static_cast<size_t>(r)];
            if (!row.is_array() || static_cast<long>(row.size()) != ch)
                badConfig("term.block rows must have one entry per channel");
            for (long c = 0; c < ch; ++c)
                m(r, c) = entry(row[static_cast<size_t>(c)]);
        }
        out.emplace_back(deg, std::move(m));
    }
    return out;
}

} // namespace

LaurentSymbol symbolFromJson(const Json& j) {
    int ch = 0;
    auto terms = termsFromJson<MatrixC>(
        j, [](const Json& e) { return asComplex(e, "block entry"); }, ch);
    return LaurentSymbol::fromTerms(ch, std::move(terms));
}

ExactLaurent exactSymbolFromJson(const Json& j) {
    int ch = 0;
    auto terms = termsFromJson<ExactMatrix>(
        j, [](const Json& e) { return asGaussRat(e, "block entry"); }, ch);
    return ExactLaurent::fromTerms(ch, std::move(terms));
}

Json domainToJson(const PlanarDomain& d) {
    Json circles = Json::array();
    for (const auto& c : d.circles)
        circles.push_back(
            Json{{"center", Json::array({c.center.real(), c.center.imag()})},
                 {"radius", c.radius},
                 {"role", c.role == CircleRole::incoming ? "incoming" : "outgoing"},
                 {"cut", c.cut}});
    Json out = Json::object();
    out["kind"] = d.kind == DomainKind::bounded ? "bounded" : "exterior";
    out["circles"] = circles;
    if (d.taylorDepth > 0) out["taylor_depth"] = d.taylorDepth;
    if (d.principalDepth > 0) out["principal_depth"] = d.principalDepth;
    return out;
}

PlanarDomain domainFromJson(const Json& j, long halfWindow) {
    requireKeys(j, {"kind", "circles", "taylor_depth", "principal_depth"}, "domain");
    PlanarDomain d;
    const Json& kind = requiredField(j, "kind", "domain");
    if (!kind.is_string()) badConfig("domain.kind must be a string");
    std::string k = kind.get<std::string>();
    if (k == "bounded")
        d.kind = DomainKind::bounded;
    else if (k == "exterior")
        d.kind = DomainKind::exterior;
    else
        badConfig("domain.kind must be \"bounded\" or \"exterior\"");
    const Json& circles = requiredField(j, "circles", "domain");
    if (!circles.is_array() || circles.empty())
        badConfig("domain.circles must be a non-empty array");
    for (const auto& cj : circles) {
        requireKeys(cj, {"center", "radius", "role", "cut"}, "circle");
        BoundaryCircle c;
        c.center = asComplex(requiredField(cj, "center", "circle"), "circle.center");
        c.radius = asDouble(requiredField(cj, "radius", "circle"), "circle.radius");
        const Json& role = requiredField(cj, "role", "circle");
        if (!role.is_string()) badConfig("circle.role must be a string");
        std::string rs = role.get<std::string>();
        if (rs == "incoming")
            c.role = CircleRole::incoming;
        else if (rs == "outgoing")
            c.role = CircleRole::outgoing;
        else
            badConfig("circle.role must be \"incoming\" or \"outgoing\"");
        if (cj.contains("cut")) c.cut = asLong(cj["cut"], "circle.cut");
        c.window = symmetricWindow(halfWindow);
        d.circles.push_back(c);
    }
    if (j.contains("taylor_depth"))
        d.taylorDepth = asLong(j["taylor_depth"], "domain.taylor_depth");
    if (j.contains("principal_depth"))
        d.principalDepth = asLong(j["principal_depth"], "domain.principal_depth");
    return d;
}

std::string windingCurveCsv(const LaurentSymbol& phi) {
    auto curve = phi.windingCurve();
    std::ostringstream os;
    os << "theta,re_det,im_det,unwrapped_phase\n";
    const double twoPi = 6.283185307179586476925286766559;
    for (Eigen::Index i = 0; i < curve.gridSize; ++i) {
        double theta = twoPi * static_cast<double>(i) / static_cast<double>(curve.gridSize);
        size_t t = static_cast<size_t>(i);
        os << jsonNumber(theta) << ',' << jsonNumber(curve.det[t].real()) << ','
           << jsonNumber(curve.det[t].imag()) << ',' << jsonNumber(curve.phase[t]) << '\n';
    }
    return os.str();
}

RunOutcome runProblem(const ProblemConfig& c, std::ostream& out, std::ostream& diag) {
    switch (c.kind) {
        case ProblemKind::symbolIndex: return runSymbolIndex(c, out, diag);
        case ProblemKind::pair: return runPair(c, out);
        case ProblemKind::bordism: return runBordism(c, out);
        case ProblemKind::surface: return runSurface(c, out, diag);
        case ProblemKind::chain: return runChain(c, out);
        case ProblemKind::verify: return runVerify(c, out);
    }
    badConfig("unhandled kind");
}

} // namespace fredpair
