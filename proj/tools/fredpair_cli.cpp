#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fredpair/config.hpp"
#include "fredpair/errors.hpp"
#include "fredpair/kernels.hpp"

namespace {

std::string isoTimestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    fredpair::applyThreadEnv();

    CLI::App app{"Fredholm pair indices for loop symbols and planar bordisms"};
    app.require_subcommand(1);

    std::string configPath;
    std::string outDir = ".";
    std::string backend;
    std::string level;
    long window = 0;
    double tol = 0.0;
    long long seed = 0;

    const std::vector<std::pair<std::string, std::string>> kinds = {
        {"symbol-index", "index of a matrix Laurent symbol by all routes"},
        {"pair", "index of a pair of subspaces from generators"},
        {"bordism", "index of a planar-domain correspondence"},
        {"surface", "check a planar domain against the genus-zero index formula"},
        {"chain", "termwise and composed indices of a domain chain"},
        {"verify", "run the invariant battery"},
    };
    for (const auto& [name, desc] : kinds) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", configPath, "path to a JSON problem config");
        sub->add_option("--window", window, "half-window size override");
        sub->add_option("--tol", tol, "tolerance override");
        sub->add_option("--backend", backend, "float or rational")
            ->check(CLI::IsMember({"float", "rational"}));
        sub->add_option("--out", outDir, "directory for report files (default .)");
        sub->add_option("--seed", seed, "seed override for randomized corpora");
        if (name == "verify")
            sub->add_option("--level", level, "quick or full (default quick)")
                ->check(CLI::IsMember({"quick", "full"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string kind = sub->get_name();

    fredpair::Json cfgJson = fredpair::Json::object();
    if (!configPath.empty()) {
        std::ifstream in(configPath);
        if (!in) {
            std::cerr << "cannot open config file: " << configPath << "\n";
            return 1;
        }
        try {
            in >> cfgJson;
        } catch (const std::exception& e) {
            std::cerr << "config is not valid JSON: " << e.what() << "\n";
            return 1;
        }
    }

    try {
        if (!cfgJson.is_object())
            throw fredpair::argument_error("config: root must be a JSON object");
        if (cfgJson.contains("kind") && cfgJson["kind"] != kind)
            throw fredpair::argument_error("config: kind " + cfgJson["kind"].dump() +
                                           " does not match subcommand '" + kind + "'");
        cfgJson["kind"] = kind;
        if (sub->count("--window") > 0) cfgJson["window"] = window;
        if (sub->count("--tol") > 0) cfgJson["tol"] = tol;
        if (sub->count("--backend") > 0) cfgJson["backend"] = backend;
        if (sub->count("--seed") > 0) cfgJson["seed"] = seed;
        if (kind == "verify" && sub->count("--level") > 0) {
            if (!cfgJson.contains("payload")) cfgJson["payload"] = fredpair::Json::object();
            cfgJson["payload"]["level"] = level;
        }

        fredpair::ProblemConfig cfg = fredpair::parseConfig(cfgJson);
        auto t0 = std::chrono::steady_clock::now();
        fredpair::RunOutcome outcome = fredpair::runProblem(cfg, std::cout, std::cerr);
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                             .count();

        fredpair::Json report = fredpair::Json::object();
        report["config"] = fredpair::resolvedConfig(cfg);
        report["timestamp"] =
            fredpair::Json{{"written", isoTimestamp()}, {"elapsed_seconds", elapsed}};
        report["results"] = outcome.results;

        std::filesystem::create_directories(outDir);
        const auto reportPath = std::filesystem::path(outDir) / "report.json";
        std::ofstream rep(reportPath);
        if (!rep) {
            std::cerr << "cannot write " << reportPath.string() << "\n";
            return 1;
        }
        rep << report.dump(2) << "\n";
        if (!outcome.curveCsv.empty()) {
            const auto csvPath = std::filesystem::path(outDir) / "winding_curve.csv";
            std::ofstream csv(csvPath);
            if (!csv) {
                std::cerr << "cannot write " << csvPath.string() << "\n";
                return 1;
            }
            csv << outcome.curveCsv;
        }
        std::cerr << "report: " << reportPath.string() << "\n";
        return outcome.exitCode;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
