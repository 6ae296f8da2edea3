#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "mplab/experiment/config.hpp"
#include "mplab/experiment/csv.hpp"
#include "mplab/experiment/runner.hpp"

using namespace mplab;
using namespace mplab::experiment;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("mplab_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(MPLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig small_config(Kind kind, const fs::path& out) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.N = {8, 12};
    cfg.replicas = 3;
    cfg.seed = 5;
    cfg.grid = GridSpec::parse("E=2,-0.5;eta=over_n:4");
    cfg.samples = 10000;
    cfg.orders = {2, 4};
    cfg.out = out.string();
    return cfg;
}

}  // namespace

TEST(Config, ParseSections) {
    const char* text = R"(# demo
[experiment]
kind = law-scan
n = 32, 64
replicas = 25
seed = 9

[distribution]
kind = heavy-tail
tail_index = 7
D = 1.5

[grid]
E = 2, -0.5
eta = over_n:20

[domain]
c = 1
M = 2

[calibration]
bR_C = 3

[thresholds]
K = 1, 4
)";
    auto cfg = parse_config(text);
    EXPECT_EQ(cfg.kind, Kind::law_scan);
    EXPECT_EQ(cfg.N, (std::vector<long>{32, 64}));
    EXPECT_EQ(cfg.replicas, 25);
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.dist.kind, ensemble::Kind::heavy_tail);
    EXPECT_EQ(cfg.dist.tail_index, 7.0);
    EXPECT_EQ(cfg.grid, GridSpec::parse("E=2,-0.5;eta=over_n:20"));
    EXPECT_EQ(cfg.domain.M, 2.0);
    EXPECT_EQ(cfg.calibration.at("bR_C"), 3.0);
    EXPECT_EQ(cfg.K, (std::vector<double>{1.0, 4.0}));
    EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, LineNumberedErrors) {
    try {
        parse_config("[experiment]\nkind = identities\nbogus = 1\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 3);
        EXPECT_TRUE(std::string(e.what()).starts_with("line 3: ")) << e.what();
    }
    try {
        parse_config("[experiment]\n\nreplicas = many\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 3);
    }
    EXPECT_THROW(parse_config("[nowhere]\n"), ConfigError);
    EXPECT_THROW(parse_config("kind = identities\n"), ConfigError);
    EXPECT_THROW(parse_config("[experiment]\nkind = sideways\n"), ConfigError);
}

TEST(Config, JsonRoundTrip) {
    auto cfg = parse_config("[experiment]\nkind = counting\nn = 16\n[counting]\nE = 0.5, 2\n");
    cfg.calibration["extra"] = 0.25;
    auto back = config_from_json(config_to_json(cfg));
    EXPECT_EQ(back, cfg);
    auto wrapped = nlohmann::json{{"config", nlohmann::json::parse(config_to_json(cfg))}};
    EXPECT_EQ(config_from_json(wrapped.dump()), cfg);
    EXPECT_THROW(config_from_json("{not json"), ConfigError);
}

TEST(Config, Validation) {
    ExperimentConfig cfg;
    cfg.grid.E.clear();
    EXPECT_THROW(cfg.validate(), ConfigError);
    ExperimentConfig bad_n;
    bad_n.N = {};
    EXPECT_THROW(bad_n.validate(), ConfigError);
    for (Kind k : all_kinds()) EXPECT_EQ(parse_kind(to_string(k)), k);
}

TEST(Csv, FormatNumberRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
        std::string s = format_number(v);
        EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
    }
    EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Run, IdentitiesResiduals) {
    auto dir = fresh_dir("identities");
    ExperimentConfig cfg = small_config(Kind::identities, dir);
    cfg.N = {8, 16, 32};
    cfg.replicas = 5;
    auto r = run_experiment(cfg);
    ASSERT_EQ(r.exit_code, 0) << r.message;
    for (long N : cfg.N) {
        auto rows = read_csv(dir / ("identities-" + std::to_string(N) + "-5.csv"));
        ASSERT_GT(rows.size(), 1u);
        EXPECT_EQ(rows[0], headers::identities);
        double worst = 0.0;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i][13] != "1" || rows[i][11].empty()) continue;
            worst = std::max(worst, std::stod(rows[i][11]));
        }
        EXPECT_LE(worst, 1e-9) << N;
    }
    EXPECT_TRUE(fs::exists(dir / "identities-5-summary.json"));
}

TEST(Run, EmptyGridIsValidationFailure) {
    auto dir = fresh_dir("empty");
    ExperimentConfig cfg = small_config(Kind::mp_eval, dir);
    cfg.grid.E.clear();
    auto r = run_experiment(cfg);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_TRUE(r.files.empty());
}

TEST(Run, DeterministicAcrossRerunsAndWorkers) {
    for (Kind kind : {Kind::law_scan, Kind::rigidity, Kind::inequalities}) {
        auto d1 = fresh_dir("det1"), d2 = fresh_dir("det2"), d3 = fresh_dir("det3");
        ExperimentConfig cfg = small_config(kind, d1);
        ASSERT_EQ(run_experiment(cfg).exit_code, 0);
        cfg.out = d2.string();
        ASSERT_EQ(run_experiment(cfg).exit_code, 0);
        cfg.out = d3.string();
        cfg.workers = 8;
        ASSERT_EQ(run_experiment(cfg).exit_code, 0);
        int csvs = 0;
        for (const auto& e : fs::directory_iterator(d1)) {
            if (e.path().extension() != ".csv") continue;
            ++csvs;
            auto name = e.path().filename();
            EXPECT_EQ(slurp(e.path()), slurp(d2 / name)) << name;
            EXPECT_EQ(slurp(e.path()), slurp(d3 / name)) << name;
        }
        EXPECT_GT(csvs, 0) << to_string(kind);
    }
}

TEST(Run, HeadersAndSummary) {
    auto dir = fresh_dir("headers");
    ExperimentConfig cfg = small_config(Kind::rigidity, dir);
    ASSERT_EQ(run_experiment(cfg).exit_code, 0);
    std::string first = slurp(dir / "rigidity-8-5.csv").substr(0, slurp(dir / "rigidity-8-5.csv").find('\n'));
    EXPECT_EQ(first, "N,dist,replica,a,lambda_a,gamma_a,stat_bulk,stat_edge");

    cfg.kind = Kind::law_scan;
    ASSERT_EQ(run_experiment(cfg).exit_code, 0);
    auto law = slurp(dir / "law-scan-12-5.csv");
    EXPECT_EQ(law.substr(0, law.find('\n')), "E,eta,N,dist,replicas,stat_name,value,stderr");

    auto summary = slurp(dir / "law-scan-5-summary.json");
    EXPECT_EQ(config_from_json(summary), cfg);
    auto j = nlohmann::json::parse(summary);
    for (const char* key : {"config", "version", "generated_at", "wall_clock_seconds", "workers_used",
                            "calibration", "replica_seed_rule", "files"})
        EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Run, IoFailure) {
    auto dir = fresh_dir("io");
    std::ofstream(dir / "blocker") << "x";
    ExperimentConfig cfg = small_config(Kind::mp_eval, dir / "blocker" / "sub");
    EXPECT_EQ(run_experiment(cfg).exit_code, 2);
}

TEST(Run, WorkerEnvironmentOverride) {
    ExperimentConfig cfg;
    cfg.workers = 2;
    ::unsetenv("MPLAB_WORKERS");
    EXPECT_EQ(effective_workers(cfg), 2);
    ::setenv("MPLAB_WORKERS", "5", 1);
    EXPECT_EQ(effective_workers(cfg), 5);
    ::setenv("MPLAB_WORKERS", "zero", 1);
    EXPECT_EQ(effective_workers(cfg), 2);
    ::unsetenv("MPLAB_WORKERS");
}

TEST(Cli, ExitCodes) {
    auto dir = fresh_dir("cli");
    EXPECT_EQ(run_cli("--help"), 0);
    EXPECT_EQ(run_cli("mp-eval --grid \"E=1,2;eta=fixed:0.5\" --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "mp-eval-64-1.csv"));
    EXPECT_EQ(run_cli("mp-eval --grid \"E=;eta=fixed:0.5\" --out " + dir.string()), 1);
    std::ofstream(dir / "bad.ini") << "[experiment]\nkind = identities\nwhat = 1\n";
    EXPECT_EQ(run_cli("identities --config " + (dir / "bad.ini").string()), 1);
    EXPECT_EQ(run_cli("no-such-kind"), 1);
    std::ofstream(dir / "blocker") << "x";
    EXPECT_EQ(run_cli("mp-eval --out " + (dir / "blocker" / "sub").string()), 2);
    EXPECT_EQ(run_cli("identities --n 8,16 --replicas 2 --seed 3 --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "identities-16-3.csv"));
}
