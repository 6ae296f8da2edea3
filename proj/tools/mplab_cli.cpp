#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mplab/experiment/runner.hpp"
#include "mplab/version.hpp"

namespace ex = mplab::experiment;

namespace {

struct Overrides {
    std::string config;
    std::vector<long> n;
    long replicas = -1;
    std::string seed;
    std::string dist;
    std::string out;
    int workers = -1;
    std::string grid;
};

ex::ExperimentConfig build_config(ex::Kind kind, const Overrides& o) {
    ex::ExperimentConfig cfg;
    if (!o.config.empty()) cfg = ex::load_config(o.config);
    cfg.kind = kind;
    if (!o.n.empty()) cfg.N = o.n;
    if (o.replicas >= 0) cfg.replicas = o.replicas;
    if (!o.seed.empty()) {
        try {
            cfg.seed = std::stoull(o.seed);
        } catch (const std::exception&) {
            throw ex::ConfigError("--seed: not an unsigned integer");
        }
    }
    if (!o.dist.empty()) {
        try {
            cfg.dist.kind = mplab::ensemble::parse_kind(o.dist);
        } catch (const std::exception& e) {
            throw ex::ConfigError(std::string("--dist: ") + e.what());
        }
    }
    if (!o.out.empty()) cfg.out = o.out;
    if (o.workers >= 0) cfg.workers = o.workers;
    if (!o.grid.empty()) {
        try {
            cfg.grid = mplab::GridSpec::parse(o.grid);
        } catch (const std::exception& e) {
            throw ex::ConfigError(std::string("--grid: ") + e.what());
        }
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Marchenko-Pastur local law laboratory"};
    app.set_version_flag("--version", std::string(mplab::version));
    app.require_subcommand(1);

    Overrides o;
    for (ex::Kind kind : ex::all_kinds()) {
        auto* sub = app.add_subcommand(ex::to_string(kind), "run the " + ex::to_string(kind) + " experiment");
        sub->add_option("--config", o.config, "config file");
        sub->add_option("--n", o.n, "matrix sizes")->delimiter(',');
        sub->add_option("--replicas", o.replicas, "replica count");
        sub->add_option("--seed", o.seed, "master seed");
        sub->add_option("--dist", o.dist, "gaussian | rademacher | heavy-tail");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--workers", o.workers, "worker threads (MPLAB_WORKERS overrides)");
        sub->add_option("--grid", o.grid, "theta grid, e.g. \"E=2,-0.5;eta=over_n:20\"");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    ex::Kind kind = ex::parse_kind(app.get_subcommands().front()->get_name());
    ex::ExperimentConfig cfg;
    try {
        cfg = build_config(kind, o);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    ex::RunOutcome r = ex::run_experiment(cfg);
    if (r.exit_code == 0) {
        std::cout << r.message << '\n';
        for (const auto& f : r.files) std::cout << "  " << f.string() << '\n';
    } else {
        std::cerr << (r.exit_code == 1 ? "config error: " : "run failed: ") << r.message << '\n';
    }
    return r.exit_code;
}
