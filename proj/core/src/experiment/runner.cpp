#include "mplab/experiment/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "mplab/counting.hpp"
#include "mplab/fluctuation_scan.hpp"
#include "mplab/identities.hpp"
#include "mplab/moments.hpp"
#include "mplab/mp_analytics.hpp"
#include "mplab/parallel.hpp"
#include "mplab/pleijel.hpp"
#include "mplab/q_recursion.hpp"
#include "mplab/spectrum.hpp"
#include "mplab/stats.hpp"
#include "mplab/version.hpp"

namespace mplab::experiment {

namespace {

using json = nlohmann::json;
using Row = std::vector<std::string>;
using Rows = std::vector<Row>;

constexpr std::uint64_t index_stream = 0x1D5E75ULL;

std::string num(double v) { return format_number(v); }
std::string str(long v) { return std::to_string(v); }
std::string str(std::uint64_t v) { return std::to_string(v); }

struct Part {
    Rows rows;
    double worst_residual = 0.0;
    double min_slack = std::numeric_limits<double>::infinity();
    double extra = 0.0;
};

Table collect(const std::vector<std::string>& header, std::vector<Part>& parts, double& worst,
              double& min_slack) {
    Table t;
    t.header = header;
    for (auto& p : parts) {
        worst = std::max(worst, p.worst_residual);
        min_slack = std::min(min_slack, p.min_slack);
        for (auto& r : p.rows) t.add(std::move(r));
    }
    return t;
}

std::vector<int> draw_labels(rng::SplitMix64& gen, long N, std::size_t count,
                             const std::vector<int>& avoid) {
    std::vector<int> out;
    while (out.size() < count) {
        int label = static_cast<int>(gen.next() % static_cast<std::uint64_t>(N)) + 1;
        if (std::find(out.begin(), out.end(), label) != out.end()) continue;
        if (std::find(avoid.begin(), avoid.end(), label) != avoid.end()) continue;
        out.push_back(label);
    }
    std::sort(out.begin(), out.end());
    return out;
}

[[noreturn]] void violation(const std::string& what, const json& record) {
    throw InvariantViolation(what, record.dump());
}

double cal(const ExperimentConfig& cfg, const std::string& name, double fallback) {
    auto it = cfg.calibration.find(name);
    return it == cfg.calibration.end() ? fallback : it->second;
}

resolvent::ResolventOptions dense_options(const ExperimentConfig& cfg) {
    resolvent::ResolventOptions ro;
    ro.dense_cap = cfg.dense_cap;
    return ro;
}

std::size_t replicas_of(const ExperimentConfig& cfg) { return static_cast<std::size_t>(cfg.replicas); }

Table run_identities(const ExperimentConfig& cfg, long N, int workers, ResultSet& rs) {
    const auto grid = cfg.grid.resolve(N, cfg.domain);
    const auto ro = dense_options(cfg);
    auto parts = parallel::map_indexed(replicas_of(cfg), workers, [&](std::size_t r) {
        const std::uint64_t seed = rng::replica_seed(cfg.seed, N, static_cast<long>(r));
        auto X = ensemble::sample_matrix(N, cfg.dist, seed);
        rng::SplitMix64 gen(rng::derive_seed(seed, index_stream));
        const std::uint64_t cap = N >= 6 ? 2 : 0;
        resolvent::IndexSets sets;
        sets.J1 = draw_labels(gen, N, gen.next() % (cap + 1), {});
        sets.J2 = draw_labels(gen, N, gen.next() % (cap + 1), {});
        std::vector<int> removed = sets.J1;
        removed.insert(removed.end(), sets.J2.begin(), sets.J2.end());
        auto kl = draw_labels(gen, N, 2, removed);
        if (gen.next() & 1) std::swap(kl[0], kl[1]);
        Part part;
        for (const auto& p : grid) {
            auto rep = resolvent::identity_suite(X, p, sets, kl[0], kl[1], ro);
            for (const auto& rec : rep.records) {
                part.rows.push_back({str(N), str(static_cast<long>(r)), str(seed), cfg.dist.tag(),
                                     num(p.E), num(p.eta), resolvent::format_labels(sets.J1),
                                     resolvent::format_labels(sets.J2), str(static_cast<long>(kl[0])),
                                     str(static_cast<long>(kl[1])), rec.identity, num(rec.residual),
                                     num(rec.slack), rec.asserted ? "1" : "0"});
                if (!rec.asserted) continue;
                if (!std::isnan(rec.residual)) part.worst_residual = std::max(part.worst_residual, rec.residual);
                if (!std::isnan(rec.slack)) part.min_slack = std::min(part.min_slack, rec.slack);
                bool bad = (!std::isnan(rec.residual) && !(rec.residual <= 1e-9)) ||
                           (!std::isnan(rec.slack) && !(rec.slack >= -1e-10));
                if (bad) {
                    violation("identity check failed: " + rec.identity,
                              {{"identity", rec.identity}, {"N", N}, {"theta", {p.E, p.eta}},
                               {"J1", sets.J1}, {"J2", sets.J2}, {"residual", rec.residual},
                               {"slack", rec.slack}, {"seed", seed}});
                }
            }
        }
        return part;
    });
    double worst = 0.0;
    double slack = std::numeric_limits<double>::infinity();
    Table t = collect(headers::identities, parts, worst, slack);
    rs.summary["max_residual_N" + str(N)] = worst;
    rs.summary["min_slack_N" + str(N)] = slack;
    return t;
}

Table run_qf(const ExperimentConfig& cfg, long N, int workers, ResultSet& rs) {
    const auto grid = cfg.grid.resolve(N, cfg.domain);
    const auto ro = dense_options(cfg);
    auto parts = parallel::map_indexed(replicas_of(cfg), workers, [&](std::size_t r) {
        const std::uint64_t seed = rng::replica_seed(cfg.seed, N, static_cast<long>(r));
        auto X = ensemble::sample_matrix(N, cfg.dist, seed);
        Part part;
        for (const auto& p : grid) {
            auto q = resolvent::quadratic_forms(X, p, {}, cfg.k, cfg.l, ro);
            auto base = [&](const std::string& name, cplx v) {
                part.rows.push_back({str(N), str(static_cast<long>(r)), str(seed), cfg.dist.tag(),
                                     num(p.E), num(p.eta), str(static_cast<long>(cfg.k)),
                                     str(static_cast<long>(cfg.l)), name, num(v.real()), num(v.imag())});
            };
            base("upsilon", q.upsilon);
            base("Y", q.Y);
            base("Tk", q.Tk);
            base("curlyTk", q.curlyTk);
            base("eps1", q.eps1);
            base("eps2", q.eps2);
            base("Kkl", q.Kkl);
            base("curlyKkl", q.curlyKkl);
            const std::pair<const char*, double> checks[] = {
                {"decomposition_residual", q.decomposition_residual},
                {"K_factorization_residual", q.K_factorization_residual},
                {"curlyK_factorization_residual", q.curlyK_factorization_residual},
                {"schur_G_residual", q.schur_G_residual},
                {"schur_curlyG_residual", q.schur_curlyG_residual}};
            for (const auto& [name, v] : checks) {
                base(name, v);
                part.worst_residual = std::max(part.worst_residual, v);
                if (!(v <= 1e-9)) {
                    violation(std::string("quadratic form check failed: ") + name,
                              {{"identity", name}, {"N", N}, {"theta", {p.E, p.eta}}, {"J1", json::array()},
                               {"J2", json::array()}, {"residual", v}, {"seed", seed}});
                }
            }
        }
        return part;
    });
    double worst = 0.0;
    double slack = std::numeric_limits<double>::infinity();
    Table t = collect(headers::qf, parts, worst, slack);
    rs.summary["max_residual_N" + str(N)] = worst;
    return t;
}

Table run_law_scan(const ExperimentConfig& cfg, long N, int workers, ResultSet& rs) {
    locallaw::ScanOptions opts;
    opts.K = cfg.K;
    opts.bR_C = cal(cfg, "bR_C", calibration::bR_C);
    opts.domain = cfg.domain;
    opts.dense_cap = cfg.dense_cap;
    opts.workers = workers;
    const auto grid = cfg.grid.resolve(N, cfg.domain);
    auto stats = locallaw::fluctuation_scan(N, cfg.dist, cfg.seed, cfg.replicas, grid, opts);
    Table t;
    t.header = headers::law_scan;
    for (const auto& s : stats) {
        t.add({num(s.theta.E), num(s.theta.eta), str(s.N), s.dist, str(s.replicas), s.stat_name,
               num(s.value), num(s.stderr_value)});
        if (s.stat_name == "neta_abs_lambda_median") {
            rs.summary["median_neta_abs_lambda_N" + str(N) + "_E" + num(s.theta.E)] = s.value;
        }
        if (s.stat_name == "quad_residual_max" && !(s.value <= 1e-9)) {
            violation("quadratic relation failed in law scan",
                      {{"identity", "quadratic_relation"}, {"N", N}, {"theta", {s.theta.E, s.theta.eta}},
                       {"residual", s.value}});
        }
    }
    return t;
}

Table run_q_recursion(const ExperimentConfig& cfg, long N, int workers, ResultSet& rs) {
    const auto grid = cfg.grid.resolve(N, cfg.domain);
    const auto ro = dense_options(cfg);
    auto parts = parallel::map_indexed(replicas_of(cfg), workers, [&](std::size_t r) {
        const std::uint64_t seed = rng::replica_seed(cfg.seed, N, static_cast<long>(r));
        auto X = ensemble::sample_matrix(N, cfg.dist, seed);
        Part part;
        for (const auto& p : grid) {
            auto rep = locallaw::q_recursion_check(X, p, {}, cfg.k, cfg.levels, ro);
            for (const auto& lv : rep.levels) {
                const double nan = std::numeric_limits<double>::quiet_NaN();
                part.rows.push_back({str(N), str(static_cast<long>(r)), str(seed), cfg.dist.tag(),
                                     num(p.E), num(p.eta), str(static_cast<long>(lv.nu)), num(lv.Q),
                                     num(lv.Qhat), num(lv.has_next ? lv.decomposition_residual : nan),
                                     num(lv.has_next ? lv.arr_min_slack : nan),
                                     num(lv.has_next ? lv.cs_min_slack : nan)});
                if (!lv.has_next) continue;
                part.worst_residual = std::max(part.worst_residual, lv.decomposition_residual);
                part.min_slack = std::min(part.min_slack, lv.cs_min_slack);
                if (lv.nu <= 2) part.min_slack = std::min(part.min_slack, lv.arr_min_slack);
                bool bad = !(lv.decomposition_residual <= 1e-9) || !(lv.cs_min_slack >= -1e-10) ||
                           (lv.nu <= 2 && !(lv.arr_min_slack >= -1e-10));
                if (bad) {
                    violation("q recursion check failed at level " + std::to_string(lv.nu),
                              {{"identity", "q_recursion"}, {"N", N}, {"theta", {p.E, p.eta}},
                               {"nu", lv.nu}, {"residual", lv.decomposition_residual},
                               {"slack", std::min(lv.arr_min_slack, lv.cs_min_slack)}, {"seed", seed}});
                }
            }
        }
        return part;
    });
    double worst = 0.0;
    double slack = std::numeric_limits<double>::infinity();
    Table t = collect(headers::q_recursion, parts, worst, slack);
    rs.summary["max_residual_N" + str(N)] = worst;
    rs.summary["min_slack_N" + str(N)] = slack;
    return t;
}

Table run_pleijel(const ExperimentConfig& cfg, long N, int workers, ResultSet& rs) {
    const auto grid = cfg.grid.resolve(N, cfg.domain);
    auto parts = parallel::map_indexed(replicas_of(cfg), workers, [&](std::size_t r) {
        const std::uint64_t seed = rng::replica_seed(cfg.seed, N, static_cast<long>(r));
        auto spec = resolvent::compute_spectrum(ensemble::sample_matrix(N, cfg.dist, seed));
        auto m = counting::AtomicTransform::from_spectrum(spec.eigenvalues, N);
        Part part;
        for (const auto& p : grid) {
            auto res = counting::pleijel_count(m, p.E, p.eta, cfg.left_anchor, cfg.contour_Q);
            double direct = counting::counting_function(spec.eigenvalues, N, p.E);
            double scaled = static_cast<double>(N) * std::abs(res.estimate - direct);
            part.extra += scaled <= 0.5 ? 1.0 : 0.0;
            part.rows.push_back({str(N), str(static_cast<long>(r)), str(seed), cfg.dist.tag(), num(p.E),
                                 num(p.eta), num(res.estimate), num(res.raw), num(res.correction),
                                 num(res.remainder), num(direct), num(scaled)});
        }
        return part;
    });
    double hits = 0.0;
    for (const auto& p : parts) hits += p.extra;
    double worst = 0.0;
    double slack = std::numeric_limits<double>::infinity();
    Table t = collect(headers::pleijel, parts, worst, slack);
    rs.summary["fraction_within_half_over_N_N" + str(N)] =
        hits / static_cast<double>(parts.size() * grid.size());
    return t;
}

std::vector<std::vector<double>> spectra_of(const ExperimentConfig& cfg, long N, int workers) {
    auto samples = resolvent::replica_spectra(N, cfg.dist, cfg.seed, cfg.replicas, workers);
    std::vector<std::vector<double>> out;
    out.reserve(samples.size());
    for (auto& s : samples) out.push_back(std::move(s.eigenvalues));
    return out;
}

Table run_counting(const ExperimentConfig& cfg, long N, int workers, ResultSet& rs) {
    auto table = counting::counting_deviation(spectra_of(cfg, N, workers), N, cfg.counting_E);
    Table t;
    t.header = headers::counting;
    for (const auto& r : table.rows) t.add({str(r.N), num(r.E), r.stat, r.quantile, num(r.value)});
    rs.summary["sup_normalized_q95_N" + str(N)] = stats::quantile(table.sup_normalized, 0.95);
    return t;
}

Table run_rigidity(const ExperimentConfig& cfg, long N, int workers, ResultSet& rs) {
    auto spectra = spectra_of(cfg, N, workers);
    const auto gamma = counting::classical_locations(N, (N + 1) / 2);
    Table t;
    t.header = headers::rigidity;
    std::vector<double> bulk, edge;
    for (std::size_t r = 0; r < spectra.size(); ++r) {
        auto report = counting::rigidity_report(spectra[r], N, gamma);
        for (const auto& e : report) {
            t.add({str(N), cfg.dist.tag(), str(static_cast<long>(r)), str(e.a), num(e.lambda_a),
                   num(e.gamma_a), num(e.stat_bulk), num(e.stat_edge)});
        }
        auto s = counting::summarize_rigidity(report, N);
        bulk.push_back(s.max_bulk);
        edge.push_back(s.hard_edge_scaled);
    }
    rs.summary["max_bulk_q95_N" + str(N)] = stats::quantile(bulk, 0.95);
    rs.summary["hard_edge_median_N" + str(N)] = stats::median(edge);
    return t;
}

Table run_mp_eval(const ExperimentConfig& cfg, long N) {
    Table t;
    t.header = headers::mp_eval;
    for (const auto& p : cfg.grid.resolve(N, cfg.domain)) {
        cplx d = mp::stieltjes(p);
        bool in = p.eta > 0.0 && mp::in_domain_S(p.E, p.eta, cfg.domain);
        t.add({num(p.E), num(p.eta), num(d.real()), num(d.imag()), num(mp::density(p.E)),
               num(mp::cdf(p.E)), in ? "1" : "0", above_threshold(p, N, cfg.domain.M) ? "1" : "0"});
    }
    return t;
}

std::vector<std::pair<long, Table>> run_inequalities(const ExperimentConfig& cfg, int workers,
                                                     ResultSet& rs) {
    moments::RatioScanSpec spec;
    spec.orders = cfg.orders;
    spec.N = cfg.N;
    spec.families.clear();
    for (const auto& f : cfg.families) spec.families.push_back(moments::parse_family(f));
    spec.samples = static_cast<std::size_t>(cfg.samples);
    spec.seed = cfg.seed;
    spec.dist = cfg.dist;
    spec.workers = workers;
    auto rows = moments::inequality_ratio_scan(spec);
    std::vector<std::pair<long, Table>> out;
    for (long N : cfg.N) {
        Table t;
        t.header = headers::inequalities;
        for (const auto& r : rows) {
            if (r.N != N) continue;
            t.add({moments::to_string(r.inequality), str(static_cast<long>(r.p)), str(r.N),
                   moments::to_string(r.family), r.dist, num(r.ratio), num(r.stderr_value)});
            if (!std::isfinite(r.ratio)) {
                violation("non-finite inequality ratio",
                          {{"identity", moments::to_string(r.inequality)}, {"N", N}, {"p", r.p},
                           {"family", moments::to_string(r.family)}});
            }
        }
        out.emplace_back(N, std::move(t));
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& r : rows) {
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
    }
    rs.summary["min_ratio"] = lo;
    rs.summary["max_ratio"] = hi;
    return out;
}

std::string timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

}  // namespace

ResultSet execute(const ExperimentConfig& cfg, int workers) {
    cfg.validate();
    ResultSet rs;
    if (cfg.kind == Kind::inequalities) {
        rs.tables = run_inequalities(cfg, workers, rs);
        return rs;
    }
    for (long N : cfg.N) {
        Table t;
        switch (cfg.kind) {
            case Kind::identities: t = run_identities(cfg, N, workers, rs); break;
            case Kind::qf: t = run_qf(cfg, N, workers, rs); break;
            case Kind::law_scan: t = run_law_scan(cfg, N, workers, rs); break;
            case Kind::q_recursion: t = run_q_recursion(cfg, N, workers, rs); break;
            case Kind::pleijel: t = run_pleijel(cfg, N, workers, rs); break;
            case Kind::counting: t = run_counting(cfg, N, workers, rs); break;
            case Kind::rigidity: t = run_rigidity(cfg, N, workers, rs); break;
            case Kind::mp_eval: t = run_mp_eval(cfg, N); break;
            case Kind::inequalities: break;
        }
        rs.tables.emplace_back(N, std::move(t));
    }
    return rs;
}

std::vector<std::filesystem::path> emit_results(const ResultSet& results, const ExperimentConfig& cfg,
                                                const std::filesystem::path& dir,
                                                double wall_clock_seconds, int workers) {
    if (results.tables.empty()) throw std::runtime_error("emit_results: no tables");
    std::filesystem::create_directories(dir);
    const std::string kind = to_string(cfg.kind);
    std::vector<std::filesystem::path> files;
    json summary;
    summary["config"] = json::parse(config_to_json(cfg));
    summary["version"] = mplab::version;
    summary["kind"] = kind;
    summary["generated_at"] = timestamp();
    summary["wall_clock_seconds"] = wall_clock_seconds;
    summary["workers_used"] = workers;
    summary["calibration"] = cfg.calibration;
    summary["replica_seed_rule"] = "derive_seed(derive_seed(seed, N), replica)";
    json stats = json::object();
    for (const auto& [name, v] : results.summary) {
        stats[name] = std::isfinite(v) ? json(v) : json(nullptr);
    }
    summary["stats"] = stats;
    json names = json::array();
    for (const auto& [N, table] : results.tables) {
        auto path = dir / (kind + "-" + std::to_string(N) + "-" + std::to_string(cfg.seed) + ".csv");
        std::ofstream out(path, std::ios::binary);
        write_csv(table, out);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        files.push_back(path);
        names.push_back(path.filename().string());
    }
    summary["files"] = names;
    auto spath = dir / (kind + "-" + std::to_string(cfg.seed) + "-summary.json");
    std::ofstream sout(spath, std::ios::binary);
    sout << summary.dump(2) << '\n';
    if (!sout) throw std::runtime_error("cannot write " + spath.string());
    files.push_back(spath);
    return files;
}

int effective_workers(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv("MPLAB_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return cfg.workers;
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
    RunOutcome outcome;
    const int workers = effective_workers(cfg);
    auto start = std::chrono::steady_clock::now();
    ResultSet rs;
    try {
        rs = execute(cfg, workers);
    } catch (const ConfigError& e) {
        return {1, e.what(), {}};
    } catch (const InvariantViolation& e) {
        return {2, std::string(e.what()) + "\n" + e.record(), {}};
    } catch (const std::invalid_argument& e) {
        return {1, e.what(), {}};
    } catch (const std::domain_error& e) {
        return {1, e.what(), {}};
    } catch (const std::exception& e) {
        return {2, e.what(), {}};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try {
        outcome.files = emit_results(rs, cfg, cfg.out, secs, workers);
    } catch (const std::exception& e) {
        return {2, e.what(), {}};
    }
    outcome.message = "wrote " + std::to_string(outcome.files.size()) + " files to " + cfg.out;
    return outcome;
}

}  // namespace mplab::experiment
