#include "mplab/fluctuation_scan.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "mplab/grid.hpp"
#include "mplab/mp_analytics.hpp"
#include "mplab/parallel.hpp"
#include "mplab/spectrum.hpp"
#include "mplab/stats.hpp"

namespace mplab::locallaw {

namespace {

constexpr std::uint64_t resample_stream = 0x7E5A3D1ULL;

Monitored monitored_quantities(const ensemble::MatrixSample& X, const CMatrix& XN,
                               const SpectralPoint& theta, const ScanOptions& opts) {
    const long N = X.N;
    const double n = static_cast<double>(N);
    const cplx z = theta.theta();
    const cplx sq = std::sqrt(z);
    resolvent::ResolventOptions ro;
    ro.dense_cap = opts.dense_cap;
    resolvent::ResolventPair P = resolvent::build_resolvents_scaled(XN, theta, {}, ro);
    RResult r = compute_R(P, XN);
    FluctuationRecord rec = fluctuation_record(r, theta, N, 0, opts.domain);
    CompositeResult comp = lambda_composite(rec, opts.bR_C);

    Monitored m;
    m.abs_G11 = std::abs(sq * P.G(0, 0));
    m.inv_abs_G11 = 1.0 / m.abs_G11;
    m.centered_reciprocal = std::abs(sq * r.upsilon[0]);
    m.abs_G12 = std::abs(sq * P.G(0, 1));
    cplx W1 = z * r.upsilon[0] * P.G(0, 0);
    m.abs_W = std::abs(W1);
    cplx sumW = 0.0;
    for (std::size_t k = 0; k < r.upsilon.size(); ++k) sumW += z * r.upsilon[k] * r.Gkk[k];
    m.abs_mean_W = std::abs(sumW / n);

    // curlyG^{(1)} by a rank-one update, then fresh first columns with the rest frozen.
    CVector v = XN.col(0);
    CVector Gv = P.curlyG * v;
    CVector vG = P.curlyG.adjoint() * v;
    cplx c = v.dot(Gv);
    CMatrix G1 = P.curlyG + Gv * vG.adjoint() / (1.0 - c);
    const cplx tr1 = G1.trace() / n;
    ensemble::EntrySampler sampler(X.dist, N);
    rng::SplitMix64 gen(rng::derive_seed(X.seed, resample_stream));
    cplx EW = 0.0;
    CVector x(N);
    for (int s = 0; s < opts.resamples; ++s) {
        for (long i = 0; i < N; ++i) x(i) = sampler.draw(gen);
        cplx q = x.dot(G1 * x) / n;
        EW += -(q - tr1) / (1.0 + q);
    }
    EW /= static_cast<double>(std::max(opts.resamples, 1));
    m.abs_EW = std::abs(EW);
    m.abs_centered_W = std::abs(W1 - EW);
    m.lambda_composite = comp.lambda;
    m.bR_bound = comp.bound;
    m.quad_residual = rec.quad_residual;
    return m;
}

std::string num(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

ReplicaFluctuation fluctuation_replica(const ensemble::MatrixSample& X,
                                       const std::vector<SpectralPoint>& grid,
                                       const ScanOptions& opts) {
    resolvent::SpectrumSample spec = resolvent::compute_spectrum(X);
    ReplicaFluctuation out;
    out.Lambda.reserve(grid.size());
    for (const auto& p : grid) {
        out.Lambda.push_back(lambda_solutions(resolvent::empirical_stieltjes(spec, p), p).Lambda);
    }
    if (opts.monitored && X.N <= opts.dense_cap) {
        CMatrix XN = X.XN();
        for (const auto& p : grid) out.monitored.push_back(monitored_quantities(X, XN, p, opts));
    }
    return out;
}

std::vector<ScanStat> summarize_scan(const std::vector<SpectralPoint>& grid, long N,
                                     const std::string& dist,
                                     const std::vector<ReplicaFluctuation>& replicas,
                                     const ScanOptions& opts) {
    if (grid.empty()) throw std::invalid_argument("fluctuation_scan: empty grid");
    if (replicas.empty()) throw std::invalid_argument("fluctuation_scan: zero replicas");
    const double n = static_cast<double>(N);
    const long R = static_cast<long>(replicas.size());
    std::vector<ScanStat> out;

    for (std::size_t g = 0; g < grid.size(); ++g) {
        const SpectralPoint& p = grid[g];
        auto emit = [&](std::string name, double value, double se = std::nan("")) {
            out.push_back({p, N, dist, R, std::move(name), value, se});
        };
        auto emit_mean = [&](const std::string& name, const std::vector<double>& v) {
            emit(name, stats::mean(v), stats::standard_error(v));
        };
        const double neta = n * p.eta;
        const double at = std::abs(p.theta());
        std::vector<double> abs_l, abs_im;
        for (const auto& rep : replicas) {
            abs_l.push_back(neta * std::abs(rep.Lambda[g]));
            abs_im.push_back(neta * std::abs(rep.Lambda[g].imag()));
        }
        emit("in_domain", p.eta > 0.0 && mp::in_domain_S(p.E, p.eta, opts.domain) ? 1.0 : 0.0);
        emit("above_threshold", above_threshold(p, N, opts.domain.M) ? 1.0 : 0.0);
        emit_mean("neta_abs_lambda_mean", abs_l);
        emit("neta_abs_lambda_median", stats::median(abs_l));
        emit("neta_abs_lambda_q05", stats::quantile(abs_l, 0.05));
        emit("neta_abs_lambda_q25", stats::quantile(abs_l, 0.25));
        emit("neta_abs_lambda_q75", stats::quantile(abs_l, 0.75));
        emit("neta_abs_lambda_q95", stats::quantile(abs_l, 0.95));
        emit_mean("neta_abs_im_lambda_mean", abs_im);
        emit("neta_abs_im_lambda_median", stats::median(abs_im));
        emit("neta_abs_im_lambda_q95", stats::quantile(abs_im, 0.95));
        for (int q : {1, 2, 4}) {
            std::vector<double> sq, th;
            for (const auto& rep : replicas) {
                double a = std::abs(rep.Lambda[g]);
                sq.push_back(std::pow(std::sqrt(at) * a, q));
                th.push_back(std::pow(at * a, q));
            }
            emit_mean("moment_abs_sqrt_theta_lambda_q" + std::to_string(q), sq);
            emit_mean("moment_abs_theta_lambda_q" + std::to_string(q), th);
            if (p.eta > 0.0) {
                emit("control_parameter_q" + std::to_string(q),
                     control_parameter(q, p, N, stats::mean(th)));
            }
        }
        for (double K : opts.K) {
            double hits = 0.0;
            for (double v : abs_l) hits += v >= K ? 1.0 : 0.0;
            double frac = hits / static_cast<double>(R);
            emit("tail_ge_" + num(K), frac, std::sqrt(frac * (1.0 - frac) / static_cast<double>(R)));
        }

        if (replicas.front().monitored.empty()) continue;
        std::vector<std::vector<double>> cols(10);
        double max_quad = 0.0;
        double min_slack = std::numeric_limits<double>::infinity();
        for (const auto& rep : replicas) {
            const Monitored& m = rep.monitored[g];
            double vals[10] = {m.abs_G11, m.inv_abs_G11, m.centered_reciprocal, m.abs_G12, m.abs_W,
                               m.abs_EW, m.abs_centered_W, m.abs_mean_W, m.lambda_composite,
                               m.bR_bound};
            for (int i = 0; i < 10; ++i) cols[i].push_back(vals[i]);
            max_quad = std::max(max_quad, m.quad_residual);
            min_slack = std::min(min_slack, m.bR_bound - m.lambda_composite);
        }
        static const char* names[10] = {
            "abs_sqrt_theta_G11_mean",   "inv_abs_sqrt_theta_G11_mean", "centered_reciprocal_mean",
            "abs_sqrt_theta_G12_mean",   "abs_W1_mean",                 "abs_E1W1_mean",
            "abs_centered_W1_mean",      "abs_mean_W_mean",             "lambda_composite_mean",
            "bR_bound_mean"};
        for (int i = 0; i < 10; ++i) emit_mean(names[i], cols[i]);
        emit("bR_min_slack", min_slack);
        emit("quad_residual_max", max_quad);
    }
    return out;
}

std::vector<ScanStat> fluctuation_scan(long N, const ensemble::EntryDistribution& dist,
                                       std::uint64_t master_seed, long replicas,
                                       const std::vector<SpectralPoint>& grid,
                                       const ScanOptions& opts) {
    if (grid.empty()) throw std::invalid_argument("fluctuation_scan: empty grid");
    if (replicas < 1) throw std::invalid_argument("fluctuation_scan: zero replicas");
    auto reps = parallel::map_indexed(static_cast<std::size_t>(replicas), opts.workers,
                                      [&](std::size_t r) {
        auto X = ensemble::sample_matrix(N, dist, rng::replica_seed(master_seed, N, static_cast<long>(r)));
        return fluctuation_replica(X, grid, opts);
    });
    return summarize_scan(grid, N, dist.tag(), reps, opts);
}

}  // namespace mplab::locallaw
