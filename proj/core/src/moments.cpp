#include "mplab/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mplab/parallel.hpp"
#include "mplab/resolvent.hpp"

namespace mplab::moments {

namespace {

constexpr std::uint64_t coefficient_stream = 0xC0EFULL;
constexpr std::uint64_t resample_stream = 0x5A3B1EULL;

CVector draw_vector(const ensemble::EntrySampler& s, rng::SplitMix64& gen, long n) {
    CVector x(n);
    for (long i = 0; i < n; ++i) x(i) = s.draw(gen);
    return x;
}

// Running mean and variance of a real statistic; `scale` tracks the mean magnitude of
// the terms the statistic was formed from, so roundoff-level means count as zero.
struct Acc {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
    double scale = 0.0;

    void add(double v, double magnitude) {
        n += 1.0;
        double d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
        scale += (magnitude - scale) / n;
    }
    void add(double v) { add(v, std::abs(v)); }
    double se() const { return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
    double z() const {
        double excess = std::abs(mean) - 1e-12 * scale;
        if (excess <= 0.0) return 0.0;
        double s = se();
        return s == 0.0 ? std::numeric_limits<double>::infinity() : excess / s;
    }
};

void add_complex(Acc& re, Acc& im, cplx v) {
    re.add(v.real());
    im.add(v.imag());
}

double pooled_z(const std::vector<Acc>& accs) {
    double z = 0.0;
    for (const auto& a : accs) z = std::max(z, a.z());
    return z;
}

}  // namespace

Decomposition decompose(const CMatrix& a, const CVector& x) {
    const long n = a.rows();
    if (a.cols() != n || x.size() != n) throw std::invalid_argument("decompose: dimension mismatch");
    Decomposition d;
    d.Q = 0.0;
    d.xi.resize(n);
    d.xihat.resize(n);
    d.S.resize(n);
    d.Shat.resize(n);
    for (long j = 0; j < n; ++j) {
        cplx s = 0.0;
        cplx sh = 0.0;
        for (long k = 0; k < j; ++k) {
            s += a(j, k) * std::conj(x(k));
            sh += a(k, j) * x(k);
        }
        d.S[j] = s;
        d.Shat[j] = sh;
        d.xi[j] = x(j) * s;
        d.xihat[j] = std::conj(x(j)) * sh;
    }
    for (long j = 0; j < n; ++j) {
        for (long k = 0; k < n; ++k) {
            if (j != k) d.Q += a(j, k) * x(j) * std::conj(x(k));
        }
    }
    return d;
}

MartingaleReport martingale_decomposition_check(const CMatrix& a,
                                                const ensemble::EntryDistribution& dist,
                                                std::size_t n_samples, std::uint64_t seed,
                                                int resamples) {
    const long n = a.rows();
    if (a.cols() != n || n < 1) throw std::invalid_argument("martingale check: need a square matrix");
    for (long j = 0; j < n; ++j) {
        if (a(j, j) != cplx(0.0)) throw std::invalid_argument("martingale check: nonzero diagonal");
    }
    if (n_samples < 10000) throw std::invalid_argument("martingale check: need at least 10^4 samples");
    if (resamples < 1) throw std::invalid_argument("martingale check: resamples must be positive");

    ensemble::EntrySampler sampler(dist, std::max<long>(n, 2));
    rng::SplitMix64 gen(seed);
    rng::SplitMix64 regen(rng::derive_seed(seed, resample_stream));
    const std::size_t m = static_cast<std::size_t>(n);
    std::vector<Acc> mean_acc(4 * m);
    std::vector<Acc> orth_acc(m * (m - 1));
    std::vector<Acc> cond_acc(m);

    MartingaleReport rep;
    rep.samples = n_samples;
    for (std::size_t s = 0; s < n_samples; ++s) {
        CVector x = draw_vector(sampler, gen, n);
        Decomposition d = decompose(a, x);
        cplx total = 0.0;
        for (long j = 0; j < n; ++j) total += d.xi[j] + d.xihat[j];
        rep.max_identity_residual = std::max(rep.max_identity_residual,
                                             std::abs(d.Q - total) / std::max(1.0, std::abs(d.Q)));
        for (std::size_t j = 0; j < m; ++j) {
            add_complex(mean_acc[4 * j], mean_acc[4 * j + 1], d.xi[j]);
            add_complex(mean_acc[4 * j + 2], mean_acc[4 * j + 3], d.xihat[j]);
            for (std::size_t i = 0; i < j; ++i) {
                std::size_t idx = j * (j - 1) / 2 + i;
                add_complex(orth_acc[2 * idx], orth_acc[2 * idx + 1], d.xi[j] * std::conj(d.xi[i]));
            }
            double avg = 0.0;
            for (int r = 0; r < resamples; ++r) avg += std::norm(sampler.draw(regen) * d.S[j]);
            cond_acc[j].add(avg / resamples - std::norm(d.S[j]), std::norm(d.S[j]));
        }
    }
    rep.max_mean_z = pooled_z(mean_acc);
    rep.max_orthogonality_z = pooled_z(orth_acc);
    rep.max_conditional_z = pooled_z(cond_acc);
    return rep;
}

std::string to_string(Inequality kind) {
    return kind == Inequality::rosenthal ? "rosenthal" : "burkholder";
}

std::string to_string(Family family) {
    switch (family) {
        case Family::single: return "single";
        case Family::uniform: return "uniform";
        case Family::random_unit: return "random-unit";
        case Family::resolvent: return "resolvent";
    }
    return "single";
}

Family parse_family(const std::string& text) {
    for (Family f : {Family::single, Family::uniform, Family::random_unit, Family::resolvent}) {
        if (text == to_string(f)) return f;
    }
    throw std::invalid_argument("unknown coefficient family '" + text + "'");
}

CVector coefficient_vector(Family family, long N, std::uint64_t seed) {
    CVector a = CVector::Zero(N);
    switch (family) {
        case Family::single: a(0) = 1.0; break;
        case Family::uniform: a.setConstant(1.0 / std::sqrt(static_cast<double>(N))); break;
        case Family::random_unit: {
            rng::SplitMix64 gen(rng::derive_seed(seed, coefficient_stream));
            for (long i = 0; i < N; ++i) {
                auto [re, im] = gen.normal_pair();
                a(i) = cplx(re, im);
            }
            a.normalize();
            break;
        }
        case Family::resolvent:
            throw std::invalid_argument("the resolvent family defines matrices only");
    }
    return a;
}

CMatrix coefficient_matrix(Family family, long N, std::uint64_t seed) {
    if (N < 2) throw std::invalid_argument("coefficient_matrix: N must be at least 2");
    CMatrix a = CMatrix::Zero(N, N);
    switch (family) {
        case Family::single: a(1, 0) = 1.0; break;
        case Family::uniform:
            a.setConstant(1.0 / std::sqrt(static_cast<double>(N) * static_cast<double>(N - 1)));
            break;
        case Family::random_unit: {
            rng::SplitMix64 gen(rng::derive_seed(seed, coefficient_stream));
            for (long j = 0; j < N; ++j) {
                for (long k = 0; k < N; ++k) {
                    auto [re, im] = gen.normal_pair();
                    a(j, k) = cplx(re, im);
                }
            }
            break;
        }
        case Family::resolvent: {
            auto X = ensemble::sample_matrix(N, {}, rng::derive_seed(seed, coefficient_stream));
            resolvent::ResolventOptions opts;
            opts.dense_cap = std::max<long>(N, opts.dense_cap);
            a = resolvent::build_resolvents(X, {2.0, 1.0}, {}, opts).curlyG /
                std::sqrt(static_cast<double>(N));
            break;
        }
    }
    a.diagonal().setZero();
    if (family != Family::single && family != Family::uniform) a /= a.norm();
    return a;
}

namespace {

struct Sums {
    std::vector<Acc> lhs;
    std::vector<Acc> rhs_a;  // (sum |S|^2)^{p/2} or (sum|a|^2)^{p/2}
    std::vector<Acc> rhs_b;  // sum |S|^p
    std::vector<Acc> rhs_c;  // hat terms
    std::vector<Acc> rhs_d;
    std::vector<Acc> mu;
};

std::vector<RatioRow> finish(const Sums& s, const RatioScanSpec& spec, Inequality ineq, long N,
                             Family family, const CVector* vec) {
    std::vector<RatioRow> rows;
    for (std::size_t i = 0; i < spec.orders.size(); ++i) {
        const int p = spec.orders[i];
        const double pp = std::pow(static_cast<double>(p), p);
        RatioRow r;
        r.inequality = ineq;
        r.p = p;
        r.N = N;
        r.family = family;
        r.dist = spec.dist.tag();
        r.mu_p = s.mu[i].mean;
        r.lhs = s.lhs[i].mean;
        r.lhs_stderr = s.lhs[i].se();
        if (ineq == Inequality::rosenthal) {
            double l2 = vec->squaredNorm();
            double lp = 0.0;
            for (long j = 0; j < vec->size(); ++j) lp += std::pow(std::abs((*vec)(j)), p);
            r.rhs = pp * (std::pow(l2, 0.5 * p) + r.mu_p * lp);
        } else {
            r.rhs = pp * (s.rhs_a[i].mean + r.mu_p * s.rhs_b[i].mean) +
                    pp * (s.rhs_c[i].mean + r.mu_p * s.rhs_d[i].mean);
        }
        r.ratio = r.lhs / r.rhs;
        r.stderr_value = r.lhs_stderr / r.rhs;
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

std::vector<RatioRow> inequality_ratio_scan(const RatioScanSpec& spec) {
    for (int p : spec.orders) {
        if (p < 2 || p > 8 || p % 2 != 0) {
            throw std::invalid_argument("inequality_ratio_scan: orders must be even, 2..8");
        }
    }
    if (spec.samples < 1) throw std::invalid_argument("inequality_ratio_scan: no samples");
    spec.dist.validate();

    struct Task {
        Inequality ineq;
        long N;
        Family family;
    };
    std::vector<Task> tasks;
    for (Inequality ineq : spec.inequalities) {
        for (long N : spec.N) {
            for (Family f : spec.families) {
                if (ineq == Inequality::rosenthal && f == Family::resolvent) continue;
                tasks.push_back({ineq, N, f});
            }
        }
    }

    const std::size_t P = spec.orders.size();
    auto results = parallel::map_indexed(tasks.size(), spec.workers, [&](std::size_t t) {
        const Task& task = tasks[t];
        const long N = task.N;
        const std::uint64_t stream = rng::derive_seed(
            rng::derive_seed(spec.seed, static_cast<std::uint64_t>(N)),
            static_cast<std::uint64_t>(task.family) * 2 + static_cast<std::uint64_t>(task.ineq));
        ensemble::EntrySampler sampler(spec.dist, std::max<long>(N, 2));
        rng::SplitMix64 gen(stream);
        Sums s;
        s.lhs.resize(P);
        s.rhs_a.resize(P);
        s.rhs_b.resize(P);
        s.rhs_c.resize(P);
        s.rhs_d.resize(P);
        s.mu.resize(P);

        CVector vec;
        CMatrix mat;
        if (task.ineq == Inequality::rosenthal) {
            vec = coefficient_vector(task.family, N, spec.seed);
        } else {
            mat = coefficient_matrix(task.family, N, spec.seed);
        }
        for (std::size_t it = 0; it < spec.samples; ++it) {
            CVector x = draw_vector(sampler, gen, N);
            for (std::size_t i = 0; i < P; ++i) {
                const int p = spec.orders[i];
                double mu = 0.0;
                for (long j = 0; j < N; ++j) mu += std::pow(std::abs(x(j)), p);
                s.mu[i].add(mu / static_cast<double>(N));
            }
            if (task.ineq == Inequality::rosenthal) {
                double v = std::abs(vec.cwiseProduct(x).sum());
                for (std::size_t i = 0; i < P; ++i) s.lhs[i].add(std::pow(v, spec.orders[i]));
            } else {
                // S = strict-lower(a) conj(x), Shat = strict-upper(a)^T x
                CVector S = mat.triangularView<Eigen::StrictlyLower>() * x.conjugate();
                CVector Sh = mat.triangularView<Eigen::StrictlyUpper>().transpose() * x;
                cplx Q = x.cwiseProduct(S).sum() + x.conjugate().cwiseProduct(Sh).sum();
                const double q = std::abs(Q);
                const double s2 = S.squaredNorm();
                const double h2 = Sh.squaredNorm();
                for (std::size_t i = 0; i < P; ++i) {
                    const int p = spec.orders[i];
                    double sp = 0.0;
                    double hp = 0.0;
                    for (long j = 0; j < N; ++j) {
                        sp += std::pow(std::abs(S(j)), p);
                        hp += std::pow(std::abs(Sh(j)), p);
                    }
                    s.lhs[i].add(std::pow(q, p));
                    s.rhs_a[i].add(std::pow(s2, 0.5 * p));
                    s.rhs_b[i].add(sp);
                    s.rhs_c[i].add(std::pow(h2, 0.5 * p));
                    s.rhs_d[i].add(hp);
                }
            }
        }
        return finish(s, spec, task.ineq, N, task.family, &vec);
    });

    std::vector<RatioRow> rows;
    for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
    return rows;
}

}  // namespace mplab::moments
