#include "mplab/ensemble.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace mplab::ensemble {

namespace {

constexpr std::uint32_t binary_version = 1;
constexpr char binary_magic[4] = {'M', 'P', 'L', 'X'};

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

double gaussian_clipped(int k, double b) {
    if (std::isinf(b)) {
        return k == 2 ? 1.0 : 3.0;
    }
    double phi = std::exp(-0.5 * b * b) / std::sqrt(2.0 * std::numbers::pi);
    double inside = std::erf(b / std::numbers::sqrt2);
    double tail = std::erfc(b / std::numbers::sqrt2);
    if (k == 2) {
        return inside - 2.0 * b * phi + b * b * tail;
    }
    return 3.0 * inside - 2.0 * phi * (b * b * b + 3.0 * b) + b * b * b * b * tail;
}

// Lomax: |Y| = U - 1 with U Pareto(alpha) on [1, inf).
double lomax_clipped(int k, double b, double alpha) {
    double B = 1.0 + b;
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) {
        double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
        double upper = std::isinf(b) ? 0.0 : std::pow(B, j - alpha);
        sum += binomial(k, j) * sign * (upper - 1.0) / (j - alpha);
    }
    double inside = alpha * sum;
    double tail = std::isinf(b) ? 0.0 : std::pow(b, k) * std::pow(B, -alpha);
    return inside + tail;
}

template <class T>
void put(std::ostream& out, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes, bytes + sizeof(T));
    }
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
        throw std::runtime_error("matrix dump: truncated input");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes, bytes + sizeof(T));
    }
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace

std::string to_string(Kind kind) {
    switch (kind) {
        case Kind::gaussian: return "gaussian";
        case Kind::rademacher: return "rademacher";
        case Kind::heavy_tail: return "heavy-tail";
    }
    return "unknown";
}

Kind parse_kind(std::string_view text) {
    if (text == "gaussian" || text == "complex-gaussian") return Kind::gaussian;
    if (text == "rademacher" || text == "complex-rademacher") return Kind::rademacher;
    if (text == "heavy-tail" || text == "truncated-heavy-tail") return Kind::heavy_tail;
    throw std::invalid_argument("unknown distribution '" + std::string(text) + "'");
}

void EntryDistribution::validate() const {
    if (!(D > 0.0) || !std::isfinite(D)) {
        throw std::invalid_argument("truncation constant D must be positive");
    }
    if (kind == Kind::heavy_tail && !(tail_index > 4.0 && std::isfinite(tail_index))) {
        throw std::invalid_argument("heavy-tail index must exceed 4 for a finite fourth moment");
    }
}

double clipped_moment(const EntryDistribution& dist, int k, double b) {
    if (k != 2 && k != 4) {
        throw std::invalid_argument("clipped_moment: k must be 2 or 4");
    }
    switch (dist.kind) {
        case Kind::gaussian: return gaussian_clipped(k, b);
        case Kind::rademacher: return b >= 1.0 ? 1.0 : std::pow(b, k);
        case Kind::heavy_tail: return lomax_clipped(k, b, dist.tail_index);
    }
    return 0.0;
}

Standardization standardization(const EntryDistribution& dist, long N) {
    dist.validate();
    if (N < 1) {
        throw std::invalid_argument("standardization: N must be positive");
    }
    // Largest admissible component after scaling.
    double target = dist.D * std::pow(static_cast<double>(N), 0.25) / std::numbers::sqrt2;

    Standardization s;
    if (dist.kind == Kind::rademacher) {
        if (target < std::sqrt(0.5)) {
            throw std::invalid_argument("rademacher entries have modulus 1 > D N^(1/4)");
        }
        s.clip = std::numeric_limits<double>::infinity();
        s.clipped_variance = 1.0;
        s.clipped_fourth = 1.0;
        s.scale = std::sqrt(0.5);
        s.mu4 = 1.0;
        return s;
    }
    if (!(target > std::sqrt(0.5))) {
        throw std::invalid_argument("truncation infeasible: need D N^(1/4) > 1");
    }

    auto reach = [&](double b) { return b * std::sqrt(0.5 / clipped_moment(dist, 2, b)); };
    double lo = 0.0;
    double hi = 1.0;
    while (reach(hi) < target) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (reach(mid) < target ? lo : hi) = mid;
    }
    // Stay strictly inside the bound after rounding.
    s.clip = lo * (1.0 - 1e-12);
    s.clipped_variance = clipped_moment(dist, 2, s.clip);
    s.clipped_fourth = clipped_moment(dist, 4, s.clip);
    s.scale = std::sqrt(0.5 / s.clipped_variance);
    double s4 = s.scale * s.scale * s.scale * s.scale;
    s.mu4 = 2.0 * s4 * s.clipped_fourth + 0.5;
    return s;
}

EntrySampler::EntrySampler(const EntryDistribution& dist, long N)
    : dist_(dist), std_(ensemble::standardization(dist, N)) {}

cplx EntrySampler::draw(rng::SplitMix64& gen) const {
    const double b = std_.clip;
    const double s = std_.scale;
    switch (dist_.kind) {
        case Kind::gaussian: {
            auto [z1, z2] = gen.normal_pair();
            return {s * std::clamp(z1, -b, b), s * std::clamp(z2, -b, b)};
        }
        case Kind::rademacher: {
            std::uint64_t r = gen.next();
            return {(r & 1U) ? s : -s, (r & 2U) ? s : -s};
        }
        case Kind::heavy_tail: {
            double parts[2];
            for (double& p : parts) {
                std::uint64_t r = gen.next();
                double u = rng::SplitMix64::to_unit(r << 1);
                double y = std::min(std::pow(u, -1.0 / dist_.tail_index) - 1.0, b);
                p = (r >> 63) ? s * y : -s * y;
            }
            return {parts[0], parts[1]};
        }
    }
    return {};
}

CMatrix MatrixSample::XN() const {
    return scaled ? X : CMatrix(X / std::sqrt(static_cast<double>(N)));
}

CMatrix MatrixSample::raw() const {
    return scaled ? CMatrix(X * std::sqrt(static_cast<double>(N))) : X;
}

MatrixSample MatrixSample::from_matrix(CMatrix X, bool scaled) {
    if (X.rows() != X.cols()) {
        throw std::invalid_argument("MatrixSample: matrix must be square");
    }
    MatrixSample s;
    s.N = X.rows();
    s.X = std::move(X);
    s.scaled = scaled;
    return s;
}

MatrixSample sample_matrix(long N, const EntryDistribution& dist, std::uint64_t seed) {
    if (N < 2) {
        throw std::invalid_argument("sample_matrix: N must be at least 2");
    }
    EntrySampler sampler(dist, N);
    rng::SplitMix64 gen(seed);
    MatrixSample out;
    out.N = N;
    out.seed = seed;
    out.dist = dist;
    out.X.resize(N, N);
    for (long i = 0; i < N; ++i) {
        for (long j = 0; j < N; ++j) {
            out.X(i, j) = sampler.draw(gen);
        }
    }
    return out;
}

MomentSummary moment_report(const EntryDistribution& dist, std::size_t n_samples,
                            std::uint64_t seed, long reference_N) {
    if (n_samples < 10000) {
        throw std::invalid_argument("moment_report: need at least 1e4 samples");
    }
    EntrySampler sampler(dist, reference_N);
    rng::SplitMix64 gen(seed);
    double s2 = 0.0, s4 = 0.0, s8 = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        double a2 = std::norm(sampler.draw(gen));
        s2 += a2;
        s4 += a2 * a2;
        s8 += a2 * a2 * a2 * a2;
    }
    double n = static_cast<double>(n_samples);
    MomentSummary out;
    out.samples = n_samples;
    out.m2 = s2 / n;
    out.m4 = s4 / n;
    out.m2_stderr = std::sqrt(std::max(0.0, out.m4 - out.m2 * out.m2) / n);
    out.m4_stderr = std::sqrt(std::max(0.0, s8 / n - out.m4 * out.m4) / n);
    out.mu4_exact = sampler.standardization().mu4;
    out.violation = std::abs(out.m2 - 1.0) > 5.0 * out.m2_stderr + 1e-12;
    return out;
}

void write_binary(const MatrixSample& sample, std::ostream& out) {
    out.write(binary_magic, 4);
    put<std::uint32_t>(out, binary_version);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(sample.N));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(sample.dist.kind));
    put<double>(out, sample.dist.tail_index);
    put<double>(out, sample.dist.D);
    put<std::uint64_t>(out, sample.seed);
    put<std::uint8_t>(out, sample.scaled ? 1 : 0);
    for (long i = 0; i < sample.N; ++i) {
        for (long j = 0; j < sample.N; ++j) {
            put<double>(out, sample.X(i, j).real());
            put<double>(out, sample.X(i, j).imag());
        }
    }
    if (!out) {
        throw std::runtime_error("matrix dump: write failed");
    }
}

MatrixSample read_binary(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, binary_magic, 4) != 0) {
        throw std::runtime_error("matrix dump: bad magic");
    }
    if (get<std::uint32_t>(in) != binary_version) {
        throw std::runtime_error("matrix dump: unsupported version");
    }
    MatrixSample s;
    s.N = static_cast<long>(get<std::uint64_t>(in));
    auto kind = get<std::uint8_t>(in);
    if (kind > static_cast<std::uint8_t>(Kind::heavy_tail)) {
        throw std::runtime_error("matrix dump: bad distribution tag");
    }
    s.dist.kind = static_cast<Kind>(kind);
    s.dist.tail_index = get<double>(in);
    s.dist.D = get<double>(in);
    s.seed = get<std::uint64_t>(in);
    s.scaled = get<std::uint8_t>(in) != 0;
    s.X.resize(s.N, s.N);
    for (long i = 0; i < s.N; ++i) {
        for (long j = 0; j < s.N; ++j) {
            double re = get<double>(in);
            double im = get<double>(in);
            s.X(i, j) = {re, im};
        }
    }
    return s;
}

}  // namespace mplab::ensemble
