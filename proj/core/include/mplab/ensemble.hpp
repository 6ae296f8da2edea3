#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "mplab/rng.hpp"
#include "mplab/types.hpp"

namespace mplab::ensemble {

enum class Kind { gaussian, rademacher, heavy_tail };

std::string to_string(Kind kind);
Kind parse_kind(std::string_view text);

// Component law before truncation:
//   gaussian    standard normal
//   rademacher  +-1
//   heavy_tail  symmetric Lomax, |Y| = U^(-1/tail_index) - 1; finite moments of order < tail_index
struct EntryDistribution {
    Kind kind = Kind::gaussian;
    double tail_index = 6.0;
    double D = 1.0;

    void validate() const;
    std::string tag() const { return to_string(kind); }

    bool operator==(const EntryDistribution&) const = default;
};

// Each component is clipped to [-clip, clip] and multiplied by scale, so that
// E Re(x)^2 = E Im(x)^2 = 1/2 and |x| <= D N^(1/4).
struct Standardization {
    double clip = 0.0;
    double scale = 0.0;
    double clipped_variance = 0.0;  // E min(|Y|, clip)^2 of the raw component
    double clipped_fourth = 0.0;    // E min(|Y|, clip)^4
    double mu4 = 0.0;               // E|x|^4 of the standardized entry
};

Standardization standardization(const EntryDistribution& dist, long N);

// E min(|Y|, b)^k of the raw component law, k in {2, 4}; b may be infinite.
double clipped_moment(const EntryDistribution& dist, int k, double b);

class EntrySampler {
public:
    EntrySampler(const EntryDistribution& dist, long N);

    cplx draw(rng::SplitMix64& gen) const;
    const Standardization& standardization() const { return std_; }
    const EntryDistribution& distribution() const { return dist_; }

private:
    EntryDistribution dist_;
    Standardization std_;
};

struct MatrixSample {
    long N = 0;
    CMatrix X;  // entries x_ij; X_N = X / sqrt(N) unless `scaled`
    std::uint64_t seed = 0;
    EntryDistribution dist;
    bool scaled = false;

    CMatrix XN() const;
    CMatrix raw() const;

    static MatrixSample from_matrix(CMatrix X, bool scaled);
};

// Row-major fill, real part before imaginary part, from SplitMix64(seed).
MatrixSample sample_matrix(long N, const EntryDistribution& dist, std::uint64_t seed);

struct MomentSummary {
    std::size_t samples = 0;
    double m2 = 0.0;
    double m2_stderr = 0.0;
    double m4 = 0.0;
    double m4_stderr = 0.0;
    double mu4_exact = 0.0;
    bool violation = false;  // |m2 - 1| > 5 standard errors
};

// Entries are truncated as for an N = reference_N matrix.
MomentSummary moment_report(const EntryDistribution& dist, std::size_t n_samples,
                            std::uint64_t seed, long reference_N = 1024);

// Binary dump: "MPLX", u32 version, u64 N, u8 kind, f64 tail_index, f64 D, u64 seed,
// u8 scaled, then N*N (re, im) f64 pairs in row-major order. All little-endian.
void write_binary(const MatrixSample& sample, std::ostream& out);
MatrixSample read_binary(std::istream& in);

}  // namespace mplab::ensemble
