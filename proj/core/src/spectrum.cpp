#include "mplab/spectrum.hpp"

#include <algorithm>
#include <stdexcept>

#include "mplab/linalg.hpp"
#include "mplab/parallel.hpp"

namespace mplab::resolvent {

namespace {

std::vector<int> normalized(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

void check_labels(const std::vector<int>& v, long N, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 1 || v[i] > N) {
            throw std::invalid_argument(std::string(name) + ": label out of range");
        }
        if (i > 0 && v[i] == v[i - 1]) {
            throw std::invalid_argument(std::string(name) + ": duplicate label");
        }
    }
}

std::vector<int> with_label(const std::vector<int>& v, int k) {
    if (std::find(v.begin(), v.end(), k) != v.end()) {
        throw std::invalid_argument("label already removed");
    }
    std::vector<int> out = v;
    out.push_back(k);
    return normalized(std::move(out));
}

}  // namespace

void IndexSets::validate(long N) const {
    check_labels(normalized(J1), N, "J1");
    check_labels(normalized(J2), N, "J2");
}

IndexSets IndexSets::with_column(int k) const { return {with_label(J1, k), normalized(J2)}; }

IndexSets IndexSets::with_row(int k) const { return {normalized(J1), with_label(J2, k)}; }

bool IndexSets::removes_column(int k) const {
    return std::find(J1.begin(), J1.end(), k) != J1.end();
}

bool IndexSets::removes_row(int k) const {
    return std::find(J2.begin(), J2.end(), k) != J2.end();
}

std::vector<long> kept_positions(const std::vector<int>& removed, long N) {
    std::vector<long> out;
    out.reserve(N);
    for (long i = 1; i <= N; ++i) {
        if (std::find(removed.begin(), removed.end(), static_cast<int>(i)) == removed.end()) {
            out.push_back(i - 1);
        }
    }
    return out;
}

std::string format_labels(const std::vector<int>& labels) {
    std::string out;
    for (int v : normalized(labels)) {
        if (!out.empty()) out += ' ';
        out += std::to_string(v);
    }
    return out;
}

SpectrumSample compute_spectrum(const ensemble::MatrixSample& X, const std::vector<int>& J1) {
    IndexSets sets{J1, {}};
    sets.validate(X.N);
    if (X.N - static_cast<long>(J1.size()) < 1) {
        throw std::invalid_argument("compute_spectrum: every column removed");
    }
    CMatrix XN = X.XN();
    CMatrix Y = J1.empty() ? XN : CMatrix(XN(Eigen::all, kept_positions(J1, X.N)));

    SpectrumSample out;
    out.N = X.N;
    out.seed = X.seed;
    out.dist = X.dist.tag();
    try {
        out.eigenvalues = linalg::hermitian_eigenvalues(linalg::gram(Y));
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) + " (N=" + std::to_string(X.N) +
                                 ", dist=" + out.dist + ", seed=" + std::to_string(X.seed) + ")");
    }
    for (double& s : out.eigenvalues) {
        if (s < -1e-10) {
            throw InvariantViolation("negative eigenvalue of a Gram matrix",
                                     "N=" + std::to_string(X.N) + " seed=" + std::to_string(X.seed));
        }
        s = std::max(s, 0.0);
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    return out;
}

cplx empirical_stieltjes(std::span<const double> eigenvalues, long N, cplx theta) {
    if (theta.imag() == 0.0) {
        throw std::domain_error("empirical_stieltjes: eta must be nonzero");
    }
    cplx sum = 0.0;
    for (double s : eigenvalues) {
        sum += 1.0 / (s - theta);
    }
    return sum / static_cast<double>(N);
}

cplx empirical_stieltjes(const SpectrumSample& spectrum, const SpectralPoint& theta) {
    return empirical_stieltjes(spectrum.eigenvalues, spectrum.N, theta.theta());
}

std::vector<SpectrumSample> replica_spectra(long N, const ensemble::EntryDistribution& dist,
                                            std::uint64_t master, long count, int workers,
                                            long first) {
    if (count < 0) throw std::invalid_argument("replica_spectra: negative count");
    return parallel::map_indexed(static_cast<std::size_t>(count), workers, [&](std::size_t i) {
        long r = first + static_cast<long>(i);
        return compute_spectrum(ensemble::sample_matrix(N, dist, rng::replica_seed(master, N, r)));
    });
}

}  // namespace mplab::resolvent
