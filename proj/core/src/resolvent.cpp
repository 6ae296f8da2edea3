#include "mplab/resolvent.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mplab/linalg.hpp"

namespace mplab::resolvent {

namespace {

std::vector<int> labels_from(const std::vector<long>& positions) {
    std::vector<int> out(positions.size());
    std::transform(positions.begin(), positions.end(), out.begin(),
                   [](long p) { return static_cast<int>(p + 1); });
    return out;
}

long find_label(const std::vector<int>& labels, int label, const char* what) {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) {
        throw std::out_of_range(std::string(what) + " label " + std::to_string(label) +
                                " is removed or out of range");
    }
    return it - labels.begin();
}

}  // namespace

long ResolventPair::col_pos(int label) const { return find_label(col_labels, label, "column"); }

long ResolventPair::row_pos(int label) const { return find_label(row_labels, label, "row"); }

CMatrix minor_matrix(const CMatrix& XN, const IndexSets& sets) {
    const long N = XN.rows();
    if (sets.J1.empty() && sets.J2.empty()) {
        return XN;
    }
    return XN(kept_positions(sets.J2, N), kept_positions(sets.J1, N));
}

ResolventPair build_resolvents_scaled(const CMatrix& XN, const SpectralPoint& theta,
                                      const IndexSets& sets, const ResolventOptions& opts) {
    const long N = XN.rows();
    sets.validate(N);
    if (theta.eta == 0.0) {
        throw std::domain_error("build_resolvents: eta must be nonzero");
    }
    if (N > opts.dense_cap) {
        throw std::invalid_argument("build_resolvents: N = " + std::to_string(N) +
                                    " exceeds the dense cap " + std::to_string(opts.dense_cap));
    }
    long size = N - static_cast<long>(std::max(sets.J1.size(), sets.J2.size()));
    if (size < 1) {
        throw std::invalid_argument("build_resolvents: removed sets leave an empty minor");
    }

    ResolventPair out;
    out.theta = theta;
    out.sets = sets;
    std::sort(out.sets.J1.begin(), out.sets.J1.end());
    std::sort(out.sets.J2.begin(), out.sets.J2.end());
    out.N = N;
    out.col_labels = labels_from(kept_positions(sets.J1, N));
    out.row_labels = labels_from(kept_positions(sets.J2, N));

    CMatrix Y = minor_matrix(XN, sets);
    CMatrix A = linalg::gram(Y);
    CMatrix B = linalg::gram_outer(Y);
    out.G = linalg::shifted_inverse(A, theta.theta());
    out.curlyG = linalg::shifted_inverse(B, theta.theta());
    if (opts.verify) {
        double r = std::max(linalg::inverse_residual(A, theta.theta(), out.G),
                            linalg::inverse_residual(B, theta.theta(), out.curlyG));
        if (r > opts.tolerance) {
            throw InvariantViolation("resolvent inverse residual too large",
                                     "residual=" + std::to_string(r));
        }
    }
    return out;
}

ResolventPair build_resolvents(const ensemble::MatrixSample& X, const SpectralPoint& theta,
                               const IndexSets& sets, const ResolventOptions& opts) {
    if (X.N > opts.dense_cap) {
        throw std::invalid_argument("build_resolvents: N = " + std::to_string(X.N) +
                                    " exceeds the dense cap " + std::to_string(opts.dense_cap));
    }
    return build_resolvents_scaled(X.XN(), theta, sets, opts);
}

}  // namespace mplab::resolvent
