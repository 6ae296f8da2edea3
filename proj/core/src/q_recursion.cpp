#include "mplab/q_recursion.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mplab::locallaw {

namespace {

CMatrix strictly_upper(const CMatrix& a) { return a.triangularView<Eigen::StrictlyUpper>(); }
CMatrix strictly_lower(const CMatrix& a) { return a.triangularView<Eigen::StrictlyLower>(); }

}  // namespace

double QRecursionReport::max_decomposition_residual() const {
    double worst = 0.0;
    for (const auto& lv : levels) {
        if (lv.has_next) worst = std::max(worst, lv.decomposition_residual);
    }
    return worst;
}

double QRecursionReport::min_arr_slack(int max_nu) const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& lv : levels) {
        if (lv.has_next && lv.nu <= max_nu) worst = std::min(worst, lv.arr_min_slack);
    }
    return worst;
}

double QRecursionReport::min_cs_slack() const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& lv : levels) {
        if (lv.has_next) worst = std::min(worst, lv.cs_min_slack);
    }
    return worst;
}

QRecursionReport q_recursion(const CMatrix& curlyG, const CVector& x, long N, double eta, int L) {
    if (L < 0 || L > 4) {
        throw std::invalid_argument("q_recursion: level must be in 0..4");
    }
    if (curlyG.rows() != x.size()) {
        throw std::invalid_argument("q_recursion: dimension mismatch");
    }
    const double n = static_cast<double>(N);
    const double base = curlyG.trace().imag() / (n * eta);

    QRecursionReport rep;
    CMatrix a = curlyG / std::sqrt(n);
    for (int nu = 0; nu <= L; ++nu) {
        QRecursionLevel lv;
        lv.nu = nu;
        lv.a = a;
        CMatrix U = strictly_upper(a);
        lv.Q = (U.transpose() * x).squaredNorm();
        lv.Qhat = (strictly_lower(a) * x).squaredNorm();

        if (nu < L) {
            CMatrix next = U * U.adjoint();
            lv.has_next = true;
            lv.Q1 = next.trace();
            lv.Q2 = 0.0;
            lv.Q3 = 0.0;
            for (long l = 0; l < next.rows(); ++l) {
                lv.Q2 += (std::norm(x(l)) - 1.0) * next(l, l);
                for (long j = 0; j < next.cols(); ++j) {
                    if (j != l) lv.Q3 += x(l) * std::conj(x(j)) * next(l, j);
                }
            }
            lv.decomposition_residual = scaled_residual(lv.Q, lv.Q1 + lv.Q2 + lv.Q3);

            const double power = std::pow(base, std::pow(2.0, nu) - 1.0);
            Eigen::VectorXd col_norms = a.colwise().squaredNorm().transpose();
            Eigen::VectorXd row_norms = a.rowwise().squaredNorm();
            lv.arr_min_slack = std::numeric_limits<double>::infinity();
            lv.cs_min_slack = std::numeric_limits<double>::infinity();
            for (long r = 0; r < next.rows(); ++r) {
                double rhs = power * curlyG(r, r).imag() / (n * eta);
                double lhs = std::max(std::abs(next(r, r)), col_norms(r));
                lv.arr_min_slack = std::min(lv.arr_min_slack, rhs - lhs);
                for (long j = 0; j < next.cols(); ++j) {
                    lv.cs_min_slack = std::min(lv.cs_min_slack,
                                               row_norms(r) * row_norms(j) - std::norm(next(r, j)));
                }
            }
            if (nu == 0) {
                for (long j = 1; j < next.cols(); ++j) {
                    for (long r = 0; r < next.rows(); ++r) {
                        if (r == j) continue;
                        rep.holder.lhs += std::norm(next(r, j));
                        rep.holder.cs_bound += row_norms(r) * row_norms(j);
                    }
                }
                rep.holder.lhs /= n * n;
                rep.holder.cs_bound /= n * n;
                for (long j = 0; j < a.rows(); ++j) {
                    rep.holder.rhs += std::norm(a(j, j));
                }
                rep.holder.rhs /= n;
            }
            a = std::move(next);
        }
        rep.levels.push_back(std::move(lv));
    }
    return rep;
}

QRecursionReport q_recursion_check(const ensemble::MatrixSample& X, const SpectralPoint& theta,
                                   const resolvent::IndexSets& sets, int k, int L,
                                   const resolvent::ResolventOptions& opts) {
    resolvent::ResolventPair Pc =
        resolvent::build_resolvents(X, theta, sets.with_column(k), opts);
    CVector x = X.raw()(resolvent::kept_positions(sets.J2, X.N), k - 1);
    return q_recursion(Pc.curlyG, x, X.N, theta.eta, L);
}

}  // namespace mplab::locallaw
