#include "mplab/identities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mplab::resolvent {

namespace {

// (M^2)_pp
cplx diag_of_square(const CMatrix& M, long p) {
    return M.row(p).transpose().cwiseProduct(M.col(p)).sum();
}

// (M - M^*) / (2i)
CMatrix imag_part(const CMatrix& M) { return (M - M.adjoint()) / cplx(0.0, 2.0); }

void check_pair(const IndexSets& sets, long N, int k, int l) {
    if (k == l) {
        throw std::invalid_argument("indices k and l must differ");
    }
    for (int v : {k, l}) {
        if (v < 1 || v > N || sets.removes_column(v) || sets.removes_row(v)) {
            throw std::invalid_argument("index " + std::to_string(v) +
                                        " must be kept as a column and as a row");
        }
    }
}

// M_ab = M^{(k)}_ab + M_ak M_kb / M_kk over a, b != k.
double max_minor_residual(const CMatrix& M, const CMatrix& Mk, long pk) {
    double worst = 0.0;
    cplx mkk = M(pk, pk);
    for (long a = 0, ak = 0; a < M.rows(); ++a) {
        if (a == pk) continue;
        for (long b = 0, bk = 0; b < M.cols(); ++b) {
            if (b == pk) continue;
            cplx rhs = Mk(ak, bk) + M(a, pk) * M(pk, b) / mkk;
            worst = std::max(worst, scaled_residual(M(a, b), rhs));
            ++bk;
        }
        ++ak;
    }
    return worst;
}

double ward_residual(const CMatrix& M, double eta) {
    double worst = 0.0;
    for (long k = 0; k < M.rows(); ++k) {
        worst = std::max(worst, scaled_residual(M.row(k).squaredNorm(), M(k, k).imag() / eta));
    }
    return worst;
}

double ward_matrix_residual(const CMatrix& M, double eta) {
    CMatrix lhs = M * M.adjoint();
    CMatrix rhs = imag_part(M) / eta;
    double scale = std::max({1.0, lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()});
    return (lhs - rhs).cwiseAbs().maxCoeff() / scale;
}

double ward_bound_slack(const CMatrix& M, double eta) {
    double worst = std::numeric_limits<double>::infinity();
    for (long k = 0; k < M.rows(); ++k) {
        worst = std::min(worst, M(k, k).imag() / eta - std::abs(diag_of_square(M, k)));
    }
    return worst;
}

double offdiag_bound_slack(const CMatrix& M, double eta) {
    double worst = std::numeric_limits<double>::infinity();
    for (long a = 0; a < M.rows(); ++a) {
        for (long b = 0; b < M.cols(); ++b) {
            if (a == b) continue;
            double rhs = 0.5 * std::sqrt(std::max(0.0, M(a, a).imag() / eta)) +
                         0.5 * std::sqrt(std::max(0.0, M(b, b).imag() / eta));
            worst = std::min(worst, rhs - std::abs(M(a, b)));
        }
    }
    return worst;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

IdentityRecord equality(std::string name, double residual, bool asserted = true) {
    return {std::move(name), residual, not_applicable, asserted};
}

IdentityRecord bound(std::string name, double slack, bool asserted = true) {
    return {std::move(name), not_applicable, slack, asserted};
}

}  // namespace

double IdentityReport::max_residual() const {
    double worst = 0.0;
    for (const auto& r : records) {
        if (r.asserted && !std::isnan(r.residual)) worst = std::max(worst, r.residual);
    }
    return worst;
}

double IdentityReport::min_slack() const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
        if (r.asserted && !std::isnan(r.slack)) worst = std::min(worst, r.slack);
    }
    return worst;
}

bool IdentityReport::holds(double residual_tol, double slack_tol) const {
    for (const auto& r : records) {
        if (!r.asserted) continue;
        if (!std::isnan(r.residual) && !(r.residual <= residual_tol)) return false;
        if (!std::isnan(r.slack) && !(r.slack >= slack_tol)) return false;
    }
    return true;
}

const IdentityRecord& IdentityReport::find(std::string_view identity) const {
    for (const auto& r : records) {
        if (r.identity == identity) return r;
    }
    throw std::out_of_range("no identity record named " + std::string(identity));
}

cplx upsilon_form(const CVector& x, const CMatrix& M, long N) {
    double n = static_cast<double>(N);
    return x.dot(M * x) / n - M.trace() / n;
}

EpsilonSplit epsilon_split(const CVector& x, const CMatrix& M, long N) {
    double n = static_cast<double>(N);
    EpsilonSplit out{0.0, 0.0};
    for (long j = 0; j < x.size(); ++j) {
        out.eps1 += (std::norm(x(j)) - 1.0) * M(j, j);
        cplx row = 0.0;
        for (long l = 0; l < x.size(); ++l) {
            if (l != j) row += M(j, l) * x(l);
        }
        out.eps2 += std::conj(x(j)) * row;
    }
    out.eps1 /= n;
    out.eps2 /= n;
    return out;
}

IdentityReport identity_suite(const ensemble::MatrixSample& X, const SpectralPoint& theta,
                              const IndexSets& sets, int k, int l, const ResolventOptions& opts) {
    const long N = X.N;
    check_pair(sets, N, k, l);
    const CMatrix XN = X.XN();
    const CMatrix raw = X.raw();
    const cplx z = theta.theta();
    const double eta = theta.eta;
    const double n = static_cast<double>(N);
    const double j1 = static_cast<double>(sets.J1.size());
    const double j2 = static_cast<double>(sets.J2.size());

    ResolventPair P = build_resolvents_scaled(XN, theta, sets, opts);
    ResolventPair Pc = build_resolvents_scaled(XN, theta, sets.with_column(k), opts);
    ResolventPair Pr = build_resolvents_scaled(XN, theta, sets.with_row(k), opts);
    ResolventPair Pbar = build_resolvents_scaled(XN, theta.conj(), sets, opts);

    const long kc = P.col_pos(k);
    const long kr = P.row_pos(k);
    IdentityReport rep;
    auto& out = rep.records;

    out.push_back(equality("minor_G", max_minor_residual(P.G, Pc.G, kc)));
    out.push_back(equality("minor_curlyG",
                           max_minor_residual(P.curlyG, Pr.curlyG, kr)));

    cplx trace_gap = P.curlyG.trace() - P.G.trace();
    out.push_back(equality("trace_relation", scaled_residual(trace_gap, -(j1 - j2) / z)));
    out.push_back(equality("trace_relation_plus_sign", scaled_residual(trace_gap, (j1 - j2) / z), false));

    out.push_back(equality("ward_G", ward_residual(P.G, eta)));
    out.push_back(equality("ward_curlyG", ward_residual(P.curlyG, eta)));
    out.push_back(equality("ward_matrix_G", ward_matrix_residual(P.G, eta)));
    out.push_back(equality("ward_matrix_curlyG", ward_matrix_residual(P.curlyG, eta)));
    out.push_back(bound("ward_bound_G", ward_bound_slack(P.G, eta)));
    out.push_back(bound("ward_bound_curlyG", ward_bound_slack(P.curlyG, eta)));
    out.push_back(bound("im_trace_positive", std::copysign(1.0, eta) * P.G.trace().imag() / n));

    out.push_back(equality("conjugate_symmetry_G", max_abs_diff(Pbar.G, P.G.adjoint())));
    out.push_back(equality("conjugate_symmetry_curlyG", max_abs_diff(Pbar.curlyG, P.curlyG.adjoint())));

    // Schur complements with the removed column / row vector of sqrt(N) X_N.
    CVector xcol = raw(kept_positions(sets.J2, N), k - 1);
    cplx qcol = xcol.dot(Pc.curlyG * xcol) / n;
    out.push_back(equality("schur_G", scaled_residual(P.G(kc, kc), -1.0 / (z * (1.0 + qcol)))));
    CVector xrow = raw(k - 1, kept_positions(sets.J1, N)).adjoint();
    cplx qrow = xrow.dot(Pr.G * xrow) / n;
    out.push_back(equality("schur_curlyG", scaled_residual(P.curlyG(kr, kr), -1.0 / (z * (1.0 + qrow)))));

    cplx Tk = (Pc.curlyG.trace() - P.G.trace()) / n;
    cplx g2 = diag_of_square(P.G, kc);
    cplx closed = -(j1 + 1.0 - j2) / (n * z) - g2 / (n * P.G(kc, kc));
    cplx literal = -(j1 - j2) / (n * z) - g2 / (n * P.G(kc, kc));
    out.push_back(equality("T_k_closed_form", scaled_residual(Tk, closed)));
    out.push_back(equality("T_k_literal_form", scaled_residual(Tk, literal), false));

    cplx cTk = (Pr.G.trace() - P.curlyG.trace()) / n;
    cplx cg2 = diag_of_square(P.curlyG, kr);
    cplx cclosed = (j1 - j2 - 1.0) / (n * z) - cg2 / (n * P.curlyG(kr, kr));
    out.push_back(equality("curlyT_k_closed_form", scaled_residual(cTk, cclosed)));

    double tbound = (std::abs(j1 - j2) + 1.0) / (n * std::abs(eta));
    out.push_back(bound("T_k_bound", tbound - std::abs(Tk)));
    out.push_back(bound("curlyT_k_bound", tbound - std::abs(cTk)));

    out.push_back(bound("offdiag_bound_curlyG", offdiag_bound_slack(P.curlyG, eta)));
    out.push_back(bound("offdiag_bound_G", offdiag_bound_slack(P.G, eta)));

    for (int s : {2, 4, 16}) {
        ResolventPair Ps = build_resolvents_scaled(XN, {theta.E, eta / s}, sets, opts);
        double abs_slack = std::numeric_limits<double>::infinity();
        double im_slack = std::numeric_limits<double>::infinity();
        auto scan = [&](const CMatrix& M, const CMatrix& Ms) {
            for (long a = 0; a < M.rows(); ++a) {
                abs_slack = std::min(abs_slack, s * std::abs(M(a, a)) - std::abs(Ms(a, a)));
                im_slack = std::min(im_slack, std::copysign(1.0, eta) *
                                                  (s * M(a, a).imag() - Ms(a, a).imag()));
            }
        };
        scan(P.G, Ps.G);
        scan(P.curlyG, Ps.curlyG);
        out.push_back(bound("eta_monotone_abs_s" + std::to_string(s), abs_slack));
        out.push_back(bound("eta_monotone_im_s" + std::to_string(s), im_slack));
    }

    QuadraticForms qf = quadratic_forms(X, theta, sets, k, l, opts);
    out.push_back(equality("upsilon_decomposition", qf.decomposition_residual));
    out.push_back(equality("self_consistent_G", qf.schur_G_residual));
    out.push_back(equality("self_consistent_curlyG", qf.schur_curlyG_residual));
    out.push_back(equality("K_factorization", qf.K_factorization_residual));
    out.push_back(equality("curlyK_factorization", qf.curlyK_factorization_residual));
    return rep;
}

QuadraticForms quadratic_forms(const ensemble::MatrixSample& X, const SpectralPoint& theta,
                               const IndexSets& sets, int k, int l, const ResolventOptions& opts) {
    const long N = X.N;
    check_pair(sets, N, k, l);
    const CMatrix XN = X.XN();
    const CMatrix raw = X.raw();
    const cplx z = theta.theta();
    const cplx rz = std::sqrt(z);
    const double n = static_cast<double>(N);

    ResolventPair P = build_resolvents_scaled(XN, theta, sets, opts);
    ResolventPair Pc = build_resolvents_scaled(XN, theta, sets.with_column(k), opts);
    ResolventPair Pr = build_resolvents_scaled(XN, theta, sets.with_row(k), opts);

    const auto rows = kept_positions(sets.J2, N);
    const auto cols = kept_positions(sets.J1, N);
    CVector xk = raw(rows, k - 1);
    CVector xk_row = raw(k - 1, cols).adjoint();

    QuadraticForms q;
    q.upsilon = upsilon_form(xk, Pc.curlyG, N);
    EpsilonSplit e = epsilon_split(xk, Pc.curlyG, N);
    q.eps1 = e.eps1;
    q.eps2 = e.eps2;
    q.decomposition_residual = std::abs(q.upsilon - (q.eps1 + q.eps2));
    q.Y = upsilon_form(xk_row, Pr.G, N);
    q.Tk = (Pc.curlyG.trace() - P.G.trace()) / n;
    q.curlyTk = (Pr.G.trace() - P.curlyG.trace()) / n;

    const long kc = P.col_pos(k);
    const long kr = P.row_pos(k);
    q.schur_G_residual =
        scaled_residual(P.G(kc, kc), -1.0 / (z * (1.0 + P.DeltaN() + q.Tk + q.upsilon)));
    q.schur_curlyG_residual = scaled_residual(
        P.curlyG(kr, kr), -1.0 / (z * (1.0 + P.curlyG.trace() / n + q.curlyTk + q.Y)));

    // Off-diagonal factorizations.
    ResolventPair Pcl = build_resolvents_scaled(XN, theta, sets.with_column(l), opts);
    ResolventPair Pckl = build_resolvents_scaled(XN, theta, sets.with_column(k).with_column(l), opts);
    CVector xl = raw(rows, l - 1);
    q.Kkl = rz * xk.dot(Pckl.curlyG * xl) / n;
    cplx lhs = rz * P.G_at(k, l);
    cplx rhs = rz * P.G_at(l, l) * rz * Pcl.G_at(k, k) * q.Kkl;
    q.K_factorization_residual = scaled_residual(lhs, rhs);

    ResolventPair Prl = build_resolvents_scaled(XN, theta, sets.with_row(l), opts);
    ResolventPair Prkl = build_resolvents_scaled(XN, theta, sets.with_row(k).with_row(l), opts);
    Eigen::RowVectorXcd rk = raw(k - 1, cols);
    Eigen::RowVectorXcd rl = raw(l - 1, cols);
    q.curlyKkl = rz * (rk * Prkl.G * rl.adjoint())(0, 0) / n;
    cplx clhs = rz * P.curlyG_at(k, l);
    cplx crhs = rz * P.curlyG_at(l, l) * rz * Prl.curlyG_at(k, k) * q.curlyKkl;
    q.curlyK_factorization_residual = scaled_residual(clhs, crhs);
    return q;
}

}  // namespace mplab::resolvent
