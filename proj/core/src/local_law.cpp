#include "mplab/local_law.hpp"

#include <cmath>
#include <stdexcept>

#include "mplab/linalg.hpp"
#include "mplab/mp_analytics.hpp"

namespace mplab::locallaw {

using resolvent::IndexSets;
using resolvent::kept_positions;

LambdaSolutions lambda_solutions(cplx DeltaN, const SpectralPoint& theta) {
    cplx delta = mp::stieltjes(theta);
    cplx lambda = DeltaN - delta;
    return {lambda, -lambda - 2.0 * delta - 1.0, delta};
}

namespace {

RResult compute_R_explicit(const CMatrix& XN, const CMatrix& raw, const SpectralPoint& theta,
                           const IndexSets& sets, const resolvent::ResolventOptions& opts) {
    const long N = XN.rows();
    const double n = static_cast<double>(N);
    const cplx z = theta.theta();
    resolvent::ResolventPair P = resolvent::build_resolvents_scaled(XN, theta, sets, opts);
    CMatrix Y = resolvent::minor_matrix(XN, sets);
    CMatrix outer = linalg::gram_outer(Y);
    const auto rows = kept_positions(sets.J2, N);

    RResult out;
    out.DeltaN = P.DeltaN();
    out.R = 0.0;
    for (std::size_t p = 0; p < P.col_labels.size(); ++p) {
        int k = P.col_labels[p];
        CVector y = Y.col(static_cast<long>(p));
        CMatrix curlyGk = linalg::shifted_inverse(outer - y * y.adjoint(), z);
        cplx trk = curlyGk.trace();
        CVector x = raw(rows, k - 1);
        cplx upsilon = x.dot(curlyGk * x) / n - trk / n;
        cplx Tk = (trk - P.G.trace()) / n;
        cplx gkk = P.G(static_cast<long>(p), static_cast<long>(p));
        cplx term = gkk * (Tk + upsilon);
        out.labels.push_back(k);
        out.Gkk.push_back(gkk);
        out.Tk.push_back(Tk);
        out.upsilon.push_back(upsilon);
        out.summands.push_back(term);
        out.R += term;
    }
    out.R /= n;
    return out;
}

}  // namespace

RResult compute_R(const resolvent::ResolventPair& P, const CMatrix& XN) {
    if (!P.sets.J1.empty() || !P.sets.J2.empty() || P.N != XN.rows()) {
        throw std::invalid_argument("compute_R: rank-one updates need the full resolvent pair");
    }
    const long N = XN.rows();
    const double n = static_cast<double>(N);
    CMatrix W = P.curlyG * XN;
    CMatrix U = P.curlyG.adjoint() * XN;
    const cplx trG = P.G.trace();
    const cplx trC = P.curlyG.trace();

    RResult out;
    out.DeltaN = trG / n;
    out.R = 0.0;
    for (long k = 0; k < N; ++k) {
        cplx c = XN.col(k).dot(W.col(k));
        cplx d = U.col(k).dot(W.col(k));
        cplx trk = trC + d / (1.0 - c);
        cplx upsilon = c / (1.0 - c) - trk / n;
        cplx Tk = (trk - trG) / n;
        cplx gkk = P.G(k, k);
        cplx term = gkk * (Tk + upsilon);
        out.labels.push_back(static_cast<int>(k + 1));
        out.Gkk.push_back(gkk);
        out.Tk.push_back(Tk);
        out.upsilon.push_back(upsilon);
        out.summands.push_back(term);
        out.R += term;
    }
    out.R /= n;
    return out;
}

RResult compute_R(const ensemble::MatrixSample& X, const SpectralPoint& theta, const IndexSets& sets,
                  RMethod method, const resolvent::ResolventOptions& opts) {
    if (X.N > opts.dense_cap) {
        throw std::invalid_argument("compute_R: N exceeds the dense cap");
    }
    sets.validate(X.N);
    if (method == RMethod::rank_one) {
        if (!sets.J1.empty() || !sets.J2.empty()) {
            throw std::invalid_argument("compute_R: rank-one updates need J1 = J2 = {}");
        }
        CMatrix XN = X.XN();
        return compute_R(resolvent::build_resolvents_scaled(XN, theta, {}, opts), XN);
    }
    return compute_R_explicit(X.XN(), X.raw(), theta, sets, opts);
}

FluctuationRecord fluctuation_record(const RResult& r, const SpectralPoint& theta, long N,
                                     std::size_t removed_columns, const DomainParams& domain) {
    LambdaSolutions ls = lambda_solutions(r.DeltaN, theta);
    const cplx z = theta.theta();
    const cplx d = ls.Delta;
    const cplx L = ls.Lambda;

    FluctuationRecord f;
    f.theta = theta;
    f.Delta = d;
    f.DeltaN = r.DeltaN;
    f.LambdaN = L;
    f.LambdaTilde = ls.LambdaTilde;
    f.R = r.R;
    f.R_effective = r.R - static_cast<double>(removed_columns) / (static_cast<double>(N) * z);
    f.quad_residual = std::abs(L * L + (2.0 * d + 1.0) * L + f.R_effective);
    f.theta_form_residual = std::abs(z * d * L * L + (z * d * d - 1.0) * L + d * z * f.R_effective);
    f.vieta_sum_residual = std::abs(L + f.LambdaTilde + 2.0 * d + 1.0);
    f.vieta_product_residual = std::abs(L * f.LambdaTilde - f.R_effective);
    f.in_domain = theta.eta > 0.0 && mp::in_domain_S(theta.E, theta.eta, domain);
    f.lambda_composite = lambda_composite_value(L, f.LambdaTilde, f.in_domain);
    return f;
}

FluctuationRecord fluctuation_record(const ensemble::MatrixSample& X, const SpectralPoint& theta,
                                     const IndexSets& sets, const DomainParams& domain,
                                     RMethod method, const resolvent::ResolventOptions& opts) {
    return fluctuation_record(compute_R(X, theta, sets, method, opts), theta, X.N, sets.J1.size(),
                              domain);
}

double lambda_composite_value(cplx Lambda, cplx LambdaTilde, bool in_domain) {
    double a = in_domain ? std::abs(Lambda) : 0.0;
    double b = std::min(std::abs(Lambda), std::abs(LambdaTilde));
    double c = std::abs(Lambda.imag());
    return std::max({a, b, c});
}

CompositeResult lambda_composite(const FluctuationRecord& record, double C) {
    CompositeResult out;
    out.lambda = record.lambda_composite;
    double r = std::abs(record.R_effective);
    out.bound = C * std::min(r / std::abs(record.Delta + 0.5), std::sqrt(r));
    out.slack = out.bound - out.lambda;
    return out;
}

double control_parameter(int q, const SpectralPoint& theta, long N, double mean_abs_theta_lambda_q) {
    if (q < 1) {
        throw std::invalid_argument("control_parameter: q must be positive");
    }
    const double n = static_cast<double>(N);
    const double at = std::abs(theta.theta());
    const double neta = n * theta.eta;
    const double im = (at * mp::stieltjes(theta)).imag();
    double first = 1.0 / (std::pow(n, q) * std::pow(at, 0.5 * q));
    double a = (std::pow(im, q) + mean_abs_theta_lambda_q) / std::pow(neta, q);
    double b = std::pow(at, q) / std::pow(neta, 2.0 * q);
    return first + std::max(a, b);
}

}  // namespace mplab::locallaw
