#pragma once

#include <vector>

#include "mplab/ensemble.hpp"
#include "mplab/resolvent.hpp"

namespace mplab::locallaw {

struct LambdaSolutions {
    cplx Lambda;       // Delta_N - Delta
    cplx LambdaTilde;  // -Lambda - 2 Delta - 1
    cplx Delta;
};

// Requires eta != 0 or E < 0.
LambdaSolutions lambda_solutions(cplx DeltaN, const SpectralPoint& theta);

enum class RMethod {
    explicit_minors,  // one inverse per removed column
    rank_one,         // Sherman-Morrison updates of the full resolvent (J1 = J2 = {} only)
};

// R = (1/N) sum_k G_kk (T_k + Upsilon_k) over kept columns k.
struct RResult {
    cplx R;
    cplx DeltaN;
    std::vector<int> labels;
    std::vector<cplx> summands;
    std::vector<cplx> Gkk;
    std::vector<cplx> Tk;
    std::vector<cplx> upsilon;
};

RResult compute_R(const ensemble::MatrixSample& X, const SpectralPoint& theta,
                  const resolvent::IndexSets& sets = {}, RMethod method = RMethod::explicit_minors,
                  const resolvent::ResolventOptions& opts = {});

// Rank-one path from an existing full resolvent pair of X_N.
RResult compute_R(const resolvent::ResolventPair& P, const CMatrix& XN);

// Lambda^2 + (2 Delta + 1) Lambda + R - |J1|/(N theta) = 0 holds exactly.
struct FluctuationRecord {
    SpectralPoint theta;
    cplx Delta;
    cplx DeltaN;
    cplx LambdaN;
    cplx LambdaTilde;
    cplx R;
    cplx R_effective;               // R - |J1|/(N theta)
    double quad_residual = 0.0;     // |Lambda^2 + (2 Delta + 1) Lambda + R_effective|
    double theta_form_residual = 0.0;  // |theta Delta Lambda^2 + (theta Delta^2 - 1) Lambda + Delta theta R_effective|
    double vieta_sum_residual = 0.0;
    double vieta_product_residual = 0.0;
    double lambda_composite = 0.0;
    bool in_domain = false;
};

FluctuationRecord fluctuation_record(const ensemble::MatrixSample& X, const SpectralPoint& theta,
                                     const resolvent::IndexSets& sets = {},
                                     const DomainParams& domain = {},
                                     RMethod method = RMethod::explicit_minors,
                                     const resolvent::ResolventOptions& opts = {});

FluctuationRecord fluctuation_record(const RResult& r, const SpectralPoint& theta, long N,
                                     std::size_t removed_columns, const DomainParams& domain = {});

// max{ |Lambda| 1[theta in S], min(|Lambda|, |LambdaTilde|), |Im Lambda| }
double lambda_composite_value(cplx Lambda, cplx LambdaTilde, bool in_domain);

struct CompositeResult {
    double lambda = 0.0;
    double bound = 0.0;  // C min{ |R| / |Delta + 1/2|, sqrt|R| }
    double slack = 0.0;  // bound - lambda
};

CompositeResult lambda_composite(const FluctuationRecord& record, double C);

// E_q with E|theta Lambda|^q supplied by the caller.
double control_parameter(int q, const SpectralPoint& theta, long N, double mean_abs_theta_lambda_q);

}  // namespace mplab::locallaw
