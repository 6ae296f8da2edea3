#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mplab::experiment {

// 17 significant digits; NaN is written as an empty cell.
std::string format_number(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
};

void write_csv(const Table& table, std::ostream& out);
std::string to_csv(const Table& table);

// Fixed headers per experiment kind.
namespace headers {
inline const std::vector<std::string> identities = {"N", "replica", "seed", "dist", "E", "eta", "J1",
                                                    "J2", "k", "l", "identity", "residual", "slack",
                                                    "asserted"};
inline const std::vector<std::string> qf = {"N", "replica", "seed", "dist", "E", "eta", "k", "l",
                                            "quantity", "re", "im"};
inline const std::vector<std::string> law_scan = {"E", "eta", "N", "dist", "replicas", "stat_name",
                                                  "value", "stderr"};
inline const std::vector<std::string> q_recursion = {
    "N", "replica", "seed", "dist", "E", "eta", "nu", "Q", "Qhat", "decomposition_residual",
    "arr_min_slack", "cs_min_slack"};
inline const std::vector<std::string> pleijel = {"N", "replica", "seed", "dist", "E", "eta0",
                                                 "estimate", "raw", "correction", "remainder",
                                                 "direct", "scaled_error"};
inline const std::vector<std::string> counting = {"N", "E", "stat", "quantile", "value"};
inline const std::vector<std::string> rigidity = {"N", "dist", "replica", "a", "lambda_a", "gamma_a",
                                                  "stat_bulk", "stat_edge"};
inline const std::vector<std::string> inequalities = {"inequality", "p", "N", "family", "dist",
                                                      "ratio", "stderr"};
inline const std::vector<std::string> mp_eval = {"E", "eta", "re_delta", "im_delta", "density",
                                                 "cdf", "in_domain", "above_threshold"};
}  // namespace headers

}  // namespace mplab::experiment
