#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pseudoscore/records.hpp"

namespace pseudoscore::eval {

/// Probability that a random Bad outranks a random Good, ties counted half.
/// Bad is the positive class throughout. Throws std::invalid_argument on
/// single-class or Unlabeled input.
double auc(const std::vector<double>& scores, const std::vector<Label>& labels);

/// Mean squared error of the score against the outcome indicator (Bad = 1).
double brier(const std::vector<double>& scores, const std::vector<Label>& labels);

/// (false positive rate, true positive rate) pairs swept over all score
/// cutoffs, from (0,0) to (1,1). Exported raw; plotting happens elsewhere.
std::vector<std::pair<double, double>> roc_points(const std::vector<double>& scores,
                                                  const std::vector<Label>& labels);

/// Economic evaluation parameters. A defaulted loan loses a fraction
/// lambda of its value; lambda is 0 with probability p0, 1 with probability
/// p1 and uniform on [0,1] with the remaining mass. Granting to a payer
/// earns roi. prior_bad overrides the empirical class prior when set.
struct ProfitParams {
    double roi = 0.26;
    double p0 = 0.55;
    double p1 = 0.10;
    std::optional<double> prior_bad;
    int lambda_grid = 1001;  // trapezoid points for the uniform part
};

struct ProfitResult {
    double emp = 0.0;                 // expected maximum profit per customer
    double rejection_fraction = 0.0;  // lambda-averaged optimal rejection share
};

/// Picks, for every loss fraction lambda, the score cutoff maximizing
/// per-customer profit lambda*pi_bad*F_bad(t) - roi*pi_good*F_good(t),
/// where F_* are the class-conditional rejection rates when rejecting
/// scores >= t. Averages the maxima over the lambda distribution. Cutoff
/// ties resolve toward rejecting fewer customers.
ProfitResult profit_measure(const std::vector<double>& scores, const std::vector<Label>& labels,
                            const ProfitParams& params = {});

}  // namespace pseudoscore::eval
