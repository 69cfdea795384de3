#pragma once

#include <cstdint>
#include <vector>

namespace pseudoscore::eval {

struct ComparisonResult {
    double delta = 0.0;    // mean of a - b over folds
    double ci_low = 0.0;   // 95% percentile bootstrap interval
    double ci_high = 0.0;
    double p_value = 1.0;  // two-sided, for zero mean difference
};

/// Paired bootstrap over per-fold metric values. Resamples the fold
/// differences with replacement; the p-value doubles the smaller tail mass
/// of the resampled mean around zero, with the usual +1 correction so it
/// never reaches 0 exactly. Deterministic per seed.
ComparisonResult compare_models(const std::vector<double>& per_fold_a,
                                const std::vector<double>& per_fold_b, int bootstrap_rounds = 10000,
                                std::uint64_t seed = 0);

}  // namespace pseudoscore::eval
