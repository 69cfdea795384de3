#include "pseudoscore/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pseudoscore/rng.hpp"

namespace pseudoscore::eval {

namespace {

// Percentile with linear interpolation between order statistics.
double percentile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace

ComparisonResult compare_models(const std::vector<double>& per_fold_a,
                                const std::vector<double>& per_fold_b, int bootstrap_rounds,
                                std::uint64_t seed) {
    if (per_fold_a.size() != per_fold_b.size())
        throw std::invalid_argument("compare_models: fold vectors differ in length");
    if (per_fold_a.size() < 2)
        throw std::invalid_argument("compare_models: need at least two folds");
    if (bootstrap_rounds < 1)
        throw std::invalid_argument("compare_models: bootstrap_rounds must be positive");

    const std::size_t n = per_fold_a.size();
    std::vector<double> diff(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        diff[i] = per_fold_a[i] - per_fold_b[i];
        sum += diff[i];
    }

    ComparisonResult out;
    out.delta = sum / static_cast<double>(n);

    Rng rng(derive_seed(seed, "compare.bootstrap"));
    std::vector<double> means(static_cast<std::size_t>(bootstrap_rounds));
    std::size_t at_most_zero = 0, at_least_zero = 0;
    for (auto& m : means) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += diff[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))];
        m = s / static_cast<double>(n);
        if (m <= 0.0) ++at_most_zero;
        if (m >= 0.0) ++at_least_zero;
    }
    std::sort(means.begin(), means.end());
    out.ci_low = percentile(means, 0.025);
    out.ci_high = percentile(means, 0.975);

    const double denom = static_cast<double>(bootstrap_rounds) + 1.0;
    const double tail = std::min(static_cast<double>(at_most_zero) + 1.0,
                                 static_cast<double>(at_least_zero) + 1.0) /
                        denom;
    out.p_value = std::min(1.0, 2.0 * tail);
    return out;
}

}  // namespace pseudoscore::eval
