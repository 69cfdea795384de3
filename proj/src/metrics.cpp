#include "pseudoscore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pseudoscore/log.hpp"

namespace pseudoscore::eval {

namespace {

void check_labeled(const std::vector<double>& scores, const std::vector<Label>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("metrics: scores and labels differ in length");
    if (scores.empty()) throw std::invalid_argument("metrics: empty input");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == Label::Unlabeled)
            throw std::invalid_argument("metrics: Unlabeled row; filter before evaluating");
        if (std::isnan(scores[i])) throw std::invalid_argument("metrics: NaN score");
    }
}

std::pair<std::size_t, std::size_t> class_counts(const std::vector<Label>& labels) {
    std::size_t bad = 0, good = 0;
    for (Label l : labels) (l == Label::Bad ? bad : good) += 1;
    return {bad, good};
}

}  // namespace

double auc(const std::vector<double>& scores, const std::vector<Label>& labels) {
    check_labeled(scores, labels);
    const auto [n_bad, n_good] = class_counts(labels);
    if (n_bad == 0 || n_good == 0)
        throw std::invalid_argument("auc: both classes must be present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks over tied blocks, then the Mann-Whitney identity.
    double bad_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]] == Label::Bad) bad_rank_sum += rank;
        i = j;
    }
    const double nb = static_cast<double>(n_bad), ng = static_cast<double>(n_good);
    return (bad_rank_sum - nb * (nb + 1.0) / 2.0) / (nb * ng);
}

double brier(const std::vector<double>& scores, const std::vector<Label>& labels) {
    check_labeled(scores, labels);
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double y = labels[i] == Label::Bad ? 1.0 : 0.0;
        const double d = scores[i] - y;
        sum += d * d;
    }
    return sum / static_cast<double>(scores.size());
}

namespace {

// Candidate operating points: reject every row scoring >= t, one point per
// distinct observed score plus "reject nobody". Sorted by rejection share.
struct OperatingPoint {
    double f_bad;   // rejected share of the Bad class
    double f_good;  // rejected share of the Good class
};

std::vector<OperatingPoint> operating_points(const std::vector<double>& scores,
                                             const std::vector<Label>& labels, std::size_t n_bad,
                                             std::size_t n_good) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<OperatingPoint> points;
    points.push_back({0.0, 0.0});
    std::size_t bad_cut = 0, good_cut = 0, i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] == Label::Bad ? bad_cut : good_cut) += 1;
            ++j;
        }
        points.push_back({static_cast<double>(bad_cut) / static_cast<double>(n_bad),
                          static_cast<double>(good_cut) / static_cast<double>(n_good)});
        i = j;
    }
    return points;
}

}  // namespace

std::vector<std::pair<double, double>> roc_points(const std::vector<double>& scores,
                                                  const std::vector<Label>& labels) {
    check_labeled(scores, labels);
    const auto [n_bad, n_good] = class_counts(labels);
    if (n_bad == 0 || n_good == 0)
        throw std::invalid_argument("roc_points: both classes must be present");
    std::vector<std::pair<double, double>> roc;
    for (const auto& pt : operating_points(scores, labels, n_bad, n_good))
        roc.emplace_back(pt.f_good, pt.f_bad);  // (fpr, tpr) with Bad positive
    return roc;
}

ProfitResult profit_measure(const std::vector<double>& scores, const std::vector<Label>& labels,
                            const ProfitParams& params) {
    check_labeled(scores, labels);
    if (!(params.roi > 0.0 && params.roi < 1.0))
        throw std::invalid_argument("profit_measure: roi must lie in (0,1)");
    if (params.p0 < 0 || params.p0 > 1 || params.p1 < 0 || params.p1 > 1 ||
        params.p0 + params.p1 > 1.0 + 1e-12)
        throw std::invalid_argument("profit_measure: lambda masses must be probabilities, p0+p1 <= 1");
    if (params.prior_bad && !(*params.prior_bad > 0.0 && *params.prior_bad < 1.0))
        throw std::invalid_argument("profit_measure: prior_bad must lie in (0,1)");
    if (params.lambda_grid < 2)
        throw std::invalid_argument("profit_measure: lambda_grid must be at least 2");
    const auto [n_bad, n_good] = class_counts(labels);
    if (n_bad == 0 || n_good == 0)
        throw std::invalid_argument("profit_measure: both classes must be present");
    if (params.p0 == 1.0)
        Log::warn("eval", "lambda mass fully at zero loss; expected profit is trivially 0");

    const double total = static_cast<double>(n_bad + n_good);
    const double pi_bad =
        params.prior_bad ? *params.prior_bad : static_cast<double>(n_bad) / total;
    const double pi_good = 1.0 - pi_bad;
    const auto points = operating_points(scores, labels, n_bad, n_good);

    // Points are ordered by rejection share, so keeping strict improvements
    // leaves the smallest rejecting cutoff among profit ties.
    const auto best_at = [&](double lambda) {
        double best = -1e300, best_frac = 0.0;
        for (const auto& pt : points) {
            const double profit = lambda * pi_bad * pt.f_bad - params.roi * pi_good * pt.f_good;
            if (profit > best) {
                best = profit;
                best_frac = pi_bad * pt.f_bad + pi_good * pt.f_good;
            }
        }
        return std::make_pair(best, best_frac);
    };

    ProfitResult out;
    const auto [p_at0, f_at0] = best_at(0.0);
    const auto [p_at1, f_at1] = best_at(1.0);
    out.emp = params.p0 * p_at0 + params.p1 * p_at1;
    out.rejection_fraction = params.p0 * f_at0 + params.p1 * f_at1;

    const double middle = 1.0 - params.p0 - params.p1;
    if (middle > 1e-15) {
        const int g = params.lambda_grid;
        double profit_integral = 0.0, frac_integral = 0.0;
        for (int k = 0; k < g; ++k) {
            const double lambda = static_cast<double>(k) / static_cast<double>(g - 1);
            const auto [p, f] = best_at(lambda);
            const double w = (k == 0 || k == g - 1) ? 0.5 : 1.0;
            profit_integral += w * p;
            frac_integral += w * f;
        }
        const double h = 1.0 / static_cast<double>(g - 1);
        out.emp += middle * profit_integral * h;
        out.rejection_fraction += middle * frac_integral * h;
    }
    return out;
}

}  // namespace pseudoscore::eval
