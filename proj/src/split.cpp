#include "pseudoscore/split.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pseudoscore/rng.hpp"

namespace pseudoscore::scoring {

namespace {

std::pair<std::vector<int>, std::vector<int>> labeled_rows(const std::vector<Label>& labels) {
    std::vector<int> bad, good;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == Label::Bad) bad.push_back(static_cast<int>(i));
        else if (labels[i] == Label::Good) good.push_back(static_cast<int>(i));
    }
    return {std::move(bad), std::move(good)};
}

}  // namespace

TrainTestSplit split_train_test(const std::vector<Label>& labels, double fraction,
                                std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("split_train_test: fraction must lie in (0,1)");
    auto [bad, good] = labeled_rows(labels);
    if (bad.size() < 2 || good.size() < 2)
        throw std::invalid_argument("split_train_test: each class needs at least two rows");

    TrainTestSplit split;
    const auto deal = [&](std::vector<int>& rows, const char* tag) {
        Rng rng(derive_seed(seed, tag));
        rng.shuffle(rows);
        auto take = static_cast<std::size_t>(
            std::lround(fraction * static_cast<double>(rows.size())));
        take = std::clamp(take, std::size_t{1}, rows.size() - 1);
        split.train_rows.insert(split.train_rows.end(), rows.begin(),
                                rows.begin() + static_cast<std::ptrdiff_t>(take));
        split.test_rows.insert(split.test_rows.end(),
                               rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
    };
    deal(bad, "split.bad");
    deal(good, "split.good");
    std::sort(split.train_rows.begin(), split.train_rows.end());
    std::sort(split.test_rows.begin(), split.test_rows.end());
    return split;
}

std::vector<std::vector<int>> stratified_folds(const std::vector<Label>& labels, int folds,
                                               std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("stratified_folds: need at least two folds");
    auto [bad, good] = labeled_rows(labels);
    if (bad.size() + good.size() < static_cast<std::size_t>(folds))
        throw std::invalid_argument("stratified_folds: fewer labeled rows than folds");

    std::vector<std::vector<int>> out(static_cast<std::size_t>(folds));
    const auto deal = [&](std::vector<int>& rows, const char* tag) {
        Rng rng(derive_seed(seed, tag));
        rng.shuffle(rows);
        for (std::size_t i = 0; i < rows.size(); ++i)
            out[i % static_cast<std::size_t>(folds)].push_back(rows[i]);
    };
    deal(bad, "folds.bad");
    deal(good, "folds.good");
    for (auto& fold : out) std::sort(fold.begin(), fold.end());
    return out;
}

}  // namespace pseudoscore::scoring
