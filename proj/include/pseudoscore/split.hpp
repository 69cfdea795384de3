#pragma once

#include <cstdint>
#include <vector>

#include "pseudoscore/records.hpp"

namespace pseudoscore::scoring {

struct TrainTestSplit {
    std::vector<int> train_rows;
    std::vector<int> test_rows;
};

/// Stratified holdout split over the labeled rows; Unlabeled rows are left
/// out entirely. Each class lands in the training set at the requested
/// fraction rounded to the nearest count, clamped so both sides keep at
/// least one member per class. Throws when a class has fewer than two rows.
TrainTestSplit split_train_test(const std::vector<Label>& labels, double fraction,
                                std::uint64_t seed);

/// Stratified k-fold assignment: returns the test rows of each fold, classes
/// dealt round-robin after a seeded shuffle. Folds can end up single-class
/// when a class has fewer members than folds; callers decide how to react.
std::vector<std::vector<int>> stratified_folds(const std::vector<Label>& labels, int folds,
                                               std::uint64_t seed);

}  // namespace pseudoscore::scoring
