#pragma once

// Random-forest regression over the annual factor table with impurity-based
// feature importances. Bagged regression trees grown greedily on variance
// reduction; all features are candidates at every split.

#include <cstdint>
#include <span>
#include <vector>

#include "ebikecast/factors.hpp"
#include "ebikecast/rng.hpp"

namespace ebikecast::forest {

/// Flat tree storage. A node is a leaf when feature < 0.
struct TreeNode {
    int feature = -1;         ///< split feature index, -1 for leaves
    double threshold = 0.0;   ///< midpoint of adjacent observed values
    double prediction = 0.0;  ///< mean training target in this node
    int n_samples = 0;
    double impurity_decrease = 0.0;  ///< parent impurity - weighted child impurity
    int left = -1;
    int right = -1;
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(std::span<const double> features) const;
};

struct ForestModel {
    std::vector<Tree> trees;
    std::vector<double> importances;  ///< normalized, sums to 1 when any split exists
    std::uint64_t seed = 0;
    bool constant_target = false;     ///< set when no tree could split
};

struct SplitResult {
    FactorTable train;
    FactorTable test;
};

/// Seeded uniform shuffle, then ceil(test_fraction * n) rows become the test
/// set and the rest train (matching the usual library rounding); both sides
/// must end up nonempty. Deterministic per seed.
SplitResult split_data(const FactorTable& table, double test_fraction, std::uint64_t seed);

/// Grows one tree on a bootstrap resample (with replacement, same size)
/// drawn from `rng`. Splitting stops below 2 samples or at zero impurity.
/// Every feature is a candidate at every split, examined in a per-node
/// random order from the same stream; exactly tied gains keep the feature
/// examined first, and threshold ties keep the lowest threshold.
Tree fit_tree(const FactorTable& train, Rng& rng);

/// n_trees trees on independent streams derived from (seed, tree index);
/// importances accumulate (n_samples/total) * impurity_decrease over every
/// split of every tree and are normalized to sum 1.
ForestModel fit_forest(const FactorTable& train, int n_trees, std::uint64_t seed);

/// Mean of the per-tree predictions.
double predict(const ForestModel& model, std::span<const double> features);

struct EvalMetrics {
    double mae = 0.0;       ///< mean |prediction - target|
    double mape = 0.0;      ///< mean of 100 * |error| / target
    double accuracy = 0.0;  ///< 100 - mape
};

/// Test targets must be nonzero (MAPE is undefined otherwise).
EvalMetrics evaluate(const ForestModel& model, const FactorTable& test);

}  // namespace ebikecast::forest
