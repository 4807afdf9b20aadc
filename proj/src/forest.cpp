#include "ebikecast/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ebikecast/error.hpp"

namespace ebikecast::forest {

double Tree::predict(std::span<const double> features) const {
    int node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(node)];
        node = features[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].prediction;
}

SplitResult split_data(const FactorTable& table, double test_fraction, std::uint64_t seed) {
    const std::size_t n = table.n_rows();
    if (n < 3) throw Error(errc::precondition, "need at least 3 rows to split");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw Error(errc::precondition, "test fraction must lie in (0, 1)");
    }
    std::size_t n_test = static_cast<std::size_t>(
        std::ceil(test_fraction * static_cast<double>(n)));
    n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        std::swap(order[i], order[rng.next_below(i + 1)]);
    }
    const std::span<const std::size_t> shuffled(order);
    return SplitResult{table.select(shuffled.subspan(0, n - n_test)),
                       table.select(shuffled.subspan(n - n_test))};
}

namespace {

struct NodeStats {
    double mean = 0.0;
    double impurity = 0.0;  // mean squared deviation from the node mean
};

NodeStats stats(const FactorTable& data, std::span<const std::size_t> rows) {
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t r : rows) {
        const double y = data.target(r);
        s += y;
        s2 += y * y;
    }
    const double n = static_cast<double>(rows.size());
    NodeStats out;
    out.mean = s / n;
    out.impurity = std::max(s2 / n - out.mean * out.mean, 0.0);
    return out;
}

struct BestSplit {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
    std::size_t left_count = 0;
};

// Exhaustive scan over (feature, midpoint) candidates; `scratch` is the
// row-index buffer re-sorted per feature. Features are visited in a random
// order drawn from the tree's stream so exactly tied gains (features that
// induce the same partition) do not always resolve to the lowest column;
// within a feature, ties keep the lowest threshold.
BestSplit find_split(const FactorTable& data, std::vector<std::size_t>& rows,
                     const NodeStats& parent, Rng& rng) {
    BestSplit best;
    const std::size_t n = rows.size();
    std::vector<std::size_t> scratch(rows);
    double total = 0.0;
    double total_sq = 0.0;
    for (std::size_t r : rows) {
        total += data.target(r);
        total_sq += data.target(r) * data.target(r);
    }
    std::vector<std::size_t> feature_order(data.n_features());
    std::iota(feature_order.begin(), feature_order.end(), std::size_t{0});
    for (std::size_t i = feature_order.size(); i > 1; --i) {
        std::swap(feature_order[i - 1], feature_order[rng.next_below(i)]);
    }
    for (std::size_t f : feature_order) {
        std::sort(scratch.begin(), scratch.end(), [&](std::size_t a, std::size_t b) {
            const double va = data.feature(a, f);
            const double vb = data.feature(b, f);
            return va != vb ? va < vb : a < b;
        });
        double left_sum = 0.0;
        double left_sq = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double y = data.target(scratch[i]);
            left_sum += y;
            left_sq += y * y;
            const double v = data.feature(scratch[i], f);
            const double v_next = data.feature(scratch[i + 1], f);
            if (v == v_next) continue;  // no boundary between equal values
            const double n_left = static_cast<double>(i + 1);
            const double n_right = static_cast<double>(n - i - 1);
            const double left_imp =
                std::max(left_sq / n_left - (left_sum / n_left) * (left_sum / n_left), 0.0);
            const double right_sum = total - left_sum;
            const double right_sq = total_sq - left_sq;
            const double right_imp = std::max(
                right_sq / n_right - (right_sum / n_right) * (right_sum / n_right), 0.0);
            const double gain = parent.impurity - (n_left * left_imp + n_right * right_imp) /
                                                      static_cast<double>(n);
            if (gain > best.gain) {  // ties keep the first candidate examined
                best.feature = static_cast<int>(f);
                best.threshold = 0.5 * (v + v_next);
                best.gain = gain;
                best.left_count = i + 1;
            }
        }
    }
    if (best.feature >= 0) {
        // Re-sort rows by the winning feature so the caller can partition.
        std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
            const double va = data.feature(a, static_cast<std::size_t>(best.feature));
            const double vb = data.feature(b, static_cast<std::size_t>(best.feature));
            return va != vb ? va < vb : a < b;
        });
    }
    return best;
}

int grow(const FactorTable& data, std::vector<std::size_t> rows, std::vector<TreeNode>& nodes,
         Rng& rng) {
    const NodeStats node_stats = stats(data, rows);
    const int index = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{});
    TreeNode node;
    node.prediction = node_stats.mean;
    node.n_samples = static_cast<int>(rows.size());

    if (rows.size() >= 2 && node_stats.impurity > 0.0) {
        BestSplit split = find_split(data, rows, node_stats, rng);
        if (split.feature >= 0) {
            node.feature = split.feature;
            node.threshold = split.threshold;
            node.impurity_decrease = split.gain;
            std::vector<std::size_t> left_rows(rows.begin(),
                                               rows.begin() + static_cast<std::ptrdiff_t>(split.left_count));
            std::vector<std::size_t> right_rows(rows.begin() + static_cast<std::ptrdiff_t>(split.left_count),
                                                rows.end());
            node.left = grow(data, std::move(left_rows), nodes, rng);
            node.right = grow(data, std::move(right_rows), nodes, rng);
        }
    }
    nodes[static_cast<std::size_t>(index)] = node;
    return index;
}

}  // namespace

Tree fit_tree(const FactorTable& train, Rng& rng) {
    const std::size_t n = train.n_rows();
    if (n == 0) throw Error(errc::precondition, "cannot fit a tree on an empty table");
    std::vector<std::size_t> bootstrap(n);
    for (std::size_t i = 0; i < n; ++i) bootstrap[i] = rng.next_below(n);

    Tree tree;
    tree.nodes.reserve(2 * n);
    grow(train, std::move(bootstrap), tree.nodes, rng);
    return tree;
}

ForestModel fit_forest(const FactorTable& train, int n_trees, std::uint64_t seed) {
    if (n_trees < 1) throw Error(errc::precondition, "need at least one tree");
    ForestModel model;
    model.seed = seed;
    model.trees.reserve(static_cast<std::size_t>(n_trees));
    model.importances.assign(train.n_features(), 0.0);

    const double n_total = static_cast<double>(train.n_rows());
    for (int t = 0; t < n_trees; ++t) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
        model.trees.push_back(fit_tree(train, rng));
        for (const TreeNode& node : model.trees.back().nodes) {
            if (node.feature >= 0) {
                model.importances[static_cast<std::size_t>(node.feature)] +=
                    (static_cast<double>(node.n_samples) / n_total) * node.impurity_decrease;
            }
        }
    }
    const double total = std::accumulate(model.importances.begin(), model.importances.end(), 0.0);
    if (total > 0.0) {
        for (double& v : model.importances) v /= total;
    } else {
        model.constant_target = true;
    }
    return model;
}

double predict(const ForestModel& model, std::span<const double> features) {
    double total = 0.0;
    for (const Tree& tree : model.trees) total += tree.predict(features);
    return total / static_cast<double>(model.trees.size());
}

EvalMetrics evaluate(const ForestModel& model, const FactorTable& test) {
    if (test.n_rows() == 0) throw Error(errc::precondition, "empty test set");
    std::vector<double> row(test.n_features());
    double abs_err = 0.0;
    double pct_err = 0.0;
    for (std::size_t r = 0; r < test.n_rows(); ++r) {
        for (std::size_t f = 0; f < test.n_features(); ++f) row[f] = test.feature(r, f);
        const double y = test.target(r);
        if (y == 0.0) throw Error(errc::degenerate, "zero target makes MAPE undefined");
        const double err = std::abs(predict(model, row) - y);
        abs_err += err;
        pct_err += 100.0 * err / std::abs(y);
    }
    EvalMetrics m;
    m.mae = abs_err / static_cast<double>(test.n_rows());
    m.mape = pct_err / static_cast<double>(test.n_rows());
    m.accuracy = 100.0 - m.mape;
    return m;
}

}  // namespace ebikecast::forest
