#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "memclass/errors.hpp"
#include "memclass/hyperparams.hpp"
#include "memclass/table.hpp"
#include "memclass/tree.hpp"

namespace memclass {

struct RegNode {
    int feature = -1; // -1 => leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
};

struct RegTree {
    std::vector<RegNode> nodes;

    double predict(std::span<const double> row) const {
        std::int32_t at = 0;
        while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
            const RegNode& node = nodes[static_cast<std::size_t>(at)];
            at = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                               : node.right;
        }
        return nodes[static_cast<std::size_t>(at)].value;
    }
};

namespace detail {

// Exact-greedy squared-error tree fitting over presorted feature columns.
// Columns are sorted once per training table; each fitted tree works on a
// copy, partitioning node segments in place so every node owns a contiguous
// [lo, hi) range of all feature lists. All features are scanned at every
// node; thresholds sit at midpoints of consecutive distinct values.
class RegTreeBuilder {
public:
    RegTreeBuilder(const FeatureTable& table, int max_depth, int min_samples_leaf)
        : table_(table),
          n_(table.row_count()),
          f_(table.column_count()),
          max_depth_(max_depth),
          min_leaf_(static_cast<std::size_t>(min_samples_leaf)) {
        master_.resize(f_ * n_);
        for (std::size_t f = 0; f < f_; ++f) {
            std::uint32_t* col = master_.data() + f * n_;
            for (std::size_t i = 0; i < n_; ++i) col[i] = static_cast<std::uint32_t>(i);
            std::sort(col, col + n_, [&](std::uint32_t a, std::uint32_t b) {
                const double va = table_.at(a, f), vb = table_.at(b, f);
                return va < vb || (va == vb && a < b);
            });
        }
        work_.resize(f_ * n_);
        scratch_.resize(n_);
    }

    // Fits one tree to `residuals` and records the leaf value every training
    // row lands in (saves a full predict pass per boosting round).
    RegTree fit(std::span<const double> residuals, std::vector<double>& train_pred) {
        std::copy(master_.begin(), master_.end(), work_.begin());
        train_pred.assign(n_, 0.0);
        RegTree tree;
        residuals_ = residuals;
        train_pred_ = &train_pred;
        build(tree, 0, n_, 0);
        return tree;
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
        std::size_t n_left = 0;
    };

    std::int32_t build(RegTree& tree, std::size_t lo, std::size_t hi, int depth) {
        const std::size_t len = hi - lo;
        double total = 0.0;
        {
            const std::uint32_t* col = work_.data() + lo; // feature 0 holds the node's rows
            for (std::size_t i = 0; i < len; ++i) total += residuals_[col[i]];
        }

        Split split;
        if (depth < max_depth_ && len >= 2 * min_leaf_ && len >= 2) {
            split = find_split(lo, hi, total);
        }
        if (split.feature < 0) {
            RegNode leaf;
            leaf.value = total / static_cast<double>(len);
            const std::uint32_t* col = work_.data() + lo;
            for (std::size_t i = 0; i < len; ++i) (*train_pred_)[col[i]] = leaf.value;
            tree.nodes.push_back(leaf);
            return static_cast<std::int32_t>(tree.nodes.size() - 1);
        }

        partition(lo, hi, split);
        RegNode node;
        node.feature = split.feature;
        node.threshold = split.threshold;
        tree.nodes.push_back(node);
        const auto self = static_cast<std::int32_t>(tree.nodes.size() - 1);
        const std::int32_t left = build(tree, lo, lo + split.n_left, depth + 1);
        const std::int32_t right = build(tree, lo + split.n_left, hi, depth + 1);
        tree.nodes[static_cast<std::size_t>(self)].left = left;
        tree.nodes[static_cast<std::size_t>(self)].right = right;
        return self;
    }

    // Maximizes the sum-of-squares reduction sL^2/nL + sR^2/nR - sT^2/nT.
    Split find_split(std::size_t lo, std::size_t hi, double total) const {
        const std::size_t len = hi - lo;
        const double parent = total * total / static_cast<double>(len);
        Split best;
        for (std::size_t f = 0; f < f_; ++f) {
            const std::uint32_t* col = work_.data() + f * n_ + lo;
            double left_sum = 0.0;
            for (std::size_t i = 0; i + 1 < len; ++i) {
                left_sum += residuals_[col[i]];
                const double v = table_.at(col[i], f);
                const double next = table_.at(col[i + 1], f);
                if (v == next) continue;
                const std::size_t n_left = i + 1;
                const std::size_t n_right = len - n_left;
                if (n_left < min_leaf_ || n_right < min_leaf_) continue;
                const double right_sum = total - left_sum;
                const double gain = left_sum * left_sum / static_cast<double>(n_left) +
                                    right_sum * right_sum / static_cast<double>(n_right) - parent;
                if (gain > best.gain) {
                    best.feature = static_cast<int>(f);
                    best.threshold = midpoint_threshold(v, next);
                    best.gain = gain;
                    best.n_left = n_left;
                }
            }
        }
        if (!(best.gain > 0.0)) best.feature = -1;
        return best;
    }

    // Stable in-place partition of every feature list's [lo, hi) segment.
    void partition(std::size_t lo, std::size_t hi, const Split& split) {
        const auto sf = static_cast<std::size_t>(split.feature);
        for (std::size_t f = 0; f < f_; ++f) {
            std::uint32_t* col = work_.data() + f * n_;
            std::size_t write = lo;
            std::size_t spill = 0;
            for (std::size_t i = lo; i < hi; ++i) {
                const std::uint32_t r = col[i];
                if (table_.at(r, sf) <= split.threshold) {
                    col[write++] = r;
                } else {
                    scratch_[spill++] = r;
                }
            }
            std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(spill),
                      col + write);
        }
    }

    const FeatureTable& table_;
    std::size_t n_;
    std::size_t f_;
    int max_depth_;
    std::size_t min_leaf_;
    std::vector<std::uint32_t> master_;
    std::vector<std::uint32_t> work_;
    std::vector<std::uint32_t> scratch_;
    std::span<const double> residuals_;
    std::vector<double>* train_pred_ = nullptr;
};

} // namespace detail

struct GBoostModel {
    std::vector<double> base_scores;           // log prior per class
    double learning_rate = 0.2;
    std::vector<std::vector<RegTree>> rounds;  // rounds[m][class]
    int n_features = 0;
};

// Score assigned to classes absent from the training data: finite (so model
// files stay valid JSON) but never the argmax.
inline constexpr double kAbsentClassScore = -1e30;

// Multinomial boosting. Scores start at log class priors; every round fits one
// squared-error tree per class to the residuals 1[y=c] - softmax_c(scores) and
// adds learning_rate times the leaf values.
inline GBoostModel fit_gboost(const FeatureTable& table, std::span<const int> labels,
                              int n_classes, const GBoostParams& params) {
    const std::size_t n = table.row_count();
    const auto k = static_cast<std::size_t>(n_classes);
    if (n == 0) throw DataError("cannot fit gradient boosting on an empty table");
    if (labels.size() != n) throw DataError("label count does not match row count");

    GBoostModel model;
    model.learning_rate = params.learning_rate;
    model.n_features = static_cast<int>(table.column_count());
    model.base_scores.assign(k, kAbsentClassScore);
    {
        std::vector<std::size_t> counts(k, 0);
        for (int y : labels) counts[static_cast<std::size_t>(y)]++;
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                model.base_scores[c] =
                    std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
            }
        }
    }

    std::vector<double> scores(n * k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < k; ++c) scores[i * k + c] = model.base_scores[c];
    }

    detail::RegTreeBuilder builder(table, params.max_depth, params.min_samples_leaf);
    std::vector<double> probs(n * k);
    std::vector<double> residuals(n);
    std::vector<double> train_pred;

    for (int m = 0; m < params.rounds; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            const double* s = scores.data() + i * k;
            double hi = s[0];
            for (std::size_t c = 1; c < k; ++c) hi = std::max(hi, s[c]);
            double denom = 0.0;
            for (std::size_t c = 0; c < k; ++c) denom += std::exp(s[c] - hi);
            for (std::size_t c = 0; c < k; ++c) probs[i * k + c] = std::exp(s[c] - hi) / denom;
        }
        std::vector<RegTree> round_trees;
        round_trees.reserve(k);
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                residuals[i] = (static_cast<std::size_t>(labels[i]) == c ? 1.0 : 0.0) -
                               probs[i * k + c];
            }
            round_trees.push_back(builder.fit(residuals, train_pred));
            for (std::size_t i = 0; i < n; ++i) {
                scores[i * k + c] += params.learning_rate * train_pred[i];
            }
        }
        model.rounds.push_back(std::move(round_trees));
    }
    return model;
}

inline int predict_gboost(const GBoostModel& model, std::span<const double> row) {
    if (row.size() != static_cast<std::size_t>(model.n_features)) {
        throw ModelError("row width does not match gradient boosting model");
    }
    std::vector<double> scores = model.base_scores;
    for (const auto& round : model.rounds) {
        for (std::size_t c = 0; c < scores.size(); ++c) {
            scores[c] += model.learning_rate * round[c].predict(row);
        }
    }
    int cls = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[static_cast<std::size_t>(cls)]) cls = static_cast<int>(c);
    }
    return cls;
}

} // namespace memclass
