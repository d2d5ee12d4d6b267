#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "memclass/errors.hpp"
#include "memclass/hyperparams.hpp"
#include "memclass/rng.hpp"
#include "memclass/table.hpp"

namespace memclass {

// Shannon entropy in bits over per-class counts.
inline double entropy_bits(std::span<const std::int64_t> counts) {
    std::int64_t total = 0;
    for (std::int64_t c : counts) total += c;
    if (total <= 0) throw DataError("entropy of an empty count vector");
    double h = 0.0;
    for (std::int64_t c : counts) {
        if (c > 0) {
            const double p = static_cast<double>(c) / static_cast<double>(total);
            h -= p * std::log2(p);
        }
    }
    return h;
}

// Split threshold between two consecutive distinct sorted values. Nudged back
// onto the lower value when rounding would otherwise move it to the upper one,
// so "x <= threshold" reproduces exactly the partition the scan evaluated.
inline double midpoint_threshold(double lo, double hi) {
    double t = lo + (hi - lo) / 2.0;
    if (!(t < hi)) t = lo;
    return t;
}

struct SplitCandidate {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

// Exhaustive scan over midpoints of consecutive distinct values for every
// candidate feature; maximizes information gain. Candidates are examined in
// the given order and ties keep the earliest find, so the result is
// deterministic in (rows, candidates). Returns nullopt when no split has
// strictly positive gain or every split would starve a child below
// min_samples_leaf.
inline std::optional<SplitCandidate> best_split(const FeatureTable& table,
                                                std::span<const std::uint32_t> rows,
                                                std::span<const int> labels,
                                                std::span<const int> candidate_features,
                                                int n_classes, int min_samples_leaf) {
    const std::size_t n = rows.size();
    if (n < 2 || candidate_features.empty()) return std::nullopt;

    std::vector<std::int64_t> parent_counts(static_cast<std::size_t>(n_classes), 0);
    for (std::uint32_t r : rows) parent_counts[static_cast<std::size_t>(labels[r])]++;
    const double parent_entropy = entropy_bits(parent_counts);
    if (parent_entropy == 0.0) return std::nullopt;

    SplitCandidate best;
    std::vector<std::pair<double, int>> ordered(n); // (value, label)
    std::vector<std::int64_t> left_counts(static_cast<std::size_t>(n_classes));

    for (int f : candidate_features) {
        for (std::size_t i = 0; i < n; ++i) {
            ordered[i] = {table.at(rows[i], static_cast<std::size_t>(f)), labels[rows[i]]};
        }
        std::sort(ordered.begin(), ordered.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::fill(left_counts.begin(), left_counts.end(), 0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left_counts[static_cast<std::size_t>(ordered[i].second)]++;
            if (ordered[i].first == ordered[i + 1].first) continue;
            const std::size_t n_left = i + 1;
            const std::size_t n_right = n - n_left;
            if (n_left < static_cast<std::size_t>(min_samples_leaf) ||
                n_right < static_cast<std::size_t>(min_samples_leaf)) {
                continue;
            }
            double h_left = 0.0, h_right = 0.0;
            for (int c = 0; c < n_classes; ++c) {
                const auto cl = left_counts[static_cast<std::size_t>(c)];
                const auto cr = parent_counts[static_cast<std::size_t>(c)] - cl;
                if (cl > 0) {
                    const double p = static_cast<double>(cl) / static_cast<double>(n_left);
                    h_left -= p * std::log2(p);
                }
                if (cr > 0) {
                    const double p = static_cast<double>(cr) / static_cast<double>(n_right);
                    h_right -= p * std::log2(p);
                }
            }
            const double gain =
                parent_entropy -
                (static_cast<double>(n_left) / static_cast<double>(n)) * h_left -
                (static_cast<double>(n_right) / static_cast<double>(n)) * h_right;
            if (gain > best.gain) {
                best.feature = f;
                best.threshold = midpoint_threshold(ordered[i].first, ordered[i + 1].first);
                best.gain = gain;
            }
        }
    }
    if (best.feature < 0 || !(best.gain > 0.0)) return std::nullopt;
    return best;
}

// Internal node when feature >= 0, otherwise a leaf carrying class counts.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<std::int64_t> class_counts;
    int predicted = -1;
};

struct Tree {
    std::vector<TreeNode> nodes; // nodes[0] is the root
    int n_features = 0;
    int n_classes = 0;

    int predict(std::span<const double> row) const {
        if (row.size() != static_cast<std::size_t>(n_features)) {
            throw ModelError("row has " + std::to_string(row.size()) + " features, tree expects " +
                             std::to_string(n_features));
        }
        std::int32_t at = 0;
        while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
            const TreeNode& node = nodes[static_cast<std::size_t>(at)];
            at = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                               : node.right;
        }
        return nodes[static_cast<std::size_t>(at)].predicted;
    }
};

inline int log2_feature_count(std::size_t n_features) {
    return std::max(1, static_cast<int>(std::bit_width(n_features)) - 1);
}

namespace detail {

struct TreeBuilder {
    const FeatureTable& table;
    std::span<const int> labels;
    int n_classes;
    const TreeParams& params;
    Rng& rng;
    Tree& tree;

    std::int32_t build(std::vector<std::uint32_t>& rows, int depth) {
        std::vector<std::int64_t> counts(static_cast<std::size_t>(n_classes), 0);
        for (std::uint32_t r : rows) counts[static_cast<std::size_t>(labels[r])]++;

        bool pure = false;
        for (std::int64_t c : counts) {
            if (c == static_cast<std::int64_t>(rows.size())) pure = true;
        }

        std::optional<SplitCandidate> split;
        if (!pure && depth < params.max_depth &&
            rows.size() >= static_cast<std::size_t>(params.min_samples_split)) {
            std::vector<int> candidates;
            if (params.log2_features) {
                candidates = rng.sample_without_replacement(
                    static_cast<int>(table.column_count()),
                    std::min(static_cast<int>(table.column_count()),
                             log2_feature_count(table.column_count())));
            } else {
                candidates.resize(table.column_count());
                for (std::size_t f = 0; f < table.column_count(); ++f) {
                    candidates[f] = static_cast<int>(f);
                }
            }
            split = best_split(table, rows, labels, candidates, n_classes,
                               params.min_samples_leaf);
        }

        if (!split) {
            TreeNode leaf;
            leaf.class_counts = std::move(counts);
            leaf.predicted = majority(leaf.class_counts);
            tree.nodes.push_back(std::move(leaf));
            return static_cast<std::int32_t>(tree.nodes.size() - 1);
        }

        std::vector<std::uint32_t> left_rows, right_rows;
        left_rows.reserve(rows.size());
        right_rows.reserve(rows.size());
        for (std::uint32_t r : rows) {
            const double v = table.at(r, static_cast<std::size_t>(split->feature));
            (v <= split->threshold ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        TreeNode node;
        node.feature = split->feature;
        node.threshold = split->threshold;
        tree.nodes.push_back(std::move(node));
        const auto self = static_cast<std::int32_t>(tree.nodes.size() - 1);
        const std::int32_t left = build(left_rows, depth + 1);
        const std::int32_t right = build(right_rows, depth + 1);
        tree.nodes[static_cast<std::size_t>(self)].left = left;
        tree.nodes[static_cast<std::size_t>(self)].right = right;
        return self;
    }

    // Ties break toward the lowest class index.
    static int majority(const std::vector<std::int64_t>& counts) {
        int cls = 0;
        for (std::size_t c = 1; c < counts.size(); ++c) {
            if (counts[c] > counts[static_cast<std::size_t>(cls)]) cls = static_cast<int>(c);
        }
        return cls;
    }
};

} // namespace detail

// Greedy recursive growth over the given rows (duplicates allowed, as in a
// bootstrap sample). Per-node candidate features are drawn from `rng` in
// preorder, which keeps fits bit-reproducible for a fixed seed.
inline Tree fit_tree_rows(const FeatureTable& table, std::span<const int> labels, int n_classes,
                          const TreeParams& params, Rng& rng, std::vector<std::uint32_t> rows) {
    if (table.row_count() == 0) throw DataError("cannot fit a tree on an empty table");
    if (labels.size() != table.row_count()) {
        throw DataError("label count does not match row count");
    }
    Tree tree;
    tree.n_features = static_cast<int>(table.column_count());
    tree.n_classes = n_classes;
    detail::TreeBuilder builder{table, labels, n_classes, params, rng, tree};
    builder.build(rows, 0);
    return tree;
}

inline Tree fit_tree(const FeatureTable& table, std::span<const int> labels, int n_classes,
                     const TreeParams& params, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::uint32_t> rows(table.row_count());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<std::uint32_t>(i);
    return fit_tree_rows(table, labels, n_classes, params, rng, std::move(rows));
}

} // namespace memclass
