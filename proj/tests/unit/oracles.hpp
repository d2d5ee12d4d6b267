#pragma once

// Independent reference implementations used as test oracles. These stay
// deliberately separate from the library code paths they check: entropy goes
// through natural log, the stump search enumerates every (feature, midpoint)
// pair, KNN is a second exhaustive scan, and the metric oracle counts pairs
// without building a matrix.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "memclass/rng.hpp"
#include "memclass/table.hpp"

namespace oracles {

inline double entropy_nats_over_ln2(const std::vector<std::int64_t>& counts) {
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    double h = 0.0;
    for (auto c : counts) {
        if (c > 0) {
            const double p = static_cast<double>(c) / total;
            h -= p * std::log(p);
        }
    }
    return h / std::log(2.0);
}

struct StumpResult {
    double best_gain = 0.0;
    // Every (feature, threshold) pair achieving best_gain.
    std::vector<std::pair<int, double>> argmax;
};

// Brute force over all features and all midpoints between consecutive
// distinct sorted values.
inline StumpResult best_stump(const memclass::FeatureTable& table, std::span<const int> labels,
                              int n_classes, int min_samples_leaf) {
    const std::size_t n = table.row_count();
    StumpResult result;

    std::vector<std::int64_t> totals(static_cast<std::size_t>(n_classes), 0);
    for (std::size_t i = 0; i < n; ++i) totals[static_cast<std::size_t>(labels[i])]++;
    const double parent = entropy_nats_over_ln2(totals);

    for (std::size_t f = 0; f < table.column_count(); ++f) {
        std::vector<double> values;
        values.reserve(n);
        for (std::size_t i = 0; i < n; ++i) values.push_back(table.at(i, f));
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t v = 0; v + 1 < values.size(); ++v) {
            double threshold = values[v] + (values[v + 1] - values[v]) / 2.0;
            if (!(threshold < values[v + 1])) threshold = values[v];
            std::vector<std::int64_t> left(static_cast<std::size_t>(n_classes), 0);
            std::vector<std::int64_t> right(static_cast<std::size_t>(n_classes), 0);
            for (std::size_t i = 0; i < n; ++i) {
                auto& side = table.at(i, f) <= threshold ? left : right;
                side[static_cast<std::size_t>(labels[i])]++;
            }
            std::int64_t nl = 0, nr = 0;
            for (auto c : left) nl += c;
            for (auto c : right) nr += c;
            if (nl < min_samples_leaf || nr < min_samples_leaf) continue;
            const double gain = parent -
                                (static_cast<double>(nl) / static_cast<double>(n)) *
                                    entropy_nats_over_ln2(left) -
                                (static_cast<double>(nr) / static_cast<double>(n)) *
                                    entropy_nats_over_ln2(right);
            if (gain > result.best_gain + 1e-12) {
                result.best_gain = gain;
                result.argmax.assign(1, {static_cast<int>(f), threshold});
            } else if (std::abs(gain - result.best_gain) <= 1e-12 && result.best_gain > 0.0) {
                result.argmax.emplace_back(static_cast<int>(f), threshold);
            }
        }
    }
    return result;
}

// Exhaustive nearest-neighbor vote: full stable sort by (distance, index),
// majority with lowest-class tie break.
inline int knn_vote(const memclass::FeatureTable& train, std::span<const int> labels,
                    int n_classes, std::span<const double> query, int k) {
    struct Entry {
        double dist;
        std::size_t index;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < train.row_count(); ++i) {
        double d = 0.0;
        for (std::size_t j = 0; j < train.column_count(); ++j) {
            d += (query[j] - train.at(i, j)) * (query[j] - train.at(i, j));
        }
        entries.push_back({std::sqrt(d), i});
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.dist < b.dist || (a.dist == b.dist && a.index < b.index);
    });
    std::vector<int> votes(static_cast<std::size_t>(n_classes), 0);
    for (int i = 0; i < k; ++i) {
        votes[static_cast<std::size_t>(labels[entries[static_cast<std::size_t>(i)].index])]++;
    }
    int best = 0;
    for (int c = 1; c < n_classes; ++c) {
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
    }
    return best;
}

struct PairMetrics {
    double accuracy = 0.0;
    std::vector<double> precision, recall, f1;
};

// Metrics straight from (truth, predicted) pairs, no confusion matrix.
inline PairMetrics metrics_from_pairs(std::span<const int> truth, std::span<const int> predicted,
                                      int n_classes) {
    PairMetrics out;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == predicted[i]) ++correct;
    }
    out.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
    for (int c = 0; c < n_classes; ++c) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (predicted[i] == c && truth[i] == c) ++tp;
            if (predicted[i] == c && truth[i] != c) ++fp;
            if (predicted[i] != c && truth[i] == c) ++fn;
        }
        const double p = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
        const double r = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
        out.precision.push_back(p);
        out.recall.push_back(r);
        out.f1.push_back(p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r));
    }
    return out;
}

// Gaussian naive Bayes scores computed from scratch: own moment accumulation,
// own density formula. Valid when no per-class variance is small enough for
// the library's variance floor to bind.
inline std::vector<double> gnb_scores(const memclass::FeatureTable& train,
                                      std::span<const int> labels, int n_classes,
                                      std::span<const double> query) {
    const std::size_t f = train.column_count();
    std::vector<double> scores;
    for (int c = 0; c < n_classes; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < train.row_count(); ++i) {
            if (labels[i] == c) members.push_back(i);
        }
        if (members.empty()) {
            scores.push_back(-std::numeric_limits<double>::infinity());
            continue;
        }
        double score =
            std::log(static_cast<double>(members.size()) / static_cast<double>(train.row_count()));
        for (std::size_t j = 0; j < f; ++j) {
            double mean = 0.0;
            for (std::size_t i : members) mean += train.at(i, j);
            mean /= static_cast<double>(members.size());
            double var = 0.0;
            for (std::size_t i : members) {
                var += (train.at(i, j) - mean) * (train.at(i, j) - mean);
            }
            var /= static_cast<double>(members.size());
            score += -0.5 * std::log(2.0 * 3.14159265358979323846 * var) -
                     (query[j] - mean) * (query[j] - mean) / (2.0 * var);
        }
        scores.push_back(score);
    }
    return scores;
}

// Random helpers for property tests.
inline memclass::FeatureTable random_table(memclass::Rng& rng, std::size_t rows,
                                           std::size_t cols, double scale = 10.0) {
    std::vector<double> values(rows * cols);
    for (auto& v : values) v = rng.unit() * scale;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < cols; ++j) names.push_back("f" + std::to_string(j));
    return memclass::FeatureTable(std::move(names), std::move(values));
}

inline std::vector<int> random_labels(memclass::Rng& rng, std::size_t rows, int n_classes) {
    std::vector<int> labels(rows);
    for (auto& y : labels) y = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_classes)));
    return labels;
}

// Labels correlated with the features, so stumps usually find positive gain.
inline std::vector<int> correlated_labels(memclass::Rng& rng, const memclass::FeatureTable& table,
                                          int n_classes) {
    std::vector<int> labels(table.row_count());
    const std::size_t pivot = rng.below(table.column_count());
    for (std::size_t i = 0; i < table.row_count(); ++i) {
        const double v = table.at(i, pivot);
        int base = static_cast<int>(v / 10.0 * n_classes);
        if (base >= n_classes) base = n_classes - 1;
        if (rng.unit() < 0.2) base = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_classes)));
        labels[i] = base;
    }
    return labels;
}

} // namespace oracles
