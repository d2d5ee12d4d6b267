#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "memclass/errors.hpp"
#include "memclass/hyperparams.hpp"
#include "memclass/table.hpp"

namespace memclass {

struct KnnModel {
    int k = 5;
    FeatureTable train;
    std::vector<int> labels;
    int n_classes = 0;
};

inline KnnModel fit_knn(const FeatureTable& table, std::span<const int> labels, int n_classes,
                        const KnnParams& params) {
    if (table.row_count() == 0) throw DataError("cannot fit KNN on an empty table");
    if (labels.size() != table.row_count()) throw DataError("label count does not match row count");
    if (params.k < 1) throw UsageError("k must be >= 1");
    if (static_cast<std::size_t>(params.k) > table.row_count()) {
        throw DataError("k=" + std::to_string(params.k) + " exceeds the " +
                        std::to_string(table.row_count()) + " stored training rows");
    }
    return {params.k, table, std::vector<int>(labels.begin(), labels.end()), n_classes};
}

// Majority class among the k nearest training rows by Euclidean distance.
// Equidistant rows rank by lower index; vote ties break toward the lowest
// class index.
inline int predict_knn(const KnnModel& model, std::span<const double> row) {
    const std::size_t n = model.train.row_count();
    const std::size_t f = model.train.column_count();
    if (row.size() != f) throw ModelError("row width does not match KNN model");

    std::vector<std::pair<double, std::uint32_t>> dist(n);
    const double* data = model.train.values().data();
    for (std::size_t i = 0; i < n; ++i) {
        const double* tr = data + i * f;
        double d2 = 0.0;
        for (std::size_t j = 0; j < f; ++j) {
            const double d = row[j] - tr[j];
            d2 += d * d;
        }
        dist[i] = {d2, static_cast<std::uint32_t>(i)};
    }
    const auto k = static_cast<std::size_t>(model.k);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::vector<int> votes(static_cast<std::size_t>(model.n_classes), 0);
    for (std::size_t i = 0; i < k; ++i) votes[static_cast<std::size_t>(model.labels[dist[i].second])]++;
    int cls = 0;
    for (std::size_t c = 1; c < votes.size(); ++c) {
        if (votes[c] > votes[static_cast<std::size_t>(cls)]) cls = static_cast<int>(c);
    }
    return cls;
}

} // namespace memclass
