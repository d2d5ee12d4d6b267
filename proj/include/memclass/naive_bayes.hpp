#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "memclass/errors.hpp"
#include "memclass/hyperparams.hpp"
#include "memclass/table.hpp"

namespace memclass {

struct NbModel {
    std::vector<double> priors;               // per class
    std::vector<std::vector<double>> means;   // [class][feature]
    std::vector<std::vector<double>> vars;    // [class][feature], floored
};

// Gaussian Naive Bayes with population moments. Variances are floored at
// var_floor x (largest per-feature variance over the whole training set) so
// constant features cannot divide by zero.
inline NbModel fit_gnb(const FeatureTable& table, std::span<const int> labels, int n_classes,
                       const NbParams& params = {}) {
    const std::size_t n = table.row_count();
    const std::size_t f = table.column_count();
    if (n == 0) throw DataError("cannot fit naive Bayes on an empty table");
    if (labels.size() != n) throw DataError("label count does not match row count");

    NbModel model;
    model.priors.assign(static_cast<std::size_t>(n_classes), 0.0);
    model.means.assign(static_cast<std::size_t>(n_classes), std::vector<double>(f, 0.0));
    model.vars.assign(static_cast<std::size_t>(n_classes), std::vector<double>(f, 0.0));

    std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        counts[c]++;
        for (std::size_t j = 0; j < f; ++j) model.means[c][j] += table.at(i, j);
    }
    for (std::size_t c = 0; c < model.means.size(); ++c) {
        if (counts[c] == 0) continue;
        for (double& m : model.means[c]) m /= static_cast<double>(counts[c]);
        model.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        for (std::size_t j = 0; j < f; ++j) {
            const double d = table.at(i, j) - model.means[c][j];
            model.vars[c][j] += d * d;
        }
    }

    // Global per-feature population variance fixes the floor's scale.
    double max_feature_var = 0.0;
    for (std::size_t j = 0; j < f; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += table.at(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = table.at(i, j) - mean;
            var += d * d;
        }
        max_feature_var = std::max(max_feature_var, var / static_cast<double>(n));
    }
    double floor = params.var_floor * max_feature_var;
    if (!(floor > 0.0)) floor = 1e-12; // all-constant table; keep densities finite

    for (std::size_t c = 0; c < model.vars.size(); ++c) {
        if (counts[c] == 0) continue;
        for (double& v : model.vars[c]) {
            v = std::max(v / static_cast<double>(counts[c]), floor);
        }
    }
    return model;
}

// log prior + sum of Gaussian log densities per class; classes unseen in
// training score -infinity.
inline std::vector<double> gnb_log_posteriors(const NbModel& model, std::span<const double> row) {
    if (model.means.empty() || row.size() != model.means[0].size()) {
        throw ModelError("row width does not match naive Bayes model");
    }
    std::vector<double> scores(model.priors.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < model.priors.size(); ++c) {
        if (model.priors[c] <= 0.0) continue;
        double score = std::log(model.priors[c]);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double var = model.vars[c][j];
            const double d = row[j] - model.means[c][j];
            score += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
        }
        scores[c] = score;
    }
    return scores;
}

// Ties break toward the lowest class index.
inline int predict_gnb(const NbModel& model, std::span<const double> row) {
    const std::vector<double> scores = gnb_log_posteriors(model, row);
    int best_class = -1;
    for (std::size_t c = 0; c < scores.size(); ++c) {
        if (model.priors[c] <= 0.0) continue;
        if (best_class < 0 || scores[c] > scores[static_cast<std::size_t>(best_class)]) {
            best_class = static_cast<int>(c);
        }
    }
    if (best_class < 0) throw ModelError("naive Bayes model has no trained classes");
    return best_class;
}

} // namespace memclass
