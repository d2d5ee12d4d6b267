#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "memclass/errors.hpp"
#include "memclass/hyperparams.hpp"
#include "memclass/table.hpp"

namespace memclass {

struct SvmModel {
    std::vector<double> weights;
    double bias = 0.0;
    double eta0 = 0.0;
};

// Primal objective (1/2)||w||^2 + C * sum(max(0, 1 - y*(w.x + b))), y in {-1,+1}.
inline double svm_objective(const FeatureTable& table, std::span<const int> labels,
                            std::span<const double> weights, double bias, double c) {
    double obj = 0.0;
    for (double w : weights) obj += 0.5 * w * w;
    for (std::size_t i = 0; i < table.row_count(); ++i) {
        const double y = labels[i] == 1 ? 1.0 : -1.0;
        double z = bias;
        const auto row = table.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) z += weights[j] * row[j];
        obj += c * std::max(0.0, 1.0 - y * z);
    }
    return obj;
}

// Deterministic full-batch subgradient descent with 1/(t+1) step decay.
// Internally minimizes the equivalent normalized objective
// (lambda/2)||w||^2 + (1/n) sum hinge with lambda = 1/(C*n), taking the
// classic step eta_t = 1/(lambda*(t+1)) for that strongly convex form; the
// bias rides along as an implicit always-one feature. Same argmin as the
// primal above, but the decayed steps stay at a scale that converges on any
// dataset size.
inline SvmModel fit_linear_svm(const FeatureTable& table, std::span<const int> labels,
                               const SvmParams& params) {
    const std::size_t n = table.row_count();
    const std::size_t f = table.column_count();
    if (n == 0) throw DataError("cannot fit SVM on an empty table");
    if (labels.size() != n) throw DataError("label count does not match row count");

    bool has_pos = false, has_neg = false;
    for (int y : labels) (y == 1 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) {
        throw DataError("linear SVM needs both classes present in the training data");
    }

    const double lambda = 1.0 / (params.c * static_cast<double>(n));

    SvmModel model;
    model.weights.assign(f, 0.0);
    model.eta0 = 1.0 / lambda;

    std::vector<double> hinge_sum(f, 0.0);
    for (int t = 0; t < params.epochs; ++t) {
        std::fill(hinge_sum.begin(), hinge_sum.end(), 0.0);
        double hinge_bias = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double y = labels[i] == 1 ? 1.0 : -1.0;
            double z = model.bias;
            const auto row = table.row(i);
            for (std::size_t j = 0; j < f; ++j) z += model.weights[j] * row[j];
            if (y * z < 1.0) {
                for (std::size_t j = 0; j < f; ++j) hinge_sum[j] += y * row[j];
                hinge_bias += y;
            }
        }
        // w <- (1 - eta*lambda) w + (eta/n) * sum_violators(y x), with
        // eta = 1/(lambda*(t+1)); the decay factor reduces to t/(t+1).
        const double keep = static_cast<double>(t) / static_cast<double>(t + 1);
        const double step = 1.0 / (lambda * static_cast<double>(t + 1) * static_cast<double>(n));
        for (std::size_t j = 0; j < f; ++j) {
            model.weights[j] = keep * model.weights[j] + step * hinge_sum[j];
        }
        model.bias = keep * model.bias + step * hinge_bias;
    }
    return model;
}

// sign(w.x + b); zero maps to class 1.
inline int predict_svm(const SvmModel& model, std::span<const double> row) {
    if (row.size() != model.weights.size()) {
        throw ModelError("row width does not match SVM model");
    }
    double z = model.bias;
    for (std::size_t j = 0; j < row.size(); ++j) z += model.weights[j] * row[j];
    return z >= 0.0 ? 1 : 0;
}

} // namespace memclass
