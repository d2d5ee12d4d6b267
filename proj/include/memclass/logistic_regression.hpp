#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "memclass/errors.hpp"
#include "memclass/hyperparams.hpp"
#include "memclass/table.hpp"

namespace memclass {

struct LogRegModel {
    std::vector<double> weights;
    double bias = 0.0;
    int iterations_run = 0;
    double final_eta = 0.0;
};

namespace detail {

// log(1 + exp(z)) - y*z, evaluated without overflow.
inline double bce_term(double z, int y) {
    const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    return softplus - static_cast<double>(y) * z;
}

inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace detail

inline double logreg_loss(const FeatureTable& table, std::span<const int> labels,
                          std::span<const double> weights, double bias, double l2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < table.row_count(); ++i) {
        double z = bias;
        const auto row = table.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) z += weights[j] * row[j];
        loss += detail::bce_term(z, labels[i]);
    }
    loss /= static_cast<double>(table.row_count());
    double penalty = 0.0;
    for (double w : weights) penalty += w * w;
    return loss + 0.5 * l2 * penalty;
}

// Full-batch gradient descent on mean binary cross-entropy, weights starting
// at zero. A step that raises the loss is retried with the step size halved
// (and it stays halved), so the loss trace is non-increasing by construction.
// Stops when the gradient max-norm drops below tol.
inline LogRegModel fit_logreg(const FeatureTable& table, std::span<const int> labels,
                              const LogRegParams& params,
                              std::vector<double>* loss_trace = nullptr) {
    const std::size_t n = table.row_count();
    const std::size_t f = table.column_count();
    if (n == 0) throw DataError("cannot fit logistic regression on an empty table");
    if (labels.size() != n) throw DataError("label count does not match row count");

    LogRegModel model;
    model.weights.assign(f, 0.0);
    double eta = params.eta;
    double cur_loss = logreg_loss(table, labels, model.weights, model.bias, params.l2);
    if (loss_trace) loss_trace->push_back(cur_loss);

    std::vector<double> grad(f, 0.0);
    std::vector<double> trial(f, 0.0);
    for (int t = 0; t < params.max_iters; ++t) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_bias = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double z = model.bias;
            const auto row = table.row(i);
            for (std::size_t j = 0; j < f; ++j) z += model.weights[j] * row[j];
            const double err = detail::sigmoid(z) - static_cast<double>(labels[i]);
            for (std::size_t j = 0; j < f; ++j) grad[j] += err * row[j];
            grad_bias += err;
        }
        double inf_norm = std::abs(grad_bias /= static_cast<double>(n));
        for (std::size_t j = 0; j < f; ++j) {
            grad[j] = grad[j] / static_cast<double>(n) + params.l2 * model.weights[j];
            inf_norm = std::max(inf_norm, std::abs(grad[j]));
        }
        if (inf_norm < params.tol) break;

        double trial_bias = 0.0;
        double trial_loss = 0.0;
        while (true) {
            for (std::size_t j = 0; j < f; ++j) trial[j] = model.weights[j] - eta * grad[j];
            trial_bias = model.bias - eta * grad_bias;
            trial_loss = logreg_loss(table, labels, trial, trial_bias, params.l2);
            if (trial_loss <= cur_loss || eta < 1e-18) break;
            eta *= 0.5;
        }
        if (trial_loss > cur_loss) break; // step size exhausted
        model.weights.swap(trial);
        model.bias = trial_bias;
        cur_loss = trial_loss;
        model.iterations_run = t + 1;
        if (loss_trace) loss_trace->push_back(cur_loss);
    }
    model.final_eta = eta;
    return model;
}

// p >= 0.5 maps to class 1; all-zero weights therefore predict 1.
inline int predict_logreg(const LogRegModel& model, std::span<const double> row) {
    if (row.size() != model.weights.size()) {
        throw ModelError("row width does not match logistic regression model");
    }
    double z = model.bias;
    for (std::size_t j = 0; j < row.size(); ++j) z += model.weights[j] * row[j];
    return detail::sigmoid(z) >= 0.5 ? 1 : 0;
}

} // namespace memclass
