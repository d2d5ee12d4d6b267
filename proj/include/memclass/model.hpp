#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "memclass/errors.hpp"
#include "memclass/forest.hpp"
#include "memclass/gboost.hpp"
#include "memclass/hyperparams.hpp"
#include "memclass/ingest.hpp"
#include "memclass/knn.hpp"
#include "memclass/linear_svm.hpp"
#include "memclass/logistic_regression.hpp"
#include "memclass/naive_bayes.hpp"
#include "memclass/pipeline.hpp"
#include "memclass/table.hpp"
#include "memclass/tree.hpp"

namespace memclass {

// One trained classifier plus everything inference needs: the label schema,
// the feature-name contract and the scaler fitted alongside it.
struct TrainedModel {
    ModelKind kind = ModelKind::DecisionTree;
    LabelSchema schema;
    std::vector<std::string> feature_names;
    HyperMap hyperparameters;
    std::uint64_t training_seed = 0;

    std::variant<NbModel, LogRegModel, SvmModel, Tree, ForestModel, GBoostModel, KnnModel> params;

    int predict(std::span<const double> row) const {
        switch (kind) {
            case ModelKind::NaiveBayes: return predict_gnb(std::get<NbModel>(params), row);
            case ModelKind::LogisticRegression:
                return predict_logreg(std::get<LogRegModel>(params), row);
            case ModelKind::LinearSvm: return predict_svm(std::get<SvmModel>(params), row);
            case ModelKind::DecisionTree: return std::get<Tree>(params).predict(row);
            case ModelKind::RandomForest:
                return predict_forest(std::get<ForestModel>(params), row);
            case ModelKind::GradientBoosting:
                return predict_gboost(std::get<GBoostModel>(params), row);
            case ModelKind::Knn: return predict_knn(std::get<KnnModel>(params), row);
        }
        throw ModelError("invalid model kind");
    }
};

inline TrainedModel train_model(ModelKind kind, const FeatureTable& table,
                                const LabelVector& labels, const HyperMap& hyperparameters,
                                std::uint64_t seed, int n_threads = 1) {
    if (labels.size() != table.row_count()) {
        throw DataError("label count does not match row count");
    }
    const auto n_classes = static_cast<int>(labels.schema.n_classes());
    const std::span<const int> y(labels.values);

    TrainedModel model;
    model.kind = kind;
    model.schema = labels.schema;
    model.feature_names = table.column_names();
    model.hyperparameters = hyperparameters;
    model.training_seed = seed;

    switch (kind) {
        case ModelKind::NaiveBayes:
            model.params = fit_gnb(table, y, n_classes, nb_params(hyperparameters));
            break;
        case ModelKind::LogisticRegression:
            if (labels.schema.kind != TaskKind::Binary) {
                throw ModelError("logistic regression requires the binary label schema");
            }
            model.params = fit_logreg(table, y, logreg_params(hyperparameters));
            break;
        case ModelKind::LinearSvm:
            if (labels.schema.kind != TaskKind::Binary) {
                throw ModelError("linear SVM requires the binary label schema");
            }
            model.params = fit_linear_svm(table, y, svm_params(hyperparameters));
            break;
        case ModelKind::DecisionTree:
            model.params = fit_tree(table, y, n_classes, tree_params(hyperparameters), seed);
            break;
        case ModelKind::RandomForest:
            model.params = fit_forest(table, y, n_classes, forest_params(hyperparameters), seed,
                                      n_threads);
            break;
        case ModelKind::GradientBoosting:
            model.params = fit_gboost(table, y, n_classes, gboost_params(hyperparameters));
            break;
        case ModelKind::Knn:
            model.params = fit_knn(table, y, n_classes, knn_params(hyperparameters));
            break;
    }
    return model;
}

// Row-wise prediction; output schema is the model's schema. Parallel runs
// write into per-row slots and match serial output exactly.
inline LabelVector predict_batch(const TrainedModel& model, const FeatureTable& table,
                                 int n_threads = 1) {
    if (table.row_count() > 0 && table.column_count() != model.feature_names.size()) {
        throw ModelError("table has " + std::to_string(table.column_count()) +
                         " features, model expects " +
                         std::to_string(model.feature_names.size()));
    }
    LabelVector out;
    out.schema = model.schema;
    out.values.resize(table.row_count());
    parallel_for(table.row_count(), n_threads,
                 [&](std::size_t i) { out.values[i] = model.predict(table.row(i)); });
    return out;
}

} // namespace memclass
