#pragma once

#include <charconv>
#include <map>
#include <string>
#include <vector>

#include "memclass/errors.hpp"
#include "memclass/ingest.hpp"
#include "memclass/util.hpp"

namespace memclass {

enum class ModelKind {
    NaiveBayes,
    LogisticRegression,
    LinearSvm,
    DecisionTree,
    RandomForest,
    GradientBoosting,
    Knn,
};

inline std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::NaiveBayes: return "nb";
        case ModelKind::LogisticRegression: return "lr";
        case ModelKind::LinearSvm: return "svm";
        case ModelKind::DecisionTree: return "dt";
        case ModelKind::RandomForest: return "rf";
        case ModelKind::GradientBoosting: return "gb";
        case ModelKind::Knn: return "knn";
    }
    throw ModelError("invalid model kind");
}

inline ModelKind parse_model_kind(std::string_view name) {
    if (name == "nb") return ModelKind::NaiveBayes;
    if (name == "lr") return ModelKind::LogisticRegression;
    if (name == "svm") return ModelKind::LinearSvm;
    if (name == "dt") return ModelKind::DecisionTree;
    if (name == "rf") return ModelKind::RandomForest;
    if (name == "gb") return ModelKind::GradientBoosting;
    if (name == "knn") return ModelKind::Knn;
    throw UsageError("unknown model '" + std::string(name) +
                     "' (expected one of nb, lr, svm, dt, rf, gb, knn)");
}

// Named hyperparameter values as they appear in model files and on the CLI.
// std::map keeps serialization order canonical.
using HyperMap = std::map<std::string, std::string>;

// Defaults per model and task. Tree/forest values follow the tuned settings
// the toolkit reproduces; the rest are documented toolkit defaults.
inline HyperMap default_hyperparams(ModelKind kind, TaskKind task) {
    const bool binary = task == TaskKind::Binary;
    switch (kind) {
        case ModelKind::NaiveBayes:
            return {{"var_floor", "1e-09"}};
        case ModelKind::LogisticRegression:
            return {{"eta", "0.1"}, {"max_iters", "1000"}, {"tol", "1e-06"}, {"l2", "0"}};
        case ModelKind::LinearSvm:
            return {{"C", "1"}, {"epochs", "1000"}};
        case ModelKind::DecisionTree:
            if (binary) {
                return {{"criterion", "entropy"}, {"max_depth", "10"}, {"max_features", "log2"},
                        {"min_samples_leaf", "3"},  {"min_samples_split", "2"}};
            }
            return {{"criterion", "entropy"}, {"max_depth", "12"}, {"max_features", "log2"},
                    {"min_samples_leaf", "16"}, {"min_samples_split", "2"}};
        case ModelKind::RandomForest:
            if (binary) {
                return {{"criterion", "entropy"}, {"max_depth", "10"}, {"max_features", "log2"},
                        {"min_samples_leaf", "3"},  {"min_samples_split", "2"},
                        {"n_estimators", "30"}};
            }
            return {{"criterion", "entropy"}, {"max_depth", "40"}, {"max_features", "log2"},
                    {"min_samples_leaf", "1"},  {"min_samples_split", "4"},
                    {"n_estimators", "30"}};
        case ModelKind::GradientBoosting:
            return {{"learning_rate", "0.2"}, {"max_depth", "3"}, {"min_samples_leaf", "1"},
                    {"rounds", "100"}};
        case ModelKind::Knn:
            return {{"k", "5"}};
    }
    throw ModelError("invalid model kind");
}

namespace detail {

inline double hyper_double(const HyperMap& hp, const std::string& key) {
    const auto parsed = parse_double(hp.at(key));
    if (!parsed) throw UsageError("hyperparameter '" + key + "' must be a number, got '" +
                                  hp.at(key) + "'");
    return *parsed;
}

inline int hyper_int(const HyperMap& hp, const std::string& key) {
    const std::string& text = hp.at(key);
    int value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw UsageError("hyperparameter '" + key + "' must be an integer, got '" + text + "'");
    }
    return value;
}

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw UsageError(msg);
}

} // namespace detail

// Overrides are name-checked against the defaults for the model/task pair.
inline HyperMap merge_hyperparams(ModelKind kind, TaskKind task,
                                  const std::vector<std::pair<std::string, std::string>>& overrides) {
    HyperMap hp = default_hyperparams(kind, task);
    for (const auto& [key, value] : overrides) {
        auto it = hp.find(key);
        if (it == hp.end()) {
            std::string known;
            for (const auto& [k, v] : hp) known += (known.empty() ? "" : ", ") + k;
            throw UsageError("unknown hyperparameter '" + key + "' for model " +
                             model_kind_name(kind) + " (known: " + known + ")");
        }
        it->second = value;
    }
    return hp;
}

// ---------------------------------------------------------------------------
// Typed views with invariant checks
// ---------------------------------------------------------------------------

struct TreeParams {
    int max_depth = 10;
    int min_samples_leaf = 1;
    int min_samples_split = 2;
    bool log2_features = true;
};

struct ForestParams {
    TreeParams tree;
    int n_estimators = 30;
};

struct LogRegParams {
    double eta = 0.1;
    int max_iters = 1000;
    double tol = 1e-6;
    double l2 = 0.0;
};

struct SvmParams {
    double c = 1.0;
    int epochs = 1000;
};

struct GBoostParams {
    double learning_rate = 0.2;
    int rounds = 100;
    int max_depth = 3;
    int min_samples_leaf = 1;
};

struct KnnParams {
    int k = 5;
};

struct NbParams {
    double var_floor = 1e-9;
};

inline TreeParams tree_params(const HyperMap& hp) {
    using namespace detail;
    TreeParams p;
    p.max_depth = hyper_int(hp, "max_depth");
    p.min_samples_leaf = hyper_int(hp, "min_samples_leaf");
    p.min_samples_split = hyper_int(hp, "min_samples_split");
    require(hp.at("criterion") == "entropy", "only criterion=entropy is supported");
    const std::string& mf = hp.at("max_features");
    require(mf == "log2" || mf == "all", "max_features must be 'log2' or 'all'");
    p.log2_features = mf == "log2";
    require(p.max_depth >= 1, "max_depth must be >= 1");
    require(p.min_samples_leaf >= 1, "min_samples_leaf must be >= 1");
    require(p.min_samples_split >= 1, "min_samples_split must be >= 1");
    return p;
}

inline ForestParams forest_params(const HyperMap& hp) {
    ForestParams p;
    p.tree = tree_params(hp);
    p.n_estimators = detail::hyper_int(hp, "n_estimators");
    detail::require(p.n_estimators >= 1, "n_estimators must be >= 1");
    return p;
}

inline LogRegParams logreg_params(const HyperMap& hp) {
    using namespace detail;
    LogRegParams p;
    p.eta = hyper_double(hp, "eta");
    p.max_iters = hyper_int(hp, "max_iters");
    p.tol = hyper_double(hp, "tol");
    p.l2 = hyper_double(hp, "l2");
    require(p.eta > 0.0, "eta must be > 0");
    require(p.max_iters >= 0, "max_iters must be >= 0");
    require(p.tol >= 0.0, "tol must be >= 0");
    require(p.l2 >= 0.0, "l2 must be >= 0");
    return p;
}

inline SvmParams svm_params(const HyperMap& hp) {
    using namespace detail;
    SvmParams p;
    p.c = hyper_double(hp, "C");
    p.epochs = hyper_int(hp, "epochs");
    require(p.c > 0.0, "C must be > 0");
    require(p.epochs >= 1, "epochs must be >= 1");
    return p;
}

inline GBoostParams gboost_params(const HyperMap& hp) {
    using namespace detail;
    GBoostParams p;
    p.learning_rate = hyper_double(hp, "learning_rate");
    p.rounds = hyper_int(hp, "rounds");
    p.max_depth = hyper_int(hp, "max_depth");
    p.min_samples_leaf = hyper_int(hp, "min_samples_leaf");
    require(p.learning_rate > 0.0, "learning_rate must be > 0");
    require(p.rounds >= 0, "rounds must be >= 0");
    require(p.max_depth >= 1, "max_depth must be >= 1");
    require(p.min_samples_leaf >= 1, "min_samples_leaf must be >= 1");
    return p;
}

inline KnnParams knn_params(const HyperMap& hp) {
    KnnParams p;
    p.k = detail::hyper_int(hp, "k");
    detail::require(p.k >= 1, "k must be >= 1");
    return p;
}

inline NbParams nb_params(const HyperMap& hp) {
    NbParams p;
    p.var_floor = detail::hyper_double(hp, "var_floor");
    detail::require(p.var_floor >= 0.0, "var_floor must be >= 0");
    return p;
}

} // namespace memclass
