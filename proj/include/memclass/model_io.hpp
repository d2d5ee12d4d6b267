#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "memclass/errors.hpp"
#include "memclass/model.hpp"
#include "memclass/pipeline.hpp"
#include "memclass/rng.hpp"
#include "memclass/util.hpp"

namespace memclass {

// Model files are canonical JSON: nlohmann::json keeps keys sorted and emits
// shortest-round-trip number text, so identical models serialize to identical
// bytes and save -> load -> save is the identity.

inline constexpr int kModelSchemaVersion = 1;

namespace detail {

using nlohmann::json;

inline json schema_to_json(const LabelSchema& schema) {
    return json{{"kind", task_name(schema.kind)}, {"class_names", schema.class_names}};
}

inline LabelSchema schema_from_json(const json& j) {
    LabelSchema schema;
    schema.kind = parse_task(j.at("kind").get<std::string>());
    schema.class_names = j.at("class_names").get<std::vector<std::string>>();
    const LabelSchema expected = LabelSchema::for_task(schema.kind);
    if (!(schema == expected)) throw ModelError("unexpected class names for task");
    return schema;
}

inline json tree_node_to_json(const Tree& tree, std::int32_t index) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    if (node.feature < 0) {
        return json{{"counts", node.class_counts}, {"class", node.predicted}};
    }
    return json{{"feature", node.feature},
                {"threshold", node.threshold},
                {"left", tree_node_to_json(tree, node.left)},
                {"right", tree_node_to_json(tree, node.right)}};
}

inline std::int32_t tree_node_from_json(const json& j, Tree& tree) {
    TreeNode node;
    if (j.contains("feature")) {
        node.feature = j.at("feature").get<int>();
        node.threshold = j.at("threshold").get<double>();
        if (node.feature < 0 || node.feature >= tree.n_features) {
            throw ModelError("tree references feature index out of range");
        }
    } else {
        node.class_counts = j.at("counts").get<std::vector<std::int64_t>>();
        node.predicted = j.at("class").get<int>();
        if (node.class_counts.size() != static_cast<std::size_t>(tree.n_classes) ||
            node.predicted < 0 || node.predicted >= tree.n_classes) {
            throw ModelError("leaf node inconsistent with class count");
        }
    }
    tree.nodes.push_back(std::move(node));
    const auto self = static_cast<std::int32_t>(tree.nodes.size() - 1);
    if (tree.nodes[static_cast<std::size_t>(self)].feature >= 0) {
        const std::int32_t left = tree_node_from_json(j.at("left"), tree);
        const std::int32_t right = tree_node_from_json(j.at("right"), tree);
        tree.nodes[static_cast<std::size_t>(self)].left = left;
        tree.nodes[static_cast<std::size_t>(self)].right = right;
    }
    return self;
}

inline json tree_to_json(const Tree& tree) {
    return json{{"n_features", tree.n_features},
                {"n_classes", tree.n_classes},
                {"root", tree_node_to_json(tree, 0)}};
}

inline Tree tree_from_json(const json& j) {
    Tree tree;
    tree.n_features = j.at("n_features").get<int>();
    tree.n_classes = j.at("n_classes").get<int>();
    if (tree.n_features < 1 || tree.n_classes < 2) throw ModelError("tree header out of range");
    tree_node_from_json(j.at("root"), tree);
    return tree;
}

inline json reg_node_to_json(const RegTree& tree, std::int32_t index) {
    const RegNode& node = tree.nodes[static_cast<std::size_t>(index)];
    if (node.feature < 0) return json{{"value", node.value}};
    return json{{"feature", node.feature},
                {"threshold", node.threshold},
                {"left", reg_node_to_json(tree, node.left)},
                {"right", reg_node_to_json(tree, node.right)}};
}

inline std::int32_t reg_node_from_json(const json& j, RegTree& tree, int n_features) {
    RegNode node;
    if (j.contains("feature")) {
        node.feature = j.at("feature").get<int>();
        node.threshold = j.at("threshold").get<double>();
        if (node.feature < 0 || node.feature >= n_features) {
            throw ModelError("regression tree references feature index out of range");
        }
    } else {
        node.value = j.at("value").get<double>();
    }
    tree.nodes.push_back(node);
    const auto self = static_cast<std::int32_t>(tree.nodes.size() - 1);
    if (tree.nodes[static_cast<std::size_t>(self)].feature >= 0) {
        const std::int32_t left = reg_node_from_json(j.at("left"), tree, n_features);
        const std::int32_t right = reg_node_from_json(j.at("right"), tree, n_features);
        tree.nodes[static_cast<std::size_t>(self)].left = left;
        tree.nodes[static_cast<std::size_t>(self)].right = right;
    }
    return self;
}

inline json params_to_json(const TrainedModel& model) {
    switch (model.kind) {
        case ModelKind::NaiveBayes: {
            const auto& nb = std::get<NbModel>(model.params);
            return json{{"priors", nb.priors}, {"means", nb.means}, {"vars", nb.vars}};
        }
        case ModelKind::LogisticRegression: {
            const auto& lr = std::get<LogRegModel>(model.params);
            return json{{"weights", lr.weights},
                        {"bias", lr.bias},
                        {"iterations_run", lr.iterations_run},
                        {"final_eta", lr.final_eta}};
        }
        case ModelKind::LinearSvm: {
            const auto& svm = std::get<SvmModel>(model.params);
            return json{{"weights", svm.weights}, {"bias", svm.bias}, {"eta0", svm.eta0}};
        }
        case ModelKind::DecisionTree:
            return tree_to_json(std::get<Tree>(model.params));
        case ModelKind::RandomForest: {
            const auto& forest = std::get<ForestModel>(model.params);
            json trees = json::array();
            for (const Tree& t : forest.trees) trees.push_back(tree_to_json(t));
            return json{{"trees", std::move(trees)}, {"tree_seeds", forest.tree_seeds}};
        }
        case ModelKind::GradientBoosting: {
            const auto& gb = std::get<GBoostModel>(model.params);
            json rounds = json::array();
            for (const auto& round : gb.rounds) {
                json per_class = json::array();
                for (const RegTree& t : round) per_class.push_back(reg_node_to_json(t, 0));
                rounds.push_back(std::move(per_class));
            }
            return json{{"base_scores", gb.base_scores},
                        {"learning_rate", gb.learning_rate},
                        {"n_features", gb.n_features},
                        {"rounds", std::move(rounds)}};
        }
        case ModelKind::Knn: {
            const auto& knn = std::get<KnnModel>(model.params);
            json rows = json::array();
            for (std::size_t i = 0; i < knn.train.row_count(); ++i) {
                const auto row = knn.train.row(i);
                rows.push_back(std::vector<double>(row.begin(), row.end()));
            }
            return json{{"k", knn.k},
                        {"labels", knn.labels},
                        {"n_classes", knn.n_classes},
                        {"train", std::move(rows)}};
        }
    }
    throw ModelError("invalid model kind");
}

inline void params_from_json(const json& j, TrainedModel& model) {
    const auto n_features = model.feature_names.size();
    const auto n_classes = model.schema.n_classes();
    switch (model.kind) {
        case ModelKind::NaiveBayes: {
            NbModel nb;
            nb.priors = j.at("priors").get<std::vector<double>>();
            nb.means = j.at("means").get<std::vector<std::vector<double>>>();
            nb.vars = j.at("vars").get<std::vector<std::vector<double>>>();
            if (nb.priors.size() != n_classes || nb.means.size() != n_classes ||
                nb.vars.size() != n_classes) {
                throw ModelError("naive Bayes parameter shape mismatch");
            }
            for (std::size_t c = 0; c < n_classes; ++c) {
                if (nb.means[c].size() != n_features || nb.vars[c].size() != n_features) {
                    throw ModelError("naive Bayes parameter shape mismatch");
                }
            }
            model.params = std::move(nb);
            return;
        }
        case ModelKind::LogisticRegression: {
            LogRegModel lr;
            lr.weights = j.at("weights").get<std::vector<double>>();
            lr.bias = j.at("bias").get<double>();
            lr.iterations_run = j.at("iterations_run").get<int>();
            lr.final_eta = j.at("final_eta").get<double>();
            if (lr.weights.size() != n_features) {
                throw ModelError("logistic regression weight shape mismatch");
            }
            model.params = std::move(lr);
            return;
        }
        case ModelKind::LinearSvm: {
            SvmModel svm;
            svm.weights = j.at("weights").get<std::vector<double>>();
            svm.bias = j.at("bias").get<double>();
            svm.eta0 = j.at("eta0").get<double>();
            if (svm.weights.size() != n_features) throw ModelError("SVM weight shape mismatch");
            model.params = std::move(svm);
            return;
        }
        case ModelKind::DecisionTree: {
            Tree tree = tree_from_json(j);
            if (tree.n_features != static_cast<int>(n_features) ||
                tree.n_classes != static_cast<int>(n_classes)) {
                throw ModelError("tree shape inconsistent with model header");
            }
            model.params = std::move(tree);
            return;
        }
        case ModelKind::RandomForest: {
            ForestModel forest;
            forest.tree_seeds = j.at("tree_seeds").get<std::vector<std::uint64_t>>();
            for (const json& tj : j.at("trees")) {
                Tree tree = tree_from_json(tj);
                if (tree.n_features != static_cast<int>(n_features) ||
                    tree.n_classes != static_cast<int>(n_classes)) {
                    throw ModelError("forest tree shape inconsistent with model header");
                }
                forest.trees.push_back(std::move(tree));
            }
            if (forest.trees.empty() || forest.trees.size() != forest.tree_seeds.size()) {
                throw ModelError("forest tree/seed count mismatch");
            }
            model.params = std::move(forest);
            return;
        }
        case ModelKind::GradientBoosting: {
            GBoostModel gb;
            gb.base_scores = j.at("base_scores").get<std::vector<double>>();
            gb.learning_rate = j.at("learning_rate").get<double>();
            gb.n_features = j.at("n_features").get<int>();
            if (gb.base_scores.size() != n_classes ||
                gb.n_features != static_cast<int>(n_features)) {
                throw ModelError("gradient boosting shape mismatch");
            }
            for (const json& round : j.at("rounds")) {
                if (round.size() != n_classes) {
                    throw ModelError("gradient boosting round has wrong class count");
                }
                std::vector<RegTree> trees;
                for (const json& tj : round) {
                    RegTree tree;
                    reg_node_from_json(tj, tree, gb.n_features);
                    trees.push_back(std::move(tree));
                }
                gb.rounds.push_back(std::move(trees));
            }
            model.params = std::move(gb);
            return;
        }
        case ModelKind::Knn: {
            const int k = j.at("k").get<int>();
            const auto labels = j.at("labels").get<std::vector<int>>();
            const int kn_classes = j.at("n_classes").get<int>();
            std::vector<double> values;
            std::size_t rows = 0;
            for (const json& rj : j.at("train")) {
                auto row = rj.get<std::vector<double>>();
                if (row.size() != n_features) throw ModelError("KNN row shape mismatch");
                values.insert(values.end(), row.begin(), row.end());
                ++rows;
            }
            if (labels.size() != rows || k < 1 || static_cast<std::size_t>(k) > rows ||
                kn_classes != static_cast<int>(n_classes)) {
                throw ModelError("KNN parameter shape mismatch");
            }
            KnnModel knn{k, FeatureTable(model.feature_names, std::move(values)), labels,
                         kn_classes};
            model.params = std::move(knn);
            return;
        }
    }
    throw ModelError("invalid model kind");
}

} // namespace detail

inline nlohmann::json model_to_json(const TrainedModel& model, const ScalerParams& scaler) {
    if (scaler.column_names != model.feature_names) {
        throw ModelError("scaler columns do not match model feature names");
    }
    return nlohmann::json{{"schema_version", kModelSchemaVersion},
                          {"generator", std::string(kGeneratorName)},
                          {"model_kind", model_kind_name(model.kind)},
                          {"schema", detail::schema_to_json(model.schema)},
                          {"feature_names", model.feature_names},
                          {"hyperparameters", model.hyperparameters},
                          {"training_seed", model.training_seed},
                          {"scaler", {{"min", scaler.min}, {"max", scaler.max}}},
                          {"params", detail::params_to_json(model)}};
}

inline std::pair<TrainedModel, ScalerParams> model_from_json(const nlohmann::json& j) {
    try {
        const int version = j.at("schema_version").get<int>();
        if (version != kModelSchemaVersion) {
            throw ModelError("unsupported model schema_version " + std::to_string(version));
        }
        TrainedModel model;
        model.kind = parse_model_kind(j.at("model_kind").get<std::string>());
        model.schema = detail::schema_from_json(j.at("schema"));
        model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        if (model.feature_names.empty()) throw ModelError("model has no features");
        for (const auto& [key, value] : j.at("hyperparameters").items()) {
            model.hyperparameters[key] = value.get<std::string>();
        }
        model.training_seed = j.at("training_seed").get<std::uint64_t>();

        ScalerParams scaler;
        scaler.column_names = model.feature_names;
        scaler.min = j.at("scaler").at("min").get<std::vector<double>>();
        scaler.max = j.at("scaler").at("max").get<std::vector<double>>();
        if (scaler.min.size() != model.feature_names.size() ||
            scaler.max.size() != model.feature_names.size()) {
            throw ModelError("scaler shape does not match feature names");
        }
        detail::params_from_json(j.at("params"), model);
        return {std::move(model), std::move(scaler)};
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("corrupt model file: ") + e.what());
    }
}

inline void save_model(const TrainedModel& model, const ScalerParams& scaler,
                       const std::filesystem::path& path, bool force = false) {
    write_file_atomic(path, model_to_json(model, scaler).dump(2) + "\n", force);
}

inline std::pair<TrainedModel, ScalerParams> load_model(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ModelError("cannot parse model file " + path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

} // namespace memclass
