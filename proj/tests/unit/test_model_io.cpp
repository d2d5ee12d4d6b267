#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "memclass/model_io.hpp"
#include "memclass/report.hpp"
#include "oracles.hpp"

using namespace memclass;
namespace fs = std::filesystem;

namespace {

struct Fixture {
    FeatureTable table;
    LabelVector labels;
};

// Small binary-task training set; every model kind can fit it.
Fixture binary_fixture() {
    Rng rng(1001);
    std::vector<double> values;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
        const int cls = i % 2;
        y.push_back(cls);
        for (int j = 0; j < 3; ++j) values.push_back(cls * 4.0 + rng.normal());
    }
    return {FeatureTable({"a", "b", "c"}, std::move(values)),
            {LabelSchema::binary(), std::move(y)}};
}

Fixture multi_fixture() {
    Rng rng(1002);
    std::vector<double> values;
    std::vector<int> y;
    for (int i = 0; i < 60; ++i) {
        const int cls = i % 4;
        y.push_back(cls);
        for (int j = 0; j < 3; ++j) values.push_back(cls * 3.0 + rng.normal());
    }
    return {FeatureTable({"a", "b", "c"}, std::move(values)),
            {LabelSchema::multiclass(), std::move(y)}};
}

ScalerParams identity_scaler(const FeatureTable& table) {
    ScalerParams scaler;
    scaler.column_names = table.column_names();
    scaler.min.assign(table.column_count(), 0.0);
    scaler.max.assign(table.column_count(), 1.0);
    return scaler;
}

fs::path temp_model_path(const std::string& name) {
    const fs::path path = fs::temp_directory_path() / name;
    fs::remove(path);
    return path;
}

} // namespace

TEST_CASE("every model kind round-trips through the model file") {
    const Fixture binary = binary_fixture();
    const Fixture multi = multi_fixture();

    const std::vector<ModelKind> kinds{
        ModelKind::NaiveBayes,   ModelKind::LogisticRegression, ModelKind::LinearSvm,
        ModelKind::DecisionTree, ModelKind::RandomForest,       ModelKind::GradientBoosting,
        ModelKind::Knn,
    };
    for (const ModelKind kind : kinds) {
        CAPTURE(model_kind_name(kind));
        const bool binary_only =
            kind == ModelKind::LogisticRegression || kind == ModelKind::LinearSvm;
        const Fixture& fx = binary_only ? binary : multi;
        const TaskKind task = binary_only ? TaskKind::Binary : TaskKind::MultiClass;

        HyperMap hp = default_hyperparams(kind, task);
        if (kind == ModelKind::GradientBoosting) hp["rounds"] = "5";
        if (kind == ModelKind::RandomForest) hp["n_estimators"] = "5";

        const TrainedModel model = train_model(kind, fx.table, fx.labels, hp, 33);
        const ScalerParams scaler = identity_scaler(fx.table);

        const auto path = temp_model_path("mc_model_" + model_kind_name(kind) + ".json");
        save_model(model, scaler, path);
        auto [loaded, loaded_scaler] = load_model(path);

        CHECK(loaded.kind == model.kind);
        CHECK(loaded.schema == model.schema);
        CHECK(loaded.feature_names == model.feature_names);
        CHECK(loaded.hyperparameters == model.hyperparameters);
        CHECK(loaded_scaler == scaler);

        // Reloaded model predicts identically on training rows and fresh rows.
        Rng rng(5 + static_cast<std::uint64_t>(kind));
        for (std::size_t i = 0; i < fx.table.row_count(); ++i) {
            CHECK(loaded.predict(fx.table.row(i)) == model.predict(fx.table.row(i)));
        }
        for (int q = 0; q < 25; ++q) {
            std::vector<double> row(3);
            for (auto& v : row) v = rng.unit() * 12.0 - 1.0;
            CHECK(loaded.predict(row) == model.predict(row));
        }

        // save -> load -> save is byte-identical.
        const auto path2 = temp_model_path("mc_model2_" + model_kind_name(kind) + ".json");
        save_model(loaded, loaded_scaler, path2);
        CHECK(read_file(path) == read_file(path2));

        // Identical trainings give identical bytes.
        const TrainedModel retrain = train_model(kind, fx.table, fx.labels, hp, 33);
        CHECK(model_to_json(retrain, scaler).dump(2) == model_to_json(model, scaler).dump(2));
    }
}

TEST_CASE("unsupported schema_version is rejected") {
    const Fixture fx = binary_fixture();
    const TrainedModel model = train_model(ModelKind::NaiveBayes, fx.table, fx.labels,
                                           default_hyperparams(ModelKind::NaiveBayes,
                                                               TaskKind::Binary),
                                           1);
    nlohmann::json j = model_to_json(model, identity_scaler(fx.table));
    j["schema_version"] = 99;
    CHECK_THROWS_WITH_AS(model_from_json(j), doctest::Contains("schema_version"), ModelError);
}

TEST_CASE("missing fields and truncated documents are corrupt-file errors") {
    const Fixture fx = binary_fixture();
    const TrainedModel model = train_model(ModelKind::LinearSvm, fx.table, fx.labels,
                                           default_hyperparams(ModelKind::LinearSvm,
                                                               TaskKind::Binary),
                                           1);
    nlohmann::json j = model_to_json(model, identity_scaler(fx.table));
    j.erase("params");
    CHECK_THROWS_AS(model_from_json(j), ModelError);

    nlohmann::json shape = model_to_json(model, identity_scaler(fx.table));
    shape["params"]["weights"] = std::vector<double>{1.0};
    CHECK_THROWS_AS(model_from_json(shape), ModelError);

    const auto path = temp_model_path("mc_truncated.json");
    std::ofstream(path, std::ios::binary) << "{\"schema_version\": 1, \"model";
    CHECK_THROWS_AS(load_model(path), ModelError);
}

TEST_CASE("save_model refuses to overwrite without force") {
    const Fixture fx = binary_fixture();
    const TrainedModel model = train_model(ModelKind::NaiveBayes, fx.table, fx.labels,
                                           default_hyperparams(ModelKind::NaiveBayes,
                                                               TaskKind::Binary),
                                           1);
    const ScalerParams scaler = identity_scaler(fx.table);
    const auto path = temp_model_path("mc_collision.json");
    save_model(model, scaler, path);
    CHECK_THROWS_AS(save_model(model, scaler, path), DataError);
    CHECK_NOTHROW(save_model(model, scaler, path, /*force=*/true));
}

TEST_CASE("report JSON round-trips") {
    LabelVector truth{LabelSchema::multiclass(), {0, 1, 2, 3, 0, 1}};
    LabelVector pred{LabelSchema::multiclass(), {0, 1, 2, 2, 0, 3}};
    const EvalReport report =
        evaluate_predictions("rf", truth, pred, 77, {{"n_estimators", "30"}});
    const nlohmann::json j = report_to_json(report);
    const EvalReport loaded = report_from_json(j);
    CHECK(loaded.model_name == report.model_name);
    CHECK(loaded.accuracy == report.accuracy);
    CHECK(loaded.cm.counts == report.cm.counts);
    CHECK(loaded.seed == report.seed);
    CHECK(report_to_json(loaded) == j);

    nlohmann::json bad = j;
    bad["schema_version"] = 5;
    CHECK_THROWS_AS(report_from_json(bad), ModelError);
}
