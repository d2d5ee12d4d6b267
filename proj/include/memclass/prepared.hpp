#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "memclass/errors.hpp"
#include "memclass/ingest.hpp"
#include "memclass/pipeline.hpp"
#include "memclass/rng.hpp"
#include "memclass/table.hpp"
#include "memclass/util.hpp"

namespace memclass {

// Prepared-split artifact: <dir>/train.csv and <dir>/test.csv hold the scaled
// features plus a final integer column "y"; <dir>/meta.json carries the
// scaler, seed, ratio and schema needed to train and evaluate later.

inline constexpr int kPreparedSchemaVersion = 1;

struct PreparedMeta {
    LabelSchema schema;
    ScalerParams scaler; // column_names are the feature names
    std::uint64_t seed = 0;
    double ratio = 0.8;
    std::string scaler_fit = "train"; // "train" or "all"
    std::size_t dropped_rows = 0;
    std::vector<std::size_t> train_class_counts;
    std::vector<std::size_t> test_class_counts;
};

inline std::string labeled_csv_text(const FeatureTable& features, const LabelVector& labels) {
    std::string out;
    for (const auto& name : features.column_names()) out += name + ",";
    out += "y\n";
    for (std::size_t i = 0; i < features.row_count(); ++i) {
        for (std::size_t j = 0; j < features.column_count(); ++j) {
            out += format_double(features.at(i, j)) + ",";
        }
        out += std::to_string(labels.values[i]) + "\n";
    }
    return out;
}

inline nlohmann::json prepared_meta_to_json(const PreparedMeta& meta) {
    return nlohmann::json{{"schema_version", kPreparedSchemaVersion},
                          {"generator", std::string(kGeneratorName)},
                          {"task", task_name(meta.schema.kind)},
                          {"class_names", meta.schema.class_names},
                          {"feature_names", meta.scaler.column_names},
                          {"scaler", {{"min", meta.scaler.min}, {"max", meta.scaler.max}}},
                          {"scaler_fit", meta.scaler_fit},
                          {"seed", meta.seed},
                          {"ratio", meta.ratio},
                          {"dropped_rows", meta.dropped_rows},
                          {"train_class_counts", meta.train_class_counts},
                          {"test_class_counts", meta.test_class_counts}};
}

inline PreparedMeta prepared_meta_from_json(const nlohmann::json& j) {
    try {
        const int version = j.at("schema_version").get<int>();
        if (version != kPreparedSchemaVersion) {
            throw ModelError("unsupported prepared schema_version " + std::to_string(version));
        }
        PreparedMeta meta;
        meta.schema.kind = parse_task(j.at("task").get<std::string>());
        meta.schema.class_names = j.at("class_names").get<std::vector<std::string>>();
        meta.scaler.column_names = j.at("feature_names").get<std::vector<std::string>>();
        meta.scaler.min = j.at("scaler").at("min").get<std::vector<double>>();
        meta.scaler.max = j.at("scaler").at("max").get<std::vector<double>>();
        meta.seed = j.at("seed").get<std::uint64_t>();
        meta.ratio = j.at("ratio").get<double>();
        meta.scaler_fit = j.at("scaler_fit").get<std::string>();
        meta.dropped_rows = j.at("dropped_rows").get<std::size_t>();
        meta.train_class_counts = j.at("train_class_counts").get<std::vector<std::size_t>>();
        meta.test_class_counts = j.at("test_class_counts").get<std::vector<std::size_t>>();
        if (meta.scaler.min.size() != meta.scaler.column_names.size() ||
            meta.scaler.max.size() != meta.scaler.column_names.size()) {
            throw ModelError("prepared meta scaler shape mismatch");
        }
        return meta;
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("corrupt prepared meta file: ") + e.what());
    }
}

inline PreparedMeta load_prepared_meta(const std::filesystem::path& dir) {
    nlohmann::json j;
    const auto path = dir / "meta.json";
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ModelError("cannot parse " + path.string() + ": " + e.what());
    }
    return prepared_meta_from_json(j);
}

// Reads a prepared split file back into features and labels.
inline std::pair<FeatureTable, LabelVector> load_labeled_csv(const std::filesystem::path& path,
                                                             const LabelSchema& schema) {
    const RawTable raw = load_csv(path);
    if (raw.column_index("y") != static_cast<int>(raw.column_count()) - 1) {
        throw DataError("expected final column 'y' in " + path.string());
    }
    FeatureTable features = to_feature_table(raw, {"y"});
    LabelVector labels;
    labels.schema = schema;
    const auto y_col = static_cast<std::size_t>(raw.column_index("y"));
    labels.values.reserve(raw.row_count());
    for (std::size_t i = 0; i < raw.row_count(); ++i) {
        const auto parsed = parse_double(raw.rows[i][y_col]);
        const int y = parsed ? static_cast<int>(*parsed) : -1;
        if (!parsed || static_cast<double>(y) != *parsed || y < 0 ||
            static_cast<std::size_t>(y) >= schema.n_classes()) {
            throw DataError("invalid label '" + raw.rows[i][y_col] + "' at row " +
                            std::to_string(i) + " of " + path.string());
        }
        labels.values.push_back(y);
    }
    return {std::move(features), std::move(labels)};
}

} // namespace memclass
