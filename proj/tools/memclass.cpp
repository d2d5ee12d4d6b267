// memclass — train and evaluate memory-forensics malware classifiers from CSV
// feature tables. Commands communicate only through files (prepared splits,
// model JSON, report JSON), so every step is re-runnable and diffable.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memclass.hpp"

namespace fs = std::filesystem;
using namespace memclass;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitModel = 4;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("MEMCLASS_SEED")) {
        const auto parsed = parse_double(env);
        if (!parsed || *parsed < 0 || static_cast<double>(static_cast<std::uint64_t>(*parsed)) != *parsed) {
            throw UsageError("MEMCLASS_SEED must be a non-negative integer");
        }
        return static_cast<std::uint64_t>(*parsed);
    }
    return 42;
}

std::vector<std::pair<std::string, std::string>> parse_hyper_overrides(
    const std::vector<std::string>& raw) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& item : raw) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw UsageError("--hyper expects key=value, got '" + item + "'");
        }
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return out;
}

void require_writable(const fs::path& path, bool force) {
    if (!force && fs::exists(path)) {
        throw DataError("refusing to overwrite existing file (use --force): " + path.string());
    }
}

void print_class_counts(const char* split_name, const LabelSchema& schema,
                        const std::vector<std::size_t>& counts) {
    std::printf("%s:", split_name);
    for (std::size_t c = 0; c < schema.n_classes(); ++c) {
        std::printf(" %s=%zu", schema.class_names[c].c_str(), counts[c]);
    }
    std::printf("\n");
}

// ---------------------------------------------------------------------------
// prepare
// ---------------------------------------------------------------------------

struct PrepareConfig {
    std::string input;
    std::string out_dir;
    std::string task = "binary";
    std::optional<std::uint64_t> seed;
    double ratio = 0.8;
    std::string class_column = "Class";
    std::string category_column = "Category";
    std::vector<std::string> categorical;
    bool fit_scaler_on_all = false;
    bool drop_bad_rows = false;
    bool force = false;
};

void cmd_prepare(const PrepareConfig& cfg) {
    const auto seed = resolve_seed(cfg.seed);
    const LabelSchema schema = LabelSchema::for_task(parse_task(cfg.task));
    const LabelColumns columns{cfg.class_column, cfg.category_column};

    const fs::path dir(cfg.out_dir);
    require_writable(dir / "train.csv", cfg.force);
    require_writable(dir / "test.csv", cfg.force);
    require_writable(dir / "meta.json", cfg.force);

    RawTable raw = load_csv(cfg.input);
    std::size_t dropped = 0;
    if (cfg.drop_bad_rows) {
        const auto bad = find_invalid_rows(raw, schema, columns,
                                           {columns.class_column, columns.category_column},
                                           cfg.categorical);
        if (!bad.empty()) {
            std::vector<std::size_t> keep;
            keep.reserve(raw.row_count() - bad.size());
            std::size_t next_bad = 0;
            for (std::size_t i = 0; i < raw.row_count(); ++i) {
                if (next_bad < bad.size() && bad[next_bad] == i) {
                    ++next_bad;
                } else {
                    keep.push_back(i);
                }
            }
            raw = take_raw_rows(raw, keep);
            dropped = bad.size();
        }
    }

    const LabelVector labels = derive_labels(raw, schema, columns);
    const FeatureTable encoded =
        to_feature_table(raw, {columns.class_column, columns.category_column}, cfg.categorical);

    const SplitResult split = stratified_split(labels, cfg.ratio, seed);
    const FeatureTable train_x = encoded.take_rows(split.train_indices);
    const FeatureTable test_x = encoded.take_rows(split.test_indices);
    const LabelVector train_y = take_labels(labels, split.train_indices);
    const LabelVector test_y = take_labels(labels, split.test_indices);

    const ScalerParams scaler = fit_minmax(cfg.fit_scaler_on_all ? encoded : train_x);

    PreparedMeta meta;
    meta.schema = schema;
    meta.scaler = scaler;
    meta.seed = seed;
    meta.ratio = cfg.ratio;
    meta.scaler_fit = cfg.fit_scaler_on_all ? "all" : "train";
    meta.dropped_rows = dropped;
    meta.train_class_counts = train_y.histogram();
    meta.test_class_counts = test_y.histogram();

    const std::string train_csv = labeled_csv_text(apply_minmax(train_x, scaler), train_y);
    const std::string test_csv = labeled_csv_text(apply_minmax(test_x, scaler), test_y);
    const std::string meta_json = prepared_meta_to_json(meta).dump(2) + "\n";

    write_file_atomic(dir / "train.csv", train_csv, cfg.force);
    write_file_atomic(dir / "test.csv", test_csv, cfg.force);
    write_file_atomic(dir / "meta.json", meta_json, cfg.force);

    print_class_counts("total", schema, labels.histogram());
    print_class_counts("train", schema, meta.train_class_counts);
    print_class_counts("test", schema, meta.test_class_counts);
    if (dropped > 0) std::printf("dropped %zu malformed row(s)\n", dropped);
    std::printf("prepared split written to %s (seed=%llu, ratio=%s)\n", dir.string().c_str(),
                static_cast<unsigned long long>(seed), format_double(cfg.ratio).c_str());
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainConfig {
    std::string input_dir;
    std::string out;
    std::string model = "rf";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> hyper;
    int threads = 1;
    bool force = false;
};

void cmd_train(const TrainConfig& cfg) {
    const auto seed = resolve_seed(cfg.seed);
    const ModelKind kind = parse_model_kind(cfg.model);
    require_writable(cfg.out, cfg.force);

    const PreparedMeta meta = load_prepared_meta(cfg.input_dir);
    auto [train_x, train_y] = load_labeled_csv(fs::path(cfg.input_dir) / "train.csv", meta.schema);
    if (train_x.column_names() != meta.scaler.column_names) {
        throw ModelError("train.csv columns do not match meta.json feature names");
    }

    const HyperMap hyper =
        merge_hyperparams(kind, meta.schema.kind, parse_hyper_overrides(cfg.hyper));

    const auto t0 = std::chrono::steady_clock::now();
    const TrainedModel model = train_model(kind, train_x, train_y, hyper, seed, cfg.threads);
    const auto t1 = std::chrono::steady_clock::now();

    save_model(model, meta.scaler, cfg.out, cfg.force);
    std::printf("trained %s on %zu rows x %zu features in %.2f s -> %s\n", cfg.model.c_str(),
                train_x.row_count(), train_x.column_count(),
                std::chrono::duration<double>(t1 - t0).count(), cfg.out.c_str());
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateConfig {
    std::string model_path;
    std::string input_dir;
    std::string out_dir;
    int threads = 1;
    bool force = false;
};

void cmd_evaluate(const EvaluateConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    require_writable(dir / "report.json", cfg.force);
    require_writable(dir / "report.txt", cfg.force);
    require_writable(dir / "confusion.csv", cfg.force);

    auto [model, scaler] = load_model(cfg.model_path);
    const PreparedMeta meta = load_prepared_meta(cfg.input_dir);
    if (!(model.schema == meta.schema)) {
        throw ModelError("model task '" + task_name(model.schema.kind) +
                         "' does not match prepared split task '" + task_name(meta.schema.kind) +
                         "'");
    }
    auto [test_x, test_y] = load_labeled_csv(fs::path(cfg.input_dir) / "test.csv", meta.schema);
    if (test_x.column_names() != model.feature_names) {
        throw ModelError("test.csv columns do not match the model's feature names");
    }

    const LabelVector predicted = predict_batch(model, test_x, cfg.threads);
    const EvalReport report =
        evaluate_predictions(model_kind_name(model.kind), test_y, predicted,
                             model.training_seed, model.hyperparameters);

    const std::string table = render_rows({report_row(report)}, ReportFormat::Table);
    write_file_atomic(dir / "report.json", report_to_json(report).dump(2) + "\n", cfg.force);
    write_file_atomic(dir / "report.txt", table, cfg.force);
    write_file_atomic(dir / "confusion.csv", confusion_to_csv(report.cm, report.schema),
                      cfg.force);
    std::fputs(table.c_str(), stdout);
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

struct PredictConfig {
    std::string model_path;
    std::string input;
    std::string out;
    int threads = 1;
    bool force = false;
};

void cmd_predict(const PredictConfig& cfg) {
    require_writable(cfg.out, cfg.force);
    auto [model, scaler] = load_model(cfg.model_path);
    const RawTable raw = load_csv(cfg.input);

    // Strict column contract: the input must carry exactly the model's
    // feature columns (any order).
    if (raw.column_count() != model.feature_names.size()) {
        throw ModelError("input has " + std::to_string(raw.column_count()) +
                         " columns, model expects " +
                         std::to_string(model.feature_names.size()));
    }
    std::vector<std::size_t> source(model.feature_names.size());
    for (std::size_t j = 0; j < model.feature_names.size(); ++j) {
        const int idx = raw.column_index(model.feature_names[j]);
        if (idx < 0) {
            throw ModelError("input is missing model feature column '" + model.feature_names[j] +
                             "'");
        }
        source[j] = static_cast<std::size_t>(idx);
    }

    std::vector<double> values;
    values.reserve(raw.row_count() * model.feature_names.size());
    for (std::size_t i = 0; i < raw.row_count(); ++i) {
        for (std::size_t j = 0; j < source.size(); ++j) {
            const auto parsed = parse_double(raw.rows[i][source[j]]);
            if (!parsed) {
                throw DataError("non-numeric cell '" + raw.rows[i][source[j]] + "' at row " +
                                std::to_string(i) + ", column '" + model.feature_names[j] + "'");
            }
            values.push_back(*parsed);
        }
    }
    const FeatureTable scaled =
        apply_minmax(FeatureTable(model.feature_names, std::move(values)), scaler);
    const LabelVector predicted = predict_batch(model, scaled, cfg.threads);

    std::string out = "row_index,class_index,class_name\n";
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const auto cls = static_cast<std::size_t>(predicted.values[i]);
        out += std::to_string(i) + "," + std::to_string(cls) + "," +
               model.schema.class_names[cls] + "\n";
    }
    write_file_atomic(cfg.out, out, cfg.force);
    std::printf("wrote %zu prediction(s) to %s\n", predicted.size(), cfg.out.c_str());
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthConfig {
    int classes = 4;
    int rows = 2000;
    int features = 10;
    double separation = 3.0;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool force = false;
};

void cmd_synth(const SynthConfig& cfg) {
    require_writable(cfg.out, cfg.force);
    const auto seed = resolve_seed(cfg.seed);
    const std::string csv =
        synth_blobs_csv(cfg.classes, cfg.rows, cfg.features, cfg.separation, seed);
    write_file_atomic(cfg.out, csv, cfg.force);
    std::printf("wrote %d synthetic rows (%d classes, %d features, separation %s) to %s\n",
                cfg.rows, cfg.classes, cfg.features, format_double(cfg.separation).c_str(),
                cfg.out.c_str());
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportConfig {
    std::vector<std::string> inputs;
    std::string format = "table";
    std::string out;
    bool paper_reference = false;
    bool force = false;
};

void cmd_report(const ReportConfig& cfg) {
    const ReportFormat format = parse_report_format(cfg.format);
    if (!cfg.out.empty()) require_writable(cfg.out, cfg.force);

    std::vector<EvalReport> reports;
    for (const auto& path : cfg.inputs) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(path));
        } catch (const nlohmann::json::parse_error& e) {
            throw ModelError("cannot parse " + path + ": " + e.what());
        }
        reports.push_back(report_from_json(j));
    }
    for (std::size_t i = 1; i < reports.size(); ++i) {
        if (reports[i].schema.kind != reports[0].schema.kind) {
            throw ModelError("cannot merge reports from different tasks");
        }
    }
    std::stable_sort(reports.begin(), reports.end(),
                     [](const EvalReport& a, const EvalReport& b) {
                         return a.accuracy > b.accuracy;
                     });

    std::vector<ReportRow> rows;
    std::map<std::string, int> name_uses;
    for (const auto& report : reports) {
        ReportRow row = report_row(report);
        const int n = ++name_uses[row.model];
        if (n > 1) row.model += "#" + std::to_string(n);
        rows.push_back(std::move(row));
    }
    if (cfg.paper_reference && !reports.empty()) {
        for (const auto& ref : paper_reference_rows(reports[0].schema.kind)) rows.push_back(ref);
    }

    const std::string text = render_rows(rows, format);
    if (cfg.out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        write_file_atomic(cfg.out, text, cfg.force);
        std::printf("wrote leaderboard to %s\n", cfg.out.c_str());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"memclass: memory-forensics malware classification toolkit"};
    app.require_subcommand(1);

    PrepareConfig prepare_cfg;
    auto* prepare = app.add_subcommand(
        "prepare", "Ingest a raw dataset CSV, engineer features and write a train/test split");
    prepare->add_option("--input", prepare_cfg.input, "Raw dataset CSV")->required();
    prepare->add_option("--out", prepare_cfg.out_dir, "Output directory")->required();
    prepare->add_option("--task", prepare_cfg.task, "binary|multiclass (default binary)");
    prepare->add_option("--seed", prepare_cfg.seed, "Split seed (default $MEMCLASS_SEED or 42)");
    prepare->add_option("--split", prepare_cfg.ratio, "Train fraction (default 0.8)");
    prepare->add_option("--class-column", prepare_cfg.class_column,
                        "Class column name (default Class)");
    prepare->add_option("--category-column", prepare_cfg.category_column,
                        "Category column name (default Category)");
    prepare->add_option("--categorical", prepare_cfg.categorical,
                        "Feature columns to one-hot encode");
    prepare->add_flag("--fit-scaler-on-all", prepare_cfg.fit_scaler_on_all,
                      "Fit the scaler on all rows instead of the training split");
    prepare->add_flag("--drop-bad-rows", prepare_cfg.drop_bad_rows,
                      "Skip malformed rows instead of failing");
    prepare->add_flag("--force", prepare_cfg.force, "Overwrite existing outputs");
    prepare->callback([&] { cmd_prepare(prepare_cfg); });

    TrainConfig train_cfg;
    auto* train = app.add_subcommand("train", "Train a classifier on a prepared split");
    train->add_option("--input", train_cfg.input_dir, "Prepared split directory")->required();
    train->add_option("--out", train_cfg.out, "Model file to write")->required();
    train->add_option("--model", train_cfg.model, "nb|lr|svm|dt|rf|gb|knn (default rf)");
    train->add_option("--seed", train_cfg.seed, "Training seed (default $MEMCLASS_SEED or 42)");
    train->add_option("--hyper", train_cfg.hyper, "Hyperparameter override key=value");
    train->add_option("--threads", train_cfg.threads, "Worker threads (default 1)");
    train->add_flag("--force", train_cfg.force, "Overwrite existing outputs");
    train->callback([&] { cmd_train(train_cfg); });

    EvaluateConfig eval_cfg;
    auto* evaluate =
        app.add_subcommand("evaluate", "Evaluate a model on a prepared split's test rows");
    evaluate->add_option("--model", eval_cfg.model_path, "Model file")->required();
    evaluate->add_option("--input", eval_cfg.input_dir, "Prepared split directory")->required();
    evaluate->add_option("--out", eval_cfg.out_dir, "Output directory")->required();
    evaluate->add_option("--threads", eval_cfg.threads, "Worker threads (default 1)");
    evaluate->add_flag("--force", eval_cfg.force, "Overwrite existing outputs");
    evaluate->callback([&] { cmd_evaluate(eval_cfg); });

    PredictConfig predict_cfg;
    auto* predict = app.add_subcommand("predict", "Label an unlabeled feature CSV");
    predict->add_option("--model", predict_cfg.model_path, "Model file")->required();
    predict->add_option("--input", predict_cfg.input, "Feature CSV (unscaled)")->required();
    predict->add_option("--out", predict_cfg.out, "Predictions CSV to write")->required();
    predict->add_option("--threads", predict_cfg.threads, "Worker threads (default 1)");
    predict->add_flag("--force", predict_cfg.force, "Overwrite existing outputs");
    predict->callback([&] { cmd_predict(predict_cfg); });

    SynthConfig synth_cfg;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic Gaussian-blob dataset");
    synth->add_option("--classes", synth_cfg.classes, "Class count, 2-4 (default 4)");
    synth->add_option("--rows", synth_cfg.rows, "Row count (default 2000)");
    synth->add_option("--features", synth_cfg.features, "Feature count (default 10)");
    synth->add_option("--separation", synth_cfg.separation,
                      "Distance between class centers per coordinate (default 3)");
    synth->add_option("--seed", synth_cfg.seed, "Generator seed (default $MEMCLASS_SEED or 42)");
    synth->add_option("--out", synth_cfg.out, "CSV file to write")->required();
    synth->add_flag("--force", synth_cfg.force, "Overwrite existing outputs");
    synth->callback([&] { cmd_synth(synth_cfg); });

    ReportConfig report_cfg;
    auto* report = app.add_subcommand("report", "Merge report JSON files into a leaderboard");
    report->add_option("inputs", report_cfg.inputs, "Report JSON files")->required();
    report->add_option("--format", report_cfg.format, "table|csv (default table)");
    report->add_option("--out", report_cfg.out, "Write to file instead of stdout");
    report->add_flag("--paper-reference", report_cfg.paper_reference,
                     "Append published reference rows for the task");
    report->add_flag("--force", report_cfg.force, "Overwrite existing outputs");
    report->callback([&] { cmd_report(report_cfg); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const ModelError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitModel;
    }
    return 0;
}
