#pragma once

#include <array>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "memclass/errors.hpp"
#include "memclass/metrics.hpp"
#include "memclass/util.hpp"

namespace memclass {

inline constexpr int kReportSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Report JSON
// ---------------------------------------------------------------------------

inline nlohmann::json report_to_json(const EvalReport& report) {
    using nlohmann::json;
    json per_class = json::array();
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
        const PrfValues& v = report.per_class[c];
        per_class.push_back(json{{"class", report.schema.class_names[c]},
                                 {"precision", v.precision},
                                 {"recall", v.recall},
                                 {"f1", v.f1},
                                 {"precision_undefined", v.precision_undefined},
                                 {"recall_undefined", v.recall_undefined}});
    }
    json confusion = json::array();
    for (std::size_t t = 0; t < report.cm.n_classes; ++t) {
        json row = json::array();
        for (std::size_t p = 0; p < report.cm.n_classes; ++p) row.push_back(report.cm.at(t, p));
        confusion.push_back(std::move(row));
    }
    return json{{"schema_version", kReportSchemaVersion},
                {"model", report.model_name},
                {"task", task_name(report.schema.kind)},
                {"class_names", report.schema.class_names},
                {"n_test", report.cm.total()},
                {"accuracy", report.accuracy},
                {"macro_precision", report.macro.precision},
                {"macro_recall", report.macro.recall},
                {"macro_f1", report.macro.f1},
                {"per_class", std::move(per_class)},
                {"confusion", std::move(confusion)},
                {"seed", report.seed},
                {"hyperparameters", report.hyperparameters}};
}

inline EvalReport report_from_json(const nlohmann::json& j) {
    try {
        const int version = j.at("schema_version").get<int>();
        if (version != kReportSchemaVersion) {
            throw ModelError("unsupported report schema_version " + std::to_string(version));
        }
        EvalReport report;
        report.model_name = j.at("model").get<std::string>();
        report.schema.kind = parse_task(j.at("task").get<std::string>());
        report.schema.class_names = j.at("class_names").get<std::vector<std::string>>();
        report.accuracy = j.at("accuracy").get<double>();
        report.macro.precision = j.at("macro_precision").get<double>();
        report.macro.recall = j.at("macro_recall").get<double>();
        report.macro.f1 = j.at("macro_f1").get<double>();
        for (const auto& pc : j.at("per_class")) {
            PrfValues v;
            v.precision = pc.at("precision").get<double>();
            v.recall = pc.at("recall").get<double>();
            v.f1 = pc.at("f1").get<double>();
            v.precision_undefined = pc.at("precision_undefined").get<bool>();
            v.recall_undefined = pc.at("recall_undefined").get<bool>();
            report.per_class.push_back(v);
        }
        report.cm.n_classes = report.schema.n_classes();
        report.cm.counts.assign(report.cm.n_classes * report.cm.n_classes, 0);
        const auto& confusion = j.at("confusion");
        if (confusion.size() != report.cm.n_classes) throw ModelError("confusion shape mismatch");
        for (std::size_t t = 0; t < report.cm.n_classes; ++t) {
            if (confusion[t].size() != report.cm.n_classes) {
                throw ModelError("confusion shape mismatch");
            }
            for (std::size_t p = 0; p < report.cm.n_classes; ++p) {
                report.cm.counts[t * report.cm.n_classes + p] =
                    confusion[t][p].get<std::int64_t>();
            }
        }
        report.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& [key, value] : j.at("hyperparameters").items()) {
            report.hyperparameters[key] = value.get<std::string>();
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("corrupt report file: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Confusion matrix CSV (rows = truth class)
// ---------------------------------------------------------------------------

inline std::string confusion_to_csv(const ConfusionMatrix& cm, const LabelSchema& schema) {
    std::string out = "truth";
    for (const auto& name : schema.class_names) out += ",predicted_" + name;
    out += "\n";
    for (std::size_t t = 0; t < cm.n_classes; ++t) {
        out += schema.class_names[t];
        for (std::size_t p = 0; p < cm.n_classes; ++p) {
            out += "," + std::to_string(cm.at(t, p));
        }
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Leaderboard rendering
// ---------------------------------------------------------------------------

enum class ReportFormat { Table, Csv };

inline ReportFormat parse_report_format(std::string_view name) {
    if (name == "table") return ReportFormat::Table;
    if (name == "csv") return ReportFormat::Csv;
    throw UsageError("unknown format '" + std::string(name) + "' (expected table|csv)");
}

struct ReportRow {
    std::string model;
    std::string accuracy;
    std::string precision;
    std::string recall;
    std::string f1;
    std::string note; // empty or "paper-reported"
};

inline std::string percent_cell(double fraction, bool with_sign) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), with_sign ? "%.2f%%" : "%.2f", fraction * 100.0);
    return buf;
}

inline ReportRow report_row(const EvalReport& report) {
    return {report.model_name, percent_cell(report.accuracy, true),
            percent_cell(report.macro.precision, false), percent_cell(report.macro.recall, false),
            percent_cell(report.macro.f1, false), ""};
}

// Published results the toolkit is benchmarked against, including comparison
// models that are deliberately not implemented here. Cells are kept verbatim.
inline const std::vector<ReportRow>& paper_reference_rows(TaskKind task) {
    static const std::vector<ReportRow> binary{
        {"Logistic Regression", "99.56%", "99.42", "99.71", "99.56", "paper-reported"},
        {"Linear SVM", "99.88%", "99.88", "99.88", "99.88", "paper-reported"},
        {"Naive Bayes", "99.21%", "98.78", "99.65", "99.21", "paper-reported"},
        {"Decision Tree", "99.99%", "99.98", "99.982", "99.99", "paper-reported"},
        {"Random Forest", "99.982%", "99.982", "99.982", "99.982", "paper-reported"},
        {"ANN", "99.72%", "~100.0", "99.9", "~100", "paper-reported"},
        {"MLP", "99.70%", "99.70", "99.70", "99.70", "paper-reported"},
        {"kNN", "99.96%", "99.96", "99.96", "99.96", "paper-reported"},
        {"Dilated CNN", "99.88%", "99.88", "99.88", "99.88", "paper-reported"},
    };
    static const std::vector<ReportRow> multiclass{
        {"Naive Bayes", "68.86%", "68.86", "73.26", "64.51", "paper-reported"},
        {"Decision Tree", "84.67%", "84.89", "84.92", "84.90", "paper-reported"},
        {"Random Forest", "89.07%", "87.63", "87.62", "87.62", "paper-reported"},
        {"Gradient Boosting", "83.84%", "83.84", "83.84", "83.83", "paper-reported"},
        {"K-Nearest Neighbor", "79.80%", "79.80", "79.85", "79.81", "paper-reported"},
        {"Dilated CNN", "81.83%", "72.71", "72.72", "72.71", "paper-reported"},
    };
    return task == TaskKind::Binary ? binary : multiclass;
}

inline std::string render_rows(const std::vector<ReportRow>& rows, ReportFormat format) {
    static constexpr std::array<std::string_view, 6> header = {"Model",  "Accuracy", "Precision",
                                                               "Recall", "F1 Score", "Note"};
    auto cells = [](const ReportRow& r) {
        return std::array<std::string_view, 6>{r.model, r.accuracy, r.precision,
                                               r.recall, r.f1, r.note};
    };

    std::string out;
    if (format == ReportFormat::Csv) {
        out = "model,accuracy,precision,recall,f1,note\n";
        for (const auto& row : rows) {
            const auto c = cells(row);
            for (std::size_t i = 0; i < c.size(); ++i) {
                out += std::string(c[i]) + (i + 1 < c.size() ? "," : "\n");
            }
        }
        return out;
    }

    std::array<std::size_t, 6> width{};
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& row : rows) {
        const auto c = cells(row);
        for (std::size_t i = 0; i < c.size(); ++i) width[i] = std::max(width[i], c[i].size());
    }
    auto emit = [&](const std::array<std::string_view, 6>& c) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            out += c[i];
            if (i + 1 < c.size()) out.append(width[i] - c[i].size() + 2, ' ');
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += "\n";
    };
    emit(header);
    for (const auto& row : rows) emit(cells(row));
    return out;
}

} // namespace memclass
