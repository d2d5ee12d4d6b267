#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memclass/errors.hpp"
#include "memclass/hyperparams.hpp"
#include "memclass/ingest.hpp"

namespace memclass {

struct ConfusionMatrix {
    std::size_t n_classes = 0;
    std::vector<std::int64_t> counts; // counts[truth * n_classes + predicted]

    std::int64_t at(std::size_t truth, std::size_t predicted) const {
        return counts[truth * n_classes + predicted];
    }
    std::int64_t total() const {
        std::int64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }
    std::int64_t row_sum(std::size_t truth) const {
        std::int64_t t = 0;
        for (std::size_t p = 0; p < n_classes; ++p) t += at(truth, p);
        return t;
    }
    std::int64_t column_sum(std::size_t predicted) const {
        std::int64_t t = 0;
        for (std::size_t r = 0; r < n_classes; ++r) t += at(r, predicted);
        return t;
    }
};

inline ConfusionMatrix confusion(const LabelVector& truth, const LabelVector& predicted) {
    if (!(truth.schema == predicted.schema)) {
        throw ModelError("confusion matrix inputs use different label schemas");
    }
    if (truth.size() != predicted.size()) {
        throw ModelError("confusion matrix inputs have different lengths");
    }
    if (truth.size() == 0) throw ModelError("confusion matrix needs at least one sample");

    ConfusionMatrix cm;
    cm.n_classes = truth.schema.n_classes();
    cm.counts.assign(cm.n_classes * cm.n_classes, 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        cm.counts[static_cast<std::size_t>(truth.values[i]) * cm.n_classes +
                  static_cast<std::size_t>(predicted.values[i])]++;
    }
    return cm;
}

inline double accuracy(const ConfusionMatrix& cm) {
    std::int64_t diag = 0;
    for (std::size_t c = 0; c < cm.n_classes; ++c) diag += cm.at(c, c);
    return static_cast<double>(diag) / static_cast<double>(cm.total());
}

struct PrfValues {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Zero-denominator cases are defined as 0 and flagged.
    bool precision_undefined = false;
    bool recall_undefined = false;
};

inline PrfValues per_class_prf(const ConfusionMatrix& cm, std::size_t c) {
    PrfValues out;
    const double tp = static_cast<double>(cm.at(c, c));
    const double predicted = static_cast<double>(cm.column_sum(c));
    const double actual = static_cast<double>(cm.row_sum(c));
    if (predicted > 0.0) {
        out.precision = tp / predicted;
    } else {
        out.precision_undefined = true;
    }
    if (actual > 0.0) {
        out.recall = tp / actual;
    } else {
        out.recall_undefined = true;
    }
    if (out.precision + out.recall > 0.0) {
        out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
    }
    return out;
}

// Unweighted mean over classes.
inline PrfValues macro_average(const std::vector<PrfValues>& per_class) {
    if (per_class.empty()) throw ModelError("macro average over zero classes");
    PrfValues out;
    for (const auto& v : per_class) {
        out.precision += v.precision;
        out.recall += v.recall;
        out.f1 += v.f1;
        out.precision_undefined = out.precision_undefined || v.precision_undefined;
        out.recall_undefined = out.recall_undefined || v.recall_undefined;
    }
    const auto k = static_cast<double>(per_class.size());
    out.precision /= k;
    out.recall /= k;
    out.f1 /= k;
    return out;
}

struct EvalReport {
    std::string model_name;     // e.g. "rf"
    LabelSchema schema;
    double accuracy = 0.0;
    PrfValues macro;
    std::vector<PrfValues> per_class;
    ConfusionMatrix cm;
    std::uint64_t seed = 0;
    HyperMap hyperparameters;
};

inline EvalReport evaluate_predictions(const std::string& model_name, const LabelVector& truth,
                                       const LabelVector& predicted, std::uint64_t seed,
                                       const HyperMap& hyperparameters) {
    EvalReport report;
    report.model_name = model_name;
    report.schema = truth.schema;
    report.cm = confusion(truth, predicted);
    report.accuracy = accuracy(report.cm);
    for (std::size_t c = 0; c < report.cm.n_classes; ++c) {
        report.per_class.push_back(per_class_prf(report.cm, c));
    }
    report.macro = macro_average(report.per_class);
    report.seed = seed;
    report.hyperparameters = hyperparameters;
    return report;
}

} // namespace memclass
