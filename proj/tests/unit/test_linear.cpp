#include <doctest.h>

#include "memclass/linear_svm.hpp"
#include "memclass/logistic_regression.hpp"
#include "memclass/model.hpp"
#include "oracles.hpp"

using namespace memclass;

namespace {

LogRegParams lr_defaults() {
    return logreg_params(default_hyperparams(ModelKind::LogisticRegression, TaskKind::Binary));
}

SvmParams svm_defaults() {
    return svm_params(default_hyperparams(ModelKind::LinearSvm, TaskKind::Binary));
}

} // namespace

TEST_CASE("zero-iteration logistic regression predicts class 1 everywhere") {
    // All-zero weights put every sample exactly on the 0.5 boundary, and the
    // p >= 0.5 convention maps that to class 1.
    const FeatureTable table({"x"}, {-1, 1});
    const std::vector<int> labels{0, 1};
    LogRegParams params = lr_defaults();
    params.max_iters = 0;
    const LogRegModel model = fit_logreg(table, labels, params);
    CHECK(model.weights == std::vector<double>{0.0});
    CHECK(predict_logreg(model, std::vector<double>{-5.0}) == 1);
    CHECK(predict_logreg(model, std::vector<double>{5.0}) == 1);
}

TEST_CASE("logistic regression separates the 1-D toy set") {
    const FeatureTable table({"x"}, {-1, -1, -1, 1, 1, 1});
    const std::vector<int> labels{0, 0, 0, 1, 1, 1};
    const LogRegModel model = fit_logreg(table, labels, lr_defaults());
    CHECK(model.weights[0] > 0.0);
    for (std::size_t i = 0; i < table.row_count(); ++i) {
        CHECK(predict_logreg(model, table.row(i)) == labels[i]);
    }
}

TEST_CASE("logistic regression loss is non-increasing on random instances") {
    Rng rng(15);
    for (int round = 0; round < 10; ++round) {
        const FeatureTable table = oracles::random_table(rng, 60, 3);
        std::vector<int> labels = oracles::correlated_labels(rng, table, 2);
        labels[0] = 0;
        labels[1] = 1;
        std::vector<double> trace;
        LogRegParams params = lr_defaults();
        params.max_iters = 200;
        fit_logreg(table, labels, params, &trace);
        REQUIRE(trace.size() >= 2);
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1]);
    }
}

TEST_CASE("logistic regression and SVM refuse the multiclass schema") {
    const FeatureTable table({"x"}, {0, 1, 2, 3});
    LabelVector labels{LabelSchema::multiclass(), {0, 1, 2, 3}};
    CHECK_THROWS_AS(train_model(ModelKind::LogisticRegression, table, labels,
                                default_hyperparams(ModelKind::LogisticRegression,
                                                    TaskKind::Binary),
                                1),
                    ModelError);
    CHECK_THROWS_AS(train_model(ModelKind::LinearSvm, table, labels,
                                default_hyperparams(ModelKind::LinearSvm, TaskKind::Binary), 1),
                    ModelError);
}

TEST_CASE("SVM separates the two-point toy set and lowers the objective") {
    const FeatureTable table({"x"}, {-2, 2});
    const std::vector<int> labels{0, 1};
    const SvmParams params = svm_defaults();
    const double initial = svm_objective(table, labels, std::vector<double>{0.0}, 0.0, params.c);
    const SvmModel model = fit_linear_svm(table, labels, params);
    CHECK(model.weights[0] > 0.0);
    CHECK(predict_svm(model, std::vector<double>{-2.0}) == 0);
    CHECK(predict_svm(model, std::vector<double>{2.0}) == 1);
    CHECK(svm_objective(table, labels, model.weights, model.bias, params.c) < initial);
}

TEST_CASE("SVM requires both classes") {
    const FeatureTable table({"x"}, {1, 2, 3});
    const std::vector<int> labels{1, 1, 1};
    CHECK_THROWS_AS(fit_linear_svm(table, labels, svm_defaults()), DataError);
}

TEST_CASE("SVM decision boundary itself maps to class 1") {
    SvmModel model;
    model.weights = {0.0};
    model.bias = 0.0;
    CHECK(predict_svm(model, std::vector<double>{123.0}) == 1);
}

TEST_CASE("SVM separates shifted blobs") {
    Rng rng(61);
    std::vector<double> values;
    std::vector<int> labels;
    for (int i = 0; i < 200; ++i) {
        const int y = i % 2;
        labels.push_back(y);
        values.push_back(static_cast<double>(y) * 4.0 + rng.normal());
        values.push_back(static_cast<double>(y) * 4.0 + rng.normal());
    }
    const FeatureTable table({"a", "b"}, std::move(values));
    const SvmModel model = fit_linear_svm(table, labels, svm_defaults());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < table.row_count(); ++i) {
        if (predict_svm(model, table.row(i)) == labels[i]) ++correct;
    }
    CHECK(static_cast<double>(correct) / 200.0 >= 0.95);
}
