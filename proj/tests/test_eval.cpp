#include <doctest.h>

#include <cmath>

#include "entropykit/eval.hpp"
#include "entropykit/rng.hpp"

using namespace entropykit;
using doctest::Approx;

namespace {

// two gaussian blobs, linearly separable when gap is large
void blobs(std::size_t per_class, double gap, std::uint64_t seed,
           std::vector<std::vector<double>>& x, std::vector<int>& y) {
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < per_class; ++i) {
        x.push_back({rng.gaussian() - gap, rng.gaussian()});
        y.push_back(0);
        x.push_back({rng.gaussian() + gap, rng.gaussian()});
        y.push_back(1);
    }
}

} // namespace

TEST_CASE("logreg fits a linearly separable toy set") {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    blobs(60, 3.0, 2, x, y);
    eval::LogregConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.epochs = 800;
    auto model = eval::train_logreg(x, y, cfg);
    auto scores = eval::predict_logreg(model, x);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if ((scores[i] >= 0.5) == (y[i] == 1)) ++correct;
    CHECK(correct == y.size());

    CHECK_THROWS(eval::train_logreg(x, std::vector<int>(y.size(), 1), cfg));
}

TEST_CASE("logreg on label-independent features behaves like chance") {
    SplitMix64 rng(5);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (std::size_t i = 0; i < 600; ++i) {
        x.push_back({rng.gaussian(), rng.gaussian()});
        y.push_back(static_cast<int>(i % 2));
    }
    eval::ModelSpec spec; // logreg defaults
    eval::EvalProtocol protocol;
    protocol.seed = 7;
    auto report = eval::repeated_holdout(x, y, spec, protocol);
    CHECK(report.accuracy.mean > 0.38);
    CHECK(report.accuracy.mean < 0.62);
}

TEST_CASE("duplicated feature column matches the lambda-matched single fit") {
    // with the intercept off, (x, x) at (lr, l2) follows the same recursion
    // as (x,) at (2 lr, l2 / 2); predictions agree and the twin weights stay equal
    std::vector<std::vector<double>> x_single, x_dup;
    std::vector<int> y;
    SplitMix64 rng(10);
    for (std::size_t i = 0; i < 80; ++i) {
        double v = rng.gaussian() + (i % 2 == 0 ? -0.8 : 0.8);
        x_single.push_back({v});
        x_dup.push_back({v, v});
        y.push_back(static_cast<int>(i % 2));
    }
    eval::LogregConfig dup_cfg;
    dup_cfg.learning_rate = 0.2;
    dup_cfg.epochs = 300;
    dup_cfg.l2 = 1e-3;
    dup_cfg.fit_intercept = false;
    eval::LogregConfig single_cfg = dup_cfg;
    single_cfg.learning_rate = 0.4;
    single_cfg.l2 = 5e-4;

    auto dup = eval::train_logreg(x_dup, y, dup_cfg);
    auto single = eval::train_logreg(x_single, y, single_cfg);
    CHECK(dup.weights[0] == Approx(dup.weights[1]).epsilon(1e-15));
    auto p_dup = eval::predict_logreg(dup, x_dup);
    auto p_single = eval::predict_logreg(single, x_single);
    for (std::size_t i = 0; i < p_dup.size(); ++i)
        CHECK(p_dup[i] == Approx(p_single[i]).epsilon(1e-10));
}

TEST_CASE("balanced weights equal minority duplication at theta = 0") {
    // 3-sample fixture (1 minority, 2 majority); duplicating the minority
    // once gives a 4-sample set whose unit-weight gradient at zero is
    // exactly 4/3 of the balanced-weight gradient
    std::vector<std::vector<double>> x = {{1.0, -2.0}, {0.5, 1.0}, {-1.5, 0.25}};
    std::vector<int> y = {0, 1, 1};
    std::vector<std::vector<double>> x_dup = {{1.0, -2.0}, {1.0, -2.0}, {0.5, 1.0}, {-1.5, 0.25}};
    std::vector<int> y_dup = {0, 0, 1, 1};

    auto grad_at_zero = [](const std::vector<std::vector<double>>& xs, const std::vector<int>& ys,
                           bool balanced) {
        std::size_t n0 = 0, n1 = 0;
        for (int v : ys) (v == 0 ? n0 : n1)++;
        double w0 = balanced ? xs.size() / (2.0 * n0) : 1.0;
        double w1 = balanced ? xs.size() / (2.0 * n1) : 1.0;
        std::vector<double> g(xs.front().size(), 0.0);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double err = (0.5 - ys[i]) * (ys[i] == 0 ? w0 : w1);
            for (std::size_t j = 0; j < g.size(); ++j) g[j] += err * xs[i][j];
        }
        return g;
    };

    auto weighted = grad_at_zero(x, y, true);
    auto duplicated = grad_at_zero(x_dup, y_dup, false);
    for (std::size_t j = 0; j < weighted.size(); ++j)
        CHECK(duplicated[j] == Approx(4.0 / 3.0 * weighted[j]).epsilon(1e-12));
}

TEST_CASE("mlp solves XOR") {
    std::vector<std::vector<double>> x = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    std::vector<int> y = {0, 1, 1, 0};
    eval::MlpConfig cfg;
    cfg.hidden = {8};
    cfg.learning_rate = 0.3;
    cfg.epochs = 5000;
    cfg.batch_size = 4;
    cfg.seed = 1;
    eval::MlpClassifier model(2, cfg);
    model.train(x, y);
    auto scores = model.predict(x);
    for (std::size_t i = 0; i < 4; ++i) CHECK((scores[i] >= 0.5) == (y[i] == 1));
}

TEST_CASE("zero-epoch mlp scores sit near one half on balanced data") {
    SplitMix64 rng(3);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (std::size_t i = 0; i < 200; ++i) {
        x.push_back({rng.gaussian(), rng.gaussian()});
        y.push_back(static_cast<int>(i % 2));
    }
    eval::MlpConfig cfg;
    cfg.hidden = {8};
    cfg.epochs = 0;
    cfg.seed = 9;
    eval::MlpClassifier model(2, cfg);
    model.train(x, y);
    auto m = eval::compute_metrics(model.predict(x), y);
    CHECK(m.accuracy > 0.3);
    CHECK(m.accuracy < 0.7);
}

TEST_CASE("mlp classifier gradient check") {
    SplitMix64 rng(12);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (std::size_t i = 0; i < 12; ++i) {
        x.push_back({rng.gaussian(), rng.gaussian(), rng.gaussian()});
        y.push_back(static_cast<int>(i % 2));
    }
    eval::MlpConfig cfg;
    cfg.hidden = {6, 4};
    cfg.seed = 17;
    eval::MlpClassifier model(3, cfg);
    CHECK(model.gradient_check(x, y) < 1e-4);
}

TEST_CASE("metrics on a hand-built confusion case") {
    // TP=2 FP=1 FN=1 TN=2
    std::vector<double> scores = {0.9, 0.8, 0.2, 0.7, 0.1, 0.3};
    std::vector<int> labels = {1, 1, 1, 0, 0, 0};
    auto m = eval::compute_metrics(scores, labels);
    CHECK(m.recall == Approx(2.0 / 3.0));
    CHECK(m.f1 == Approx(2.0 / 3.0));
    CHECK(m.accuracy == Approx(2.0 / 3.0));
}

TEST_CASE("metrics edge conventions") {
    auto perfect = eval::compute_metrics({0.9, 0.8, 0.1, 0.2}, {1, 1, 0, 0});
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.auc == 1.0);

    auto inverted = eval::compute_metrics({0.1, 0.2, 0.9, 0.8}, {1, 1, 0, 0});
    CHECK(inverted.auc == 0.0);

    auto single = eval::compute_metrics({0.5, 0.6}, {1, 1});
    CHECK_FALSE(single.auc_defined);

    CHECK_THROWS(eval::compute_metrics({1.5}, {1}));
}

TEST_CASE("auc is invariant under strictly monotone transforms") {
    SplitMix64 rng(14);
    std::vector<double> scores;
    std::vector<int> labels;
    for (std::size_t i = 0; i < 200; ++i) {
        scores.push_back(rng.uniform());
        labels.push_back(rng.uniform() < 0.4 ? 1 : 0);
    }
    labels[0] = 1;
    labels[1] = 0;
    double base = eval::compute_metrics(scores, labels).auc;
    std::vector<double> squashed;
    for (double s : scores) squashed.push_back(s * s * 0.5 + 0.25 * s); // increasing on [0,1]
    for (double& s : squashed) s = std::min(1.0, std::max(0.0, s));
    CHECK(eval::compute_metrics(squashed, labels).auc == Approx(base).epsilon(1e-12));
}

TEST_CASE("threshold consistency: scores vs hard labels") {
    SplitMix64 rng(19);
    std::vector<double> scores;
    std::vector<int> labels;
    for (std::size_t i = 0; i < 500; ++i) {
        scores.push_back(rng.uniform());
        labels.push_back(static_cast<int>(rng.below(2)));
    }
    auto from_scores = eval::compute_metrics(scores, labels);
    std::vector<double> hard;
    for (double s : scores) hard.push_back(s >= 0.5 ? 1.0 : 0.0);
    auto from_hard = eval::compute_metrics(hard, labels);
    CHECK(from_scores.accuracy == from_hard.accuracy);
    CHECK(from_scores.recall == from_hard.recall);
    CHECK(from_scores.f1 == from_hard.f1);
}

TEST_CASE("repeated_holdout is deterministic and separates blobs") {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    blobs(100, 2.5, 21, x, y);
    eval::ModelSpec spec;
    spec.logreg.learning_rate = 0.5;
    spec.logreg.epochs = 300;
    eval::EvalProtocol protocol;
    protocol.seed = 5;

    auto r1 = eval::repeated_holdout(x, y, spec, protocol);
    auto r2 = eval::repeated_holdout(x, y, spec, protocol);
    CHECK(r1.accuracy.mean == r2.accuracy.mean);
    CHECK(r1.auc.mean == r2.auc.mean);
    CHECK(r1.accuracy.mean >= 0.95);
    CHECK(r1.per_repeat.size() == 30);

    // constant-output model: std of metrics is 0
    eval::ModelSpec zero_spec;
    zero_spec.logreg.epochs = 0;
    auto rz = eval::repeated_holdout(x, y, zero_spec, protocol);
    CHECK(rz.recall.stddev == 0.0);
    CHECK(rz.recall.mean == 1.0); // sigmoid(0) = 0.5 predicts everything positive
}

TEST_CASE("persistent single-class splits raise after redraws") {
    std::vector<std::vector<double>> x = {{0.0}, {1.0}, {2.0}, {3.0}};
    std::vector<int> y = {1, 1, 1, 0};
    eval::ModelSpec spec;
    eval::EvalProtocol protocol;
    protocol.test_fraction = 0.75; // train split of size 1 can never hold both classes
    protocol.repeats = 3;
    CHECK_THROWS(eval::repeated_holdout(x, y, spec, protocol));
}
