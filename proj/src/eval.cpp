#include "entropykit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "entropykit/rng.hpp"

namespace entropykit::eval {

namespace {

void check_xy(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
    if (x.empty()) throw std::invalid_argument("empty training set");
    if (x.size() != y.size()) throw std::invalid_argument("labels not aligned with rows");
    const std::size_t dim = x.front().size();
    for (const auto& row : x)
        if (row.size() != dim) throw std::invalid_argument("ragged feature rows");
    for (int v : y)
        if (v != 0 && v != 1) throw std::invalid_argument("labels must be 0 or 1");
}

std::pair<std::size_t, std::size_t> class_counts(const std::vector<int>& y) {
    std::size_t n0 = 0, n1 = 0;
    for (int v : y) (v == 0 ? n0 : n1)++;
    return {n0, n1};
}

} // namespace

LogregModel train_logreg(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                         const LogregConfig& config) {
    check_xy(x, y);
    auto [n0, n1] = class_counts(y);
    if (n0 == 0 || n1 == 0) throw std::invalid_argument("single-class training labels");
    if (config.learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");

    const std::size_t n = x.size();
    const std::size_t dim = x.front().size();
    // balanced: weight n / (2 * n_class), so weights sum to n
    const double w0 = config.balanced ? static_cast<double>(n) / (2.0 * static_cast<double>(n0)) : 1.0;
    const double w1 = config.balanced ? static_cast<double>(n) / (2.0 * static_cast<double>(n1)) : 1.0;
    const double weight_total = w0 * static_cast<double>(n0) + w1 * static_cast<double>(n1);

    LogregModel model;
    model.weights.assign(dim, 0.0);
    std::vector<double> grad(dim);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double z = model.bias;
            for (std::size_t j = 0; j < dim; ++j) z += model.weights[j] * x[i][j];
            double err = (nn::sigmoid(z) - static_cast<double>(y[i])) * (y[i] == 0 ? w0 : w1);
            for (std::size_t j = 0; j < dim; ++j) grad[j] += err * x[i][j];
            grad_b += err;
        }
        for (std::size_t j = 0; j < dim; ++j) {
            double g = grad[j] / weight_total + config.l2 * model.weights[j];
            model.weights[j] -= config.learning_rate * g;
        }
        if (config.fit_intercept)
            model.bias -= config.learning_rate * grad_b / weight_total;
    }
    return model;
}

std::vector<double> predict_logreg(const LogregModel& model,
                                   const std::vector<std::vector<double>>& x) {
    std::vector<double> scores;
    scores.reserve(x.size());
    for (const auto& row : x) {
        if (row.size() != model.weights.size())
            throw std::invalid_argument("feature dimension mismatch");
        double z = model.bias;
        for (std::size_t j = 0; j < row.size(); ++j) z += model.weights[j] * row[j];
        scores.push_back(nn::sigmoid(z));
    }
    return scores;
}

MlpClassifier::MlpClassifier(std::size_t input_dim, const MlpConfig& config)
    : net_(input_dim, config.hidden), config_(config) {
    SplitMix64 rng(config.seed);
    net_.init(rng);
}

void MlpClassifier::train(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
    check_xy(x, y);
    if (x.front().size() != net_.input_dim())
        throw std::invalid_argument("feature dimension mismatch");
    if (config_.learning_rate <= 0.0 || config_.batch_size == 0)
        throw std::invalid_argument("bad training configuration");

    const std::size_t n = x.size();
    const std::size_t steps = (n + config_.batch_size - 1) / config_.batch_size;
    SplitMix64 batch_rng(config_.seed ^ 0xA5A5A5A5ull);
    nn::Mlp::Trace trace;

    for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (std::size_t step = 0; step < steps; ++step) {
            net_.zero_grad();
            for (std::size_t b = 0; b < config_.batch_size; ++b) {
                std::size_t i = static_cast<std::size_t>(batch_rng.below(n));
                double z = net_.forward_traced(x[i].data(), trace);
                double p = nn::sigmoid(z);
                double pc = std::clamp(p, 1e-12, 1.0 - 1e-12);
                epoch_loss += y[i] == 1 ? -std::log(pc) : -std::log(1.0 - pc);
                net_.backward(x[i].data(), trace, p - static_cast<double>(y[i]), nullptr);
            }
            net_.apply_gradient(-config_.learning_rate / static_cast<double>(config_.batch_size));
        }
        if (!std::isfinite(epoch_loss))
            throw std::runtime_error("training diverged at epoch " + std::to_string(epoch + 1));
    }
}

double MlpClassifier::predict_one(const std::vector<double>& features) const {
    if (features.size() != net_.input_dim())
        throw std::invalid_argument("feature dimension mismatch");
    return nn::sigmoid(net_.forward(features.data()));
}

std::vector<double> MlpClassifier::predict(const std::vector<std::vector<double>>& x) const {
    std::vector<double> scores;
    scores.reserve(x.size());
    for (const auto& row : x) scores.push_back(predict_one(row));
    return scores;
}

double MlpClassifier::gradient_check(const std::vector<std::vector<double>>& x,
                                     const std::vector<int>& y) {
    check_xy(x, y);
    auto loss = [&]() {
        double total = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double p = nn::sigmoid(net_.forward(x[i].data()));
            double pc = std::clamp(p, 1e-12, 1.0 - 1e-12);
            total += y[i] == 1 ? -std::log(pc) : -std::log(1.0 - pc);
        }
        return total / static_cast<double>(x.size());
    };

    net_.zero_grad();
    nn::Mlp::Trace trace;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double z = net_.forward_traced(x[i].data(), trace);
        double p = nn::sigmoid(z);
        net_.backward(x[i].data(), trace,
                      (p - static_cast<double>(y[i])) / static_cast<double>(x.size()), nullptr);
    }

    const double step = 1e-5;
    double max_rel = 0.0;
    for (std::size_t i = 0; i < net_.param_count(); ++i) {
        double saved = net_.param(i);
        net_.param(i) = saved + step;
        double plus = loss();
        net_.param(i) = saved - step;
        double minus = loss();
        net_.param(i) = saved;
        double numeric = (plus - minus) / (2.0 * step);
        double analytic = net_.grad(i);
        double rel = std::abs(analytic - numeric) /
                     std::max(1.0, std::abs(analytic) + std::abs(numeric));
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

Metrics compute_metrics(const std::vector<double>& scores, const std::vector<int>& labels,
                        double threshold) {
    if (scores.size() != labels.size() || scores.empty())
        throw std::invalid_argument("scores not aligned with labels");
    for (double s : scores)
        if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("scores must lie in [0, 1]");

    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool pred = scores[i] >= threshold;
        if (labels[i] == 1) (pred ? tp : fn)++;
        else (pred ? fp : tn)++;
    }

    Metrics m;
    const std::size_t n1 = tp + fn, n0 = fp + tn;
    m.recall = n1 > 0 ? static_cast<double>(tp) / static_cast<double>(n1) : 0.0;
    double precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.f1 = (precision + m.recall) > 0.0 ? 2.0 * precision * m.recall / (precision + m.recall) : 0.0;
    m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(scores.size());

    if (n0 == 0 || n1 == 0) {
        m.auc_defined = false;
        m.auc = 0.0;
        return m;
    }

    // rank statistic with average ranks for ties
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> rank(scores.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) rank[order[t]] = avg;
        i = j + 1;
    }
    double rank_sum_pos = 0.0;
    for (std::size_t t = 0; t < labels.size(); ++t)
        if (labels[t] == 1) rank_sum_pos += rank[t];
    m.auc = (rank_sum_pos - static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0) /
            (static_cast<double>(n1) * static_cast<double>(n0));
    return m;
}

void EvalProtocol::validate() const {
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
        throw std::invalid_argument("test fraction must lie in (0, 1)");
    if (repeats < 1) throw std::invalid_argument("need at least one repeat");
}

namespace {

Stat stat_of(const std::vector<double>& values) {
    Stat s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size()));
    return s;
}

} // namespace

EvalReport repeated_holdout(const std::vector<std::vector<double>>& x,
                            const std::vector<int>& y, const ModelSpec& spec,
                            const EvalProtocol& protocol) {
    check_xy(x, y);
    protocol.validate();
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("need at least 2 samples to split");
    std::size_t n_test = static_cast<std::size_t>(
        std::floor(protocol.test_fraction * static_cast<double>(n)));
    n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

    EvalReport report;
    for (std::size_t rep = 0; rep < protocol.repeats; ++rep) {
        SplitMix64 rng(protocol.seed + rep);

        std::vector<std::size_t> idx(n);
        std::vector<std::size_t> train_idx, test_idx;
        bool split_ok = false;
        for (int attempt = 0; attempt < 10 && !split_ok; ++attempt) {
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            for (std::size_t i = n; i > 1; --i) { // Fisher-Yates
                std::size_t j = static_cast<std::size_t>(rng.below(i));
                std::swap(idx[i - 1], idx[j]);
            }
            test_idx.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
            train_idx.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
            auto both = [&](const std::vector<std::size_t>& part) {
                bool h0 = false, h1 = false;
                for (std::size_t i : part) (y[i] == 0 ? h0 : h1) = true;
                return h0 && h1;
            };
            split_ok = both(train_idx) && both(test_idx);
        }
        if (!split_ok)
            throw std::runtime_error("could not draw a two-class split in 10 attempts");

        auto take = [&](const std::vector<std::size_t>& part) {
            std::pair<std::vector<std::vector<double>>, std::vector<int>> out;
            for (std::size_t i : part) {
                out.first.push_back(x[i]);
                out.second.push_back(y[i]);
            }
            return out;
        };
        auto [x_train, y_train] = take(train_idx);
        auto [x_test, y_test] = take(test_idx);

        if (protocol.standardize) {
            const std::size_t dim = x_train.front().size();
            std::vector<double> mean(dim, 0.0), sd(dim, 0.0);
            for (const auto& row : x_train)
                for (std::size_t j = 0; j < dim; ++j) mean[j] += row[j];
            for (double& v : mean) v /= static_cast<double>(x_train.size());
            for (const auto& row : x_train)
                for (std::size_t j = 0; j < dim; ++j)
                    sd[j] += (row[j] - mean[j]) * (row[j] - mean[j]);
            for (double& v : sd) {
                v = std::sqrt(v / static_cast<double>(x_train.size()));
                if (v == 0.0) v = 1.0;
            }
            auto apply = [&](std::vector<std::vector<double>>& rows) {
                for (auto& row : rows)
                    for (std::size_t j = 0; j < dim; ++j) row[j] = (row[j] - mean[j]) / sd[j];
            };
            apply(x_train);
            apply(x_test);
        }

        std::vector<double> scores;
        if (spec.kind == ModelSpec::Kind::logreg) {
            LogregModel model = train_logreg(x_train, y_train, spec.logreg);
            scores = predict_logreg(model, x_test);
        } else {
            MlpConfig cfg = spec.mlp;
            cfg.seed = spec.mlp.seed + 7919 * (rep + 1); // per-repeat init stream
            MlpClassifier model(x_train.front().size(), cfg);
            model.train(x_train, y_train);
            scores = model.predict(x_test);
        }
        report.per_repeat.push_back(compute_metrics(scores, y_test));
    }

    auto collect = [&](auto field) {
        std::vector<double> vals;
        for (const Metrics& m : report.per_repeat) vals.push_back(m.*field);
        return stat_of(vals);
    };
    report.recall = collect(&Metrics::recall);
    report.f1 = collect(&Metrics::f1);
    report.accuracy = collect(&Metrics::accuracy);
    report.auc = collect(&Metrics::auc);
    return report;
}

} // namespace entropykit::eval
