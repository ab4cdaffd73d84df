#ifndef ENTROPYKIT_EVAL_HPP
#define ENTROPYKIT_EVAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "entropykit/nn.hpp"

namespace entropykit::eval {

struct LogregConfig {
    double learning_rate = 0.1;
    std::size_t epochs = 500;
    double l2 = 1e-4;
    bool balanced = true;       // class weights inversely proportional to frequency
    bool fit_intercept = true;
};

struct LogregModel {
    std::vector<double> weights;
    double bias = 0.0;
};

// Full-batch gradient descent on weighted cross-entropy with an L2
// penalty on the weights (never the bias). Deterministic: starts at 0.
LogregModel train_logreg(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                         const LogregConfig& config);

std::vector<double> predict_logreg(const LogregModel& model,
                                   const std::vector<std::vector<double>>& x);

struct MlpConfig {
    std::vector<std::size_t> hidden{64, 64, 64, 64};
    double learning_rate = 0.3;
    std::size_t epochs = 2000;
    std::size_t batch_size = 256;
    std::uint64_t seed = 0;
};

// Feed-forward classifier (tanh hidden layers, sigmoid head) trained by
// SGD on binary cross-entropy; built on the same layer primitives as
// the NEEP network.
class MlpClassifier {
public:
    MlpClassifier() = default;
    MlpClassifier(std::size_t input_dim, const MlpConfig& config);

    void train(const std::vector<std::vector<double>>& x, const std::vector<int>& y);
    double predict_one(const std::vector<double>& features) const;
    std::vector<double> predict(const std::vector<std::vector<double>>& x) const;

    // Finite-difference check of the mean-BCE gradient on the given
    // batch; returns the max relative error.
    double gradient_check(const std::vector<std::vector<double>>& x, const std::vector<int>& y);

    nn::Mlp& net() { return net_; }

private:
    nn::Mlp net_;
    MlpConfig config_;
};

struct Metrics {
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    double auc = 0.0;
    bool auc_defined = true;
};

// Scores must lie in [0, 1]; a score >= threshold predicts class 1.
// AUC is the tie-aware rank statistic; it is flagged undefined when a
// class is absent.
Metrics compute_metrics(const std::vector<double>& scores, const std::vector<int>& labels,
                        double threshold = 0.5);

struct EvalProtocol {
    double test_fraction = 0.3;
    std::size_t repeats = 30;
    std::uint64_t seed = 0;
    bool standardize = true;

    void validate() const;
};

struct ModelSpec {
    enum class Kind { logreg, mlp };
    Kind kind = Kind::logreg;
    LogregConfig logreg;
    MlpConfig mlp;
};

// mean and population standard deviation over repeats
struct Stat {
    double mean = 0.0;
    double stddev = 0.0;
};

struct EvalReport {
    Stat recall, f1, accuracy, auc;
    std::vector<Metrics> per_repeat;
};

// Repeated random holdout: one seeded stream per repeat (seed + index),
// up to 10 redraws when a split misses a class, standardization fitted
// on the train split only.
EvalReport repeated_holdout(const std::vector<std::vector<double>>& x,
                            const std::vector<int>& y, const ModelSpec& spec,
                            const EvalProtocol& protocol);

} // namespace entropykit::eval

#endif
