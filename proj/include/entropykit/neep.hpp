#ifndef ENTROPYKIT_NEEP_HPP
#define ENTROPYKIT_NEEP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "entropykit/nn.hpp"

namespace entropykit::neep {

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t epochs = 20;
    std::size_t batch_size = 128;
    std::uint64_t seed = 0;
    std::size_t embed_dim = 16;
    std::size_t hidden_width = 64;
    // fraction of the trajectory tail reserved for honest estimation;
    // 0 trains on everything (the default estimation convention)
    double holdout_fraction = 0.0;

    void validate() const;
};

// Embedding table plus a feed-forward net mapping the concatenated
// (previous, current) state embeddings to a scalar h.
class NeepModel {
public:
    NeepModel() = default;
    NeepModel(std::size_t n_states, std::size_t embed_dim, std::size_t hidden_width,
              std::uint64_t seed);

    std::size_t n_states() const { return n_states_; }
    std::size_t embed_dim() const { return embed_dim_; }

    double h(int s_prev, int s_next) const;
    double delta_s(int s_prev, int s_next) const;

    // Accumulates d(scale * delta_s(a, b))/d(theta) into the gradient
    // buffers. Used by the trainer and the finite-difference check.
    void accumulate_delta_s_gradient(int s_prev, int s_next, double scale);

    void zero_grad();
    void apply_gradient(double factor);

    std::size_t param_count() const;
    double& param(std::size_t idx);
    double grad(std::size_t idx) const;

    void save(const std::string& path) const;
    static NeepModel load(const std::string& path);

    const std::vector<double>& embedding() const { return embedding_; }
    std::vector<double>& embedding_mutable() { return embedding_; }
    nn::Mlp& net() { return net_; }
    const nn::Mlp& net() const { return net_; }

private:
    void check_state(int s) const;
    double h_traced(int s_prev, int s_next, nn::Mlp::Trace& trace,
                    std::vector<double>& input) const;

    std::size_t n_states_ = 0;
    std::size_t embed_dim_ = 0;
    std::vector<double> embedding_;  // n_states x embed_dim, row-major
    std::vector<double> embed_grad_;
    nn::Mlp net_;                    // 2*embed_dim -> hidden -> 1
};

// J = sum over consecutive pairs of [delta_s - exp(-delta_s)].
struct Objective {
    double total = 0.0;
    double per_transition = 0.0;
    std::size_t transitions = 0;
};

Objective neep_objective(const NeepModel& model, const std::vector<int>& states);

struct TrainResult {
    NeepModel model;
    std::vector<Objective> curve;   // one entry per epoch
    std::size_t train_length = 0;   // states used for training
    std::vector<int> holdout;       // reserved tail, empty without holdout
};

// Stochastic gradient ascent on the objective over uniformly resampled
// transition mini-batches. Deterministic under the config seed. Throws
// (naming the epoch) if the objective stops being finite.
TrainResult train_neep(const std::vector<int>& states, std::size_t n_states,
                       const TrainConfig& config);

// Mean delta_s per consecutive pair: the entropy-production estimate.
double estimate_ep(const NeepModel& model, const std::vector<int>& states);

// Max relative error between the analytic objective gradient and
// central finite differences (step 1e-5); the denominator is
// max(1, |analytic| + |numeric|).
double gradient_check(NeepModel& model, const std::vector<int>& states);

} // namespace entropykit::neep

#endif
