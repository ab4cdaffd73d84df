#ifndef ENTROPYKIT_NN_HPP
#define ENTROPYKIT_NN_HPP

#include <cstdint>
#include <cstddef>
#include <vector>

#include "entropykit/rng.hpp"

namespace entropykit::nn {

// Fully connected layer with gradient accumulators.
struct Linear {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<double> w;  // out x in, row-major
    std::vector<double> b;  // out
    std::vector<double> gw;
    std::vector<double> gb;

    Linear() = default;
    Linear(std::size_t in, std::size_t out);

    void init_xavier(SplitMix64& rng);
    void forward(const double* x, double* y) const;
    // dy is dL/dy; accumulates into gw/gb and writes dL/dx (dx may be null).
    void backward(const double* x, const double* dy, double* dx);
};

// Feed-forward net: tanh on every hidden layer, linear scalar head.
// Sigmoid/BCE for classification is applied by the caller on the logit.
class Mlp {
public:
    Mlp() = default;
    Mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden_widths);

    void init(SplitMix64& rng);

    std::size_t input_dim() const { return input_dim_; }
    const std::vector<Linear>& layers() const { return layers_; }
    std::vector<Linear>& layers() { return layers_; }

    double forward(const double* x) const;

    // Forward keeping activations, then backward with upstream scalar
    // gradient; dx (length input_dim) may be null.
    struct Trace {
        std::vector<std::vector<double>> acts; // post-activation per layer
    };

    double forward_traced(const double* x, Trace& trace) const;
    void backward(const double* x, const Trace& trace, double dout, double* dx);

    void zero_grad();
    // p += factor * g for every parameter (ascent: +lr, descent: -lr).
    void apply_gradient(double factor);

    std::size_t param_count() const;
    double& param(std::size_t idx);
    double grad(std::size_t idx) const;

private:
    std::size_t input_dim_ = 0;
    std::vector<Linear> layers_;
};

double sigmoid(double z);

} // namespace entropykit::nn

#endif
