#include "entropykit/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace entropykit::nn {

Linear::Linear(std::size_t in, std::size_t out)
    : in_dim(in), out_dim(out),
      w(in * out, 0.0), b(out, 0.0), gw(in * out, 0.0), gb(out, 0.0) {}

void Linear::init_xavier(SplitMix64& rng) {
    double a = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
    for (double& v : w) v = (2.0 * rng.uniform() - 1.0) * a;
    for (double& v : b) v = 0.0;
}

void Linear::forward(const double* x, double* y) const {
    for (std::size_t o = 0; o < out_dim; ++o) {
        double acc = b[o];
        const double* row = &w[o * in_dim];
        for (std::size_t i = 0; i < in_dim; ++i) acc += row[i] * x[i];
        y[o] = acc;
    }
}

void Linear::backward(const double* x, const double* dy, double* dx) {
    if (dx)
        for (std::size_t i = 0; i < in_dim; ++i) dx[i] = 0.0;
    for (std::size_t o = 0; o < out_dim; ++o) {
        double g = dy[o];
        gb[o] += g;
        double* grow = &gw[o * in_dim];
        const double* row = &w[o * in_dim];
        for (std::size_t i = 0; i < in_dim; ++i) {
            grow[i] += g * x[i];
            if (dx) dx[i] += g * row[i];
        }
    }
}

Mlp::Mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden_widths)
    : input_dim_(input_dim) {
    std::size_t in = input_dim;
    for (std::size_t h : hidden_widths) {
        if (h == 0) throw std::invalid_argument("hidden width must be positive");
        layers_.emplace_back(in, h);
        in = h;
    }
    layers_.emplace_back(in, 1);
}

void Mlp::init(SplitMix64& rng) {
    for (Linear& l : layers_) l.init_xavier(rng);
}

double Mlp::forward(const double* x) const {
    std::vector<double> cur(x, x + input_dim_);
    std::vector<double> next;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        next.assign(layers_[l].out_dim, 0.0);
        layers_[l].forward(cur.data(), next.data());
        if (l + 1 < layers_.size())
            for (double& v : next) v = std::tanh(v);
        cur.swap(next);
    }
    return cur[0];
}

double Mlp::forward_traced(const double* x, Trace& trace) const {
    trace.acts.resize(layers_.size());
    const double* cur = x;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        trace.acts[l].assign(layers_[l].out_dim, 0.0);
        layers_[l].forward(cur, trace.acts[l].data());
        if (l + 1 < layers_.size())
            for (double& v : trace.acts[l]) v = std::tanh(v);
        cur = trace.acts[l].data();
    }
    return trace.acts.back()[0];
}

void Mlp::backward(const double* x, const Trace& trace, double dout, double* dx) {
    std::vector<double> grad_out{dout};
    std::vector<double> grad_in;
    for (std::size_t l = layers_.size(); l-- > 0;) {
        const double* input = (l == 0) ? x : trace.acts[l - 1].data();
        grad_in.assign(layers_[l].in_dim, 0.0);
        layers_[l].backward(input, grad_out.data(), l == 0 && !dx ? nullptr : grad_in.data());
        if (l == 0) {
            if (dx)
                for (std::size_t i = 0; i < input_dim_; ++i) dx[i] = grad_in[i];
            return;
        }
        // through tanh: d z = d a * (1 - a^2)
        const std::vector<double>& a = trace.acts[l - 1];
        for (std::size_t i = 0; i < grad_in.size(); ++i) grad_in[i] *= 1.0 - a[i] * a[i];
        grad_out.swap(grad_in);
    }
}

void Mlp::zero_grad() {
    for (Linear& l : layers_) {
        std::fill(l.gw.begin(), l.gw.end(), 0.0);
        std::fill(l.gb.begin(), l.gb.end(), 0.0);
    }
}

void Mlp::apply_gradient(double factor) {
    for (Linear& l : layers_) {
        for (std::size_t i = 0; i < l.w.size(); ++i) l.w[i] += factor * l.gw[i];
        for (std::size_t i = 0; i < l.b.size(); ++i) l.b[i] += factor * l.gb[i];
    }
}

std::size_t Mlp::param_count() const {
    std::size_t n = 0;
    for (const Linear& l : layers_) n += l.w.size() + l.b.size();
    return n;
}

double& Mlp::param(std::size_t idx) {
    for (Linear& l : layers_) {
        if (idx < l.w.size()) return l.w[idx];
        idx -= l.w.size();
        if (idx < l.b.size()) return l.b[idx];
        idx -= l.b.size();
    }
    throw std::out_of_range("parameter index");
}

double Mlp::grad(std::size_t idx) const {
    for (const Linear& l : layers_) {
        if (idx < l.gw.size()) return l.gw[idx];
        idx -= l.gw.size();
        if (idx < l.gb.size()) return l.gb[idx];
        idx -= l.gb.size();
    }
    throw std::out_of_range("parameter index");
}

double sigmoid(double z) {
    if (z >= 0.0) {
        double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace entropykit::nn
