#include "entropykit/neep.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace entropykit::neep {

namespace {
constexpr char kMagic[8] = {'E', 'K', 'N', 'E', 'E', 'P', '0', '1'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    return v;
}

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), 8);
}

double read_f64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}
} // namespace

void TrainConfig::validate() const {
    if (learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");
    if (epochs == 0 || batch_size == 0 || embed_dim == 0 || hidden_width == 0)
        throw std::invalid_argument("epochs, batch size and layer sizes must be positive");
    if (holdout_fraction < 0.0 || holdout_fraction >= 1.0)
        throw std::invalid_argument("holdout fraction must lie in [0, 1)");
}

NeepModel::NeepModel(std::size_t n_states, std::size_t embed_dim, std::size_t hidden_width,
                     std::uint64_t seed)
    : n_states_(n_states), embed_dim_(embed_dim),
      embedding_(n_states * embed_dim, 0.0), embed_grad_(n_states * embed_dim, 0.0),
      net_(2 * embed_dim, {hidden_width}) {
    if (n_states == 0) throw std::invalid_argument("need at least one state");
    SplitMix64 rng(seed);
    for (double& v : embedding_) v = 0.1 * rng.gaussian();
    net_.init(rng);
}

void NeepModel::check_state(int s) const {
    if (s < 0 || static_cast<std::size_t>(s) >= n_states_)
        throw std::invalid_argument("state index out of range");
}

double NeepModel::h(int s_prev, int s_next) const {
    check_state(s_prev);
    check_state(s_next);
    std::vector<double> input(2 * embed_dim_);
    const double* ea = &embedding_[static_cast<std::size_t>(s_prev) * embed_dim_];
    const double* eb = &embedding_[static_cast<std::size_t>(s_next) * embed_dim_];
    std::copy(ea, ea + embed_dim_, input.begin());
    std::copy(eb, eb + embed_dim_, input.begin() + static_cast<std::ptrdiff_t>(embed_dim_));
    return net_.forward(input.data());
}

double NeepModel::delta_s(int s_prev, int s_next) const {
    return h(s_prev, s_next) - h(s_next, s_prev);
}

double NeepModel::h_traced(int s_prev, int s_next, nn::Mlp::Trace& trace,
                           std::vector<double>& input) const {
    input.resize(2 * embed_dim_);
    const double* ea = &embedding_[static_cast<std::size_t>(s_prev) * embed_dim_];
    const double* eb = &embedding_[static_cast<std::size_t>(s_next) * embed_dim_];
    std::copy(ea, ea + embed_dim_, input.begin());
    std::copy(eb, eb + embed_dim_, input.begin() + static_cast<std::ptrdiff_t>(embed_dim_));
    return net_.forward_traced(input.data(), trace);
}

void NeepModel::accumulate_delta_s_gradient(int s_prev, int s_next, double scale) {
    check_state(s_prev);
    check_state(s_next);
    nn::Mlp::Trace trace;
    std::vector<double> input, dx(2 * embed_dim_);

    // +scale through h(prev, next)
    h_traced(s_prev, s_next, trace, input);
    net_.backward(input.data(), trace, scale, dx.data());
    for (std::size_t i = 0; i < embed_dim_; ++i) {
        embed_grad_[static_cast<std::size_t>(s_prev) * embed_dim_ + i] += dx[i];
        embed_grad_[static_cast<std::size_t>(s_next) * embed_dim_ + i] += dx[embed_dim_ + i];
    }

    // -scale through h(next, prev)
    h_traced(s_next, s_prev, trace, input);
    net_.backward(input.data(), trace, -scale, dx.data());
    for (std::size_t i = 0; i < embed_dim_; ++i) {
        embed_grad_[static_cast<std::size_t>(s_next) * embed_dim_ + i] += dx[i];
        embed_grad_[static_cast<std::size_t>(s_prev) * embed_dim_ + i] += dx[embed_dim_ + i];
    }
}

void NeepModel::zero_grad() {
    std::fill(embed_grad_.begin(), embed_grad_.end(), 0.0);
    net_.zero_grad();
}

void NeepModel::apply_gradient(double factor) {
    for (std::size_t i = 0; i < embedding_.size(); ++i)
        embedding_[i] += factor * embed_grad_[i];
    net_.apply_gradient(factor);
}

std::size_t NeepModel::param_count() const {
    return embedding_.size() + net_.param_count();
}

double& NeepModel::param(std::size_t idx) {
    if (idx < embedding_.size()) return embedding_[idx];
    return net_.param(idx - embedding_.size());
}

double NeepModel::grad(std::size_t idx) const {
    if (idx < embed_grad_.size()) return embed_grad_[idx];
    return net_.grad(idx - embed_grad_.size());
}

void NeepModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create model file: " + path);
    out.write(kMagic, 8);
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(n_states_));
    write_u32(out, static_cast<std::uint32_t>(embed_dim_));
    write_u32(out, static_cast<std::uint32_t>(net_.layers().size()));
    for (const nn::Linear& l : net_.layers()) {
        write_u32(out, static_cast<std::uint32_t>(l.in_dim));
        write_u32(out, static_cast<std::uint32_t>(l.out_dim));
    }
    for (double v : embedding_) write_f64(out, v);
    for (const nn::Linear& l : net_.layers()) {
        for (double v : l.w) write_f64(out, v);
        for (double v : l.b) write_f64(out, v);
    }
    if (!out) throw std::runtime_error("failed writing model file: " + path);
}

NeepModel load_from_stream(std::istream& in, const std::string& path) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error(path + ": not a NEEP model file");
    if (read_u32(in) != kVersion) throw std::runtime_error(path + ": unsupported model version");
    std::uint32_t n_states = read_u32(in);
    std::uint32_t embed_dim = read_u32(in);
    std::uint32_t n_layers = read_u32(in);
    if (n_states == 0 || embed_dim == 0 || n_layers != 2)
        throw std::runtime_error(path + ": malformed model header");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> dims;
    for (std::uint32_t l = 0; l < n_layers; ++l) {
        std::uint32_t in_dim = read_u32(in);
        std::uint32_t out_dim = read_u32(in);
        dims.emplace_back(in_dim, out_dim);
    }
    if (dims.front().first != 2 * embed_dim || dims.back().second != 1 ||
        dims.front().second != dims.back().first)
        throw std::runtime_error(path + ": malformed layer dimensions");

    NeepModel model(n_states, embed_dim, dims.front().second, 0);
    for (double& v : model.embedding_mutable()) v = read_f64(in);
    for (nn::Linear& l : model.net().layers()) {
        for (double& v : l.w) v = read_f64(in);
        for (double& v : l.b) v = read_f64(in);
    }
    if (!in) throw std::runtime_error(path + ": truncated model file");
    return model;
}

NeepModel NeepModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return load_from_stream(in, path);
}

Objective neep_objective(const NeepModel& model, const std::vector<int>& states) {
    if (states.size() < 2) throw std::invalid_argument("trajectory too short (need length >= 2)");
    Objective obj;
    obj.transitions = states.size() - 1;
    for (std::size_t t = 0; t + 1 < states.size(); ++t) {
        double ds = model.delta_s(states[t], states[t + 1]);
        obj.total += ds - std::exp(-ds);
    }
    obj.per_transition = obj.total / static_cast<double>(obj.transitions);
    return obj;
}

TrainResult train_neep(const std::vector<int>& states, std::size_t n_states,
                       const TrainConfig& config) {
    config.validate();
    if (states.size() < 2) throw std::invalid_argument("trajectory too short (need length >= 2)");

    TrainResult result;
    std::size_t train_len = states.size();
    if (config.holdout_fraction > 0.0) {
        train_len = states.size() -
                    static_cast<std::size_t>(config.holdout_fraction *
                                             static_cast<double>(states.size()));
        if (train_len < 2) throw std::invalid_argument("holdout leaves too little to train on");
        result.holdout.assign(states.begin() + static_cast<std::ptrdiff_t>(train_len),
                              states.end());
    }
    result.train_length = train_len;
    std::vector<int> train(states.begin(), states.begin() + static_cast<std::ptrdiff_t>(train_len));

    result.model = NeepModel(n_states, config.embed_dim, config.hidden_width, config.seed);
    NeepModel& model = result.model;

    const std::size_t n_pairs = train.size() - 1;
    const std::size_t steps = (n_pairs + config.batch_size - 1) / config.batch_size;
    SplitMix64 batch_rng(config.seed ^ 0x5DEECE66Dull);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t step = 0; step < steps; ++step) {
            model.zero_grad();
            for (std::size_t b = 0; b < config.batch_size; ++b) {
                std::size_t t = static_cast<std::size_t>(batch_rng.below(n_pairs));
                double ds = model.delta_s(train[t], train[t + 1]);
                // d/d(ds) of [ds - exp(-ds)]
                double upstream = 1.0 + std::exp(-ds);
                model.accumulate_delta_s_gradient(train[t], train[t + 1], upstream);
            }
            // gradient ascent on the batch mean
            model.apply_gradient(config.learning_rate / static_cast<double>(config.batch_size));
        }
        Objective obj = neep_objective(model, train);
        if (!std::isfinite(obj.total))
            throw std::runtime_error("training diverged at epoch " + std::to_string(epoch + 1));
        result.curve.push_back(obj);
    }
    return result;
}

double estimate_ep(const NeepModel& model, const std::vector<int>& states) {
    if (states.size() < 2) throw std::invalid_argument("trajectory too short (need length >= 2)");
    double sum = 0.0;
    for (std::size_t t = 0; t + 1 < states.size(); ++t)
        sum += model.delta_s(states[t], states[t + 1]);
    return sum / static_cast<double>(states.size() - 1);
}

double gradient_check(NeepModel& model, const std::vector<int>& states) {
    model.zero_grad();
    for (std::size_t t = 0; t + 1 < states.size(); ++t) {
        double ds = model.delta_s(states[t], states[t + 1]);
        model.accumulate_delta_s_gradient(states[t], states[t + 1], 1.0 + std::exp(-ds));
    }

    const double step = 1e-5;
    double max_rel = 0.0;
    for (std::size_t i = 0; i < model.param_count(); ++i) {
        double saved = model.param(i);
        model.param(i) = saved + step;
        double plus = neep_objective(model, states).total;
        model.param(i) = saved - step;
        double minus = neep_objective(model, states).total;
        model.param(i) = saved;
        double numeric = (plus - minus) / (2.0 * step);
        double analytic = model.grad(i);
        double rel = std::abs(analytic - numeric) /
                     std::max(1.0, std::abs(analytic) + std::abs(numeric));
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

} // namespace entropykit::neep
