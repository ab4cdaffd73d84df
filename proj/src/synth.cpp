#include "entropykit/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "entropykit/markov.hpp"
#include "entropykit/rng.hpp"

namespace entropykit::synth {

namespace {

void check_stochastic(const Matrix& T) {
    if (T.rows() != T.cols() || T.rows() == 0)
        throw std::invalid_argument("transition matrix must be square and non-empty");
    for (std::size_t i = 0; i < T.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < T.cols(); ++j) {
            if (T(i, j) < 0.0) throw std::invalid_argument("negative transition probability");
            sum += T(i, j);
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("transition matrix row does not sum to 1");
    }
}

std::size_t sample_index(const std::vector<double>& probs, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    return probs.size() - 1;
}

std::size_t sample_row(const Matrix& T, std::size_t row, double u) {
    double acc = 0.0;
    for (std::size_t j = 0; j < T.cols(); ++j) {
        acc += T(row, j);
        if (u < acc) return j;
    }
    return T.cols() - 1;
}

} // namespace

void ChainSpec::validate() const {
    check_stochastic(transition);
    if (length == 0) throw std::invalid_argument("length must be positive");
    if (change_point) {
        if (change_point->first == 0 || change_point->first >= length)
            throw std::invalid_argument("change point must lie strictly inside the trajectory");
        check_stochastic(change_point->second);
        if (change_point->second.rows() != transition.rows())
            throw std::invalid_argument("change-point matrix dimension mismatch");
    }
    if (!alphabet.empty() && alphabet.size() != transition.rows())
        throw std::invalid_argument("alphabet size does not match the transition matrix");
}

core::StateTrajectory gen_chain(const ChainSpec& spec) {
    spec.validate();
    const std::size_t n = spec.transition.rows();

    core::StateTrajectory traj;
    if (spec.alphabet.empty()) {
        for (std::size_t i = 0; i < n; ++i) traj.alphabet.push_back("s" + std::to_string(i));
    } else {
        traj.alphabet = spec.alphabet;
    }

    std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
    markov::StationaryResult st = markov::stationary_distribution(spec.transition, uniform);

    SplitMix64 rng(spec.seed);
    traj.states.reserve(spec.length);
    std::size_t state = sample_index(st.pi, rng.uniform());
    traj.states.push_back(static_cast<int>(state));
    for (std::size_t t = 1; t < spec.length; ++t) {
        const Matrix& T = (spec.change_point && t >= spec.change_point->first)
                              ? spec.change_point->second
                              : spec.transition;
        state = sample_row(T, state, rng.uniform());
        traj.states.push_back(static_cast<int>(state));
    }
    return traj;
}

SignalKind signal_kind_from_name(const std::string& name) {
    if (name == "constant") return SignalKind::constant;
    if (name == "ramp") return SignalKind::ramp;
    if (name == "sine") return SignalKind::sine;
    if (name == "ar1") return SignalKind::ar1;
    if (name == "white-noise" || name == "white_noise") return SignalKind::white_noise;
    if (name == "logistic-map" || name == "logistic_map") return SignalKind::logistic_map;
    throw std::invalid_argument("unknown signal kind: " + name);
}

void SignalSpec::validate() const {
    if (length == 0) throw std::invalid_argument("length must be positive");
    for (double v : {amplitude, frequency, phase, level, slope, rho, r, x0, noise_sd})
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite signal parameter");
    if (noise_sd < 0.0) throw std::invalid_argument("noise sd must be non-negative");
}

core::SignalSeries gen_signal(const SignalSpec& spec) {
    spec.validate();
    const double two_pi = 6.283185307179586476925286766559;
    SplitMix64 rng(spec.seed);
    core::SignalSeries out;
    out.values.reserve(spec.length);

    double prev = 0.0;     // ar1 state
    double x = spec.x0;    // logistic-map state
    for (std::size_t t = 0; t < spec.length; ++t) {
        double v = 0.0;
        switch (spec.kind) {
            case SignalKind::constant:
                v = spec.level;
                break;
            case SignalKind::ramp:
                v = spec.level + spec.slope * static_cast<double>(t);
                break;
            case SignalKind::sine:
                v = spec.amplitude *
                        std::sin(two_pi * spec.frequency * static_cast<double>(t) + spec.phase) +
                    (spec.noise_sd > 0.0 ? spec.noise_sd * rng.gaussian() : 0.0);
                break;
            case SignalKind::ar1:
                prev = spec.rho * prev + spec.noise_sd * rng.gaussian();
                v = prev;
                break;
            case SignalKind::white_noise:
                v = spec.level + spec.noise_sd * rng.gaussian();
                break;
            case SignalKind::logistic_map:
                v = x + (spec.noise_sd > 0.0 ? spec.noise_sd * rng.gaussian() : 0.0);
                x = spec.r * x * (1.0 - x);
                break;
        }
        out.values.push_back(v);
    }
    return out;
}

SignalCorpus gen_labeled_corpus(const SignalSpec& class_a, const SignalSpec& class_b,
                                std::size_t per_class) {
    if (per_class == 0) throw std::invalid_argument("per-class count must be positive");
    SignalCorpus corpus;
    for (std::size_t i = 0; i < per_class; ++i) {
        SignalSpec spec = class_a;
        spec.seed = class_a.seed + i;
        corpus.signals.push_back(gen_signal(spec));
        corpus.labels.push_back(0);
    }
    for (std::size_t i = 0; i < per_class; ++i) {
        SignalSpec spec = class_b;
        spec.seed = class_b.seed + i;
        corpus.signals.push_back(gen_signal(spec));
        corpus.labels.push_back(1);
    }
    return corpus;
}

ChainCorpus gen_labeled_chain_corpus(const ChainSpec& class_a, const ChainSpec& class_b,
                                     std::size_t per_class) {
    if (per_class == 0) throw std::invalid_argument("per-class count must be positive");
    ChainCorpus corpus;
    for (std::size_t i = 0; i < per_class; ++i) {
        ChainSpec spec = class_a;
        spec.seed = class_a.seed + i;
        corpus.trajectories.push_back(gen_chain(spec));
        corpus.labels.push_back(0);
    }
    for (std::size_t i = 0; i < per_class; ++i) {
        ChainSpec spec = class_b;
        spec.seed = class_b.seed + i;
        corpus.trajectories.push_back(gen_chain(spec));
        corpus.labels.push_back(1);
    }
    return corpus;
}

} // namespace entropykit::synth
