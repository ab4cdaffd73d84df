#ifndef ENTROPYKIT_SYNTH_HPP
#define ENTROPYKIT_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entropykit/core.hpp"
#include "entropykit/linalg.hpp"

namespace entropykit::synth {

// Seeded Markov-chain sampler; the initial state is drawn from the
// stationary distribution of T (uniform fallback on reducible chains).
struct ChainSpec {
    Matrix transition;
    std::size_t length = 0;
    std::optional<std::pair<std::size_t, Matrix>> change_point; // position, second matrix
    std::uint64_t seed = 0;
    std::vector<std::string> alphabet; // optional names, default s0, s1, ...

    void validate() const;
};

core::StateTrajectory gen_chain(const ChainSpec& spec);

enum class SignalKind { constant, ramp, sine, ar1, white_noise, logistic_map };

SignalKind signal_kind_from_name(const std::string& name);

// Closed forms (t = 0 .. N-1, g ~ unit gaussian):
//   constant:     level
//   ramp:         level + slope * t
//   sine:         amplitude * sin(2 pi frequency t + phase) + noise_sd * g
//   ar1:          x_t = rho * x_{t-1} + noise_sd * g,  x_{-1} = 0
//   white_noise:  level + noise_sd * g
//   logistic_map: x_{t+1} = r x_t (1 - x_t),  x_0 given, + noise_sd * g
struct SignalSpec {
    SignalKind kind = SignalKind::white_noise;
    std::size_t length = 0;
    double amplitude = 1.0;
    double frequency = 0.05; // cycles per sample
    double phase = 0.0;
    double level = 0.0;
    double slope = 1.0;
    double rho = 0.9;
    double r = 3.99;
    double x0 = 0.4;
    double noise_sd = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

core::SignalSeries gen_signal(const SignalSpec& spec);

// Balanced labeled corpus; item i of class c uses seed (spec seed + i),
// labels are 0 for class A and 1 for class B.
struct SignalCorpus {
    std::vector<core::SignalSeries> signals;
    std::vector<int> labels;
};

SignalCorpus gen_labeled_corpus(const SignalSpec& class_a, const SignalSpec& class_b,
                                std::size_t per_class);

struct ChainCorpus {
    std::vector<core::StateTrajectory> trajectories;
    std::vector<int> labels;
};

ChainCorpus gen_labeled_chain_corpus(const ChainSpec& class_a, const ChainSpec& class_b,
                                     std::size_t per_class);

} // namespace entropykit::synth

#endif
