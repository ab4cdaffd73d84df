#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <filesystem>

#include "entropykit/markov.hpp"
#include "entropykit/neep.hpp"
#include "entropykit/synth.hpp"

using namespace entropykit;
using doctest::Approx;

namespace {

neep::NeepModel zero_model(std::size_t n_states, std::size_t embed = 4, std::size_t hidden = 8) {
    neep::NeepModel model(n_states, embed, hidden, 1);
    for (std::size_t i = 0; i < model.param_count(); ++i) model.param(i) = 0.0;
    return model;
}

Matrix biased_ring() {
    Matrix t(3, 3, 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        t(i, i) = 0.1;
        t(i, (i + 1) % 3) = 0.7;
        t(i, (i + 2) % 3) = 0.2;
    }
    return t;
}

std::vector<int> ring_trajectory(std::size_t length, std::uint64_t seed) {
    synth::ChainSpec spec;
    spec.transition = biased_ring();
    spec.length = length;
    spec.seed = seed;
    return synth::gen_chain(spec).states;
}

} // namespace

TEST_CASE("h_theta basics") {
    neep::NeepModel zero = zero_model(3);
    CHECK(zero.h(0, 1) == 0.0);
    CHECK(zero.h(2, 2) == 0.0);

    neep::NeepModel a(3, 4, 8, 42);
    neep::NeepModel b(3, 4, 8, 42);
    CHECK(a.h(0, 1) == b.h(0, 1)); // bit-identical under the same seed
    CHECK(a.h(0, 1) != a.h(1, 0)); // order matters for random parameters

    CHECK_THROWS(a.h(-1, 0));
    CHECK_THROWS(a.h(0, 3));
}

TEST_CASE("delta_s antisymmetry is exact for any parameters") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        neep::NeepModel model(4, 6, 10, seed);
        for (int x = 0; x < 4; ++x) {
            CHECK(model.delta_s(x, x) == 0.0);
            for (int y = 0; y < 4; ++y) {
                CHECK(model.delta_s(x, y) == -model.delta_s(y, x));
                CHECK(model.delta_s(x, y) == model.h(x, y) - model.h(y, x));
            }
        }
    }
}

TEST_CASE("objective of the zero model is -(L-1)") {
    neep::NeepModel zero = zero_model(2);
    std::vector<int> states = {0, 1, 0, 1, 1};
    auto obj = neep::neep_objective(zero, states);
    CHECK(obj.total == Approx(-4.0));
    CHECK(obj.per_transition == Approx(-1.0));
    CHECK_THROWS(neep::neep_objective(zero, {0}));
}

TEST_CASE("per-term objective values respect x - exp(-x) bounds") {
    neep::NeepModel model(3, 4, 8, 77);
    double grid_max = 50.0 - std::exp(-50.0);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            double x = model.delta_s(a, b);
            double term = x - std::exp(-x);
            CHECK(term < x);
            CHECK(term <= grid_max);
        }
    }
}

TEST_CASE("hand-composed objective on a seeded 2-state model") {
    neep::NeepModel model(2, 4, 8, 123);
    std::vector<int> states = {0, 1, 1, 0};
    double expected = 0.0;
    for (std::size_t t = 0; t + 1 < states.size(); ++t) {
        double ds = model.h(states[t], states[t + 1]) - model.h(states[t + 1], states[t]);
        expected += ds - std::exp(-ds);
    }
    CHECK(neep::neep_objective(model, states).total == Approx(expected).epsilon(1e-15));
}

TEST_CASE("gradient check against central finite differences") {
    neep::NeepModel model(3, 4, 8, 99);
    std::vector<int> states = ring_trajectory(60, 5);
    CHECK(neep::gradient_check(model, states) < 1e-4);
}

TEST_CASE("gradient of unused embedding rows is zero") {
    neep::NeepModel model(3, 4, 8, 7);
    std::vector<int> states(50, 1); // never visits states 0 or 2
    model.zero_grad();
    for (std::size_t t = 0; t + 1 < states.size(); ++t) {
        double ds = model.delta_s(states[t], states[t + 1]);
        model.accumulate_delta_s_gradient(states[t], states[t + 1], 1.0 + std::exp(-ds));
    }
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(model.grad(0 * 4 + i) == 0.0);
        CHECK(model.grad(2 * 4 + i) == 0.0);
    }
}

TEST_CASE("scaling the head weights scales delta_s linearly") {
    neep::NeepModel model(3, 4, 8, 31);
    double before = model.delta_s(0, 1);
    // final linear layer: last 8 weights + 1 bias; bias cancels in delta_s
    std::size_t total = model.param_count();
    for (std::size_t i = total - 9; i < total; ++i) model.param(i) *= 2.0;
    CHECK(model.delta_s(0, 1) == Approx(2.0 * before).epsilon(1e-12));
}

TEST_CASE("training is deterministic and the curve trends upward") {
    std::vector<int> states = ring_trajectory(2000, 11);
    neep::TrainConfig cfg;
    cfg.learning_rate = 0.005;
    cfg.epochs = 8;
    cfg.batch_size = 64;
    cfg.seed = 3;
    cfg.embed_dim = 4;
    cfg.hidden_width = 16;

    auto run1 = neep::train_neep(states, 3, cfg);
    auto run2 = neep::train_neep(states, 3, cfg);
    REQUIRE(run1.curve.size() == cfg.epochs);
    for (std::size_t i = 0; i < run1.model.param_count(); ++i)
        CHECK(run1.model.param(i) == run2.model.param(i));
    for (std::size_t e = 0; e < cfg.epochs; ++e)
        CHECK(run1.curve[e].total == run2.curve[e].total);

    // ascent property with slack for mini-batch noise
    for (std::size_t e = 1; e < run1.curve.size(); ++e)
        CHECK(run1.curve[e].per_transition >= run1.curve[e - 1].per_transition - 0.05);
    CHECK(run1.curve.back().total > run1.curve.front().total);
}

TEST_CASE("estimate_ep is antisymmetric under trajectory reversal") {
    neep::NeepModel model(3, 4, 8, 13);
    std::vector<int> states = ring_trajectory(500, 17);
    double forward = neep::estimate_ep(model, states);
    std::vector<int> reversed(states.rbegin(), states.rend());
    CHECK(neep::estimate_ep(model, reversed) == Approx(-forward).epsilon(1e-12));

    // concatenating a trajectory with its exact reverse cancels pairwise
    std::vector<int> both = states;
    both.insert(both.end(), reversed.begin(), reversed.end());
    // the middle junction pair contributes delta_s(s, s) = 0
    CHECK(std::abs(neep::estimate_ep(model, both)) < 1e-12);

    CHECK(neep::estimate_ep(zero_model(3), states) == 0.0);
}

TEST_CASE("short ring training recovers positive entropy production") {
    std::vector<int> states = ring_trajectory(20000, 23);
    neep::TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.epochs = 12;
    cfg.batch_size = 128;
    cfg.seed = 29;
    cfg.embed_dim = 8;
    cfg.hidden_width = 32;
    auto trained = neep::train_neep(states, 3, cfg);
    double ep = neep::estimate_ep(trained.model, states);
    // analytic value for this ring is 0.6264; a short run should be close
    CHECK(ep > 0.35);
    CHECK(ep < 0.95);
}

TEST_CASE("holdout training reserves the trajectory tail") {
    std::vector<int> states = ring_trajectory(8000, 51);
    neep::TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.epochs = 25;
    cfg.batch_size = 128;
    cfg.seed = 52;
    cfg.embed_dim = 8;
    cfg.hidden_width = 32;
    cfg.holdout_fraction = 0.3;

    auto result = neep::train_neep(states, 3, cfg);
    CHECK(result.train_length == 8000 - 2400);
    REQUIRE(result.holdout.size() == 2400);
    // held-out segment: same dynamics, so the estimate stays in range
    double ep_holdout = neep::estimate_ep(result.model, result.holdout);
    CHECK(ep_holdout > 0.3);
    CHECK(ep_holdout < 1.0);

    cfg.holdout_fraction = 0.9999;
    CHECK_THROWS(neep::train_neep({0, 1, 0}, 2, cfg));
}

TEST_CASE("model serialization round trip") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "ek_neep_test";
    fs::create_directories(dir);
    fs::path path = dir / "model.bin";

    neep::NeepModel model(5, 6, 12, 321);
    model.save(path.string());
    neep::NeepModel back = neep::NeepModel::load(path.string());
    REQUIRE(back.param_count() == model.param_count());
    for (std::size_t i = 0; i < model.param_count(); ++i)
        CHECK(back.param(i) == model.param(i));
    CHECK(back.delta_s(1, 4) == model.delta_s(1, 4));

    CHECK_THROWS(neep::NeepModel::load((dir / "missing.bin").string()));
    fs::remove_all(dir);
}

TEST_CASE("divergent training reports the epoch") {
    std::vector<int> states = ring_trajectory(200, 41);
    neep::TrainConfig cfg;
    cfg.learning_rate = 1e6; // guaranteed blow-up
    cfg.epochs = 3;
    cfg.batch_size = 16;
    cfg.embed_dim = 4;
    cfg.hidden_width = 8;
    CHECK_THROWS_AS(neep::train_neep(states, 3, cfg), std::runtime_error);
}
