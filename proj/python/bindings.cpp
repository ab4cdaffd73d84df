#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "entropykit/core.hpp"
#include "entropykit/eval.hpp"
#include "entropykit/markov.hpp"
#include "entropykit/neep.hpp"
#include "entropykit/select.hpp"
#include "entropykit/sigent.hpp"
#include "entropykit/synth.hpp"

namespace py = pybind11;
using namespace entropykit;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix to_matrix(const Rows& rows) {
    if (rows.empty()) throw std::invalid_argument("empty matrix");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw std::invalid_argument("ragged matrix rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Rows from_matrix(const Matrix& m) {
    Rows rows(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

} // namespace

PYBIND11_MODULE(_entropy_kit, m) {
    m.doc() = "Information-theoretic time-series features: Markov-chain entropies, "
              "neural entropy-production estimation, signal-entropy variants, "
              "mutual-information feature selection, and a small evaluation harness.";

    // ---- signal entropies -------------------------------------------------
    m.def("apen", &sigent::apen, py::arg("u"), py::arg("m"), py::arg("p"),
          py::arg("relative") = true, py::arg("count_ratio") = false,
          "Approximate entropy; p is relative to the sample SD unless relative=False.");
    m.def(
        "sampen",
        [](const std::vector<double>& u, std::size_t dim, double p,
           bool relative) -> std::optional<double> {
            auto r = sigent::sampen(u, dim, p, relative);
            if (!r.defined) return std::nullopt;
            return r.value;
        },
        py::arg("u"), py::arg("m"), py::arg("p"), py::arg("relative") = true,
        "Sample entropy; None when no template matches exist.");
    m.def("fuzzyen", &sigent::fuzzyen, py::arg("u"), py::arg("m"), py::arg("p"),
          py::arg("n") = 2, py::arg("relative") = true);
    m.def("incren", &sigent::incren, py::arg("u"), py::arg("m"), py::arg("R"));
    m.def("dispen", &sigent::dispen, py::arg("u"), py::arg("m"), py::arg("c"),
          py::arg("d") = 1);
    m.def("phen", &sigent::phen, py::arg("u"), py::arg("k") = 16);
    m.def("slopen", &sigent::slopen, py::arg("u"), py::arg("m"), py::arg("gamma"),
          py::arg("delta"));

    // ---- Markov-chain measures ---------------------------------------------
    m.def("shannon_entropy", &markov::shannon_entropy, py::arg("p"));
    m.def(
        "state_distribution",
        [](const std::vector<int>& states, std::size_t n_states) {
            core::StateTrajectory traj;
            for (std::size_t i = 0; i < n_states; ++i)
                traj.alphabet.push_back("s" + std::to_string(i));
            traj.states = states;
            return markov::state_distribution(traj);
        },
        py::arg("states"), py::arg("n_states"));
    m.def(
        "estimate_transition_matrix",
        [](const std::vector<int>& states, std::size_t n_states) {
            return from_matrix(markov::estimate_transition_matrix(states, n_states));
        },
        py::arg("states"), py::arg("n_states"));
    m.def(
        "stationary_distribution",
        [](const Rows& transition, std::optional<std::vector<double>> fallback) {
            auto result = markov::stationary_distribution(to_matrix(transition), fallback);
            return py::make_tuple(result.pi, result.fallback_used);
        },
        py::arg("transition"), py::arg("fallback") = std::nullopt,
        "Returns (pi, fallback_used).");
    m.def(
        "entropy_rate",
        [](const std::vector<double>& pi, const Rows& transition) {
            return markov::entropy_rate(pi, to_matrix(transition));
        },
        py::arg("pi"), py::arg("transition"));
    m.def(
        "entropy_rate_windows",
        [](const std::vector<int>& states, std::size_t n_states, std::size_t tw1,
           std::size_t tw2) {
            core::StateTrajectory traj;
            for (std::size_t i = 0; i < n_states; ++i)
                traj.alphabet.push_back("s" + std::to_string(i));
            traj.states = states;
            return markov::entropy_rate_windows(traj, tw1, tw2);
        },
        py::arg("states"), py::arg("n_states"), py::arg("tw1"), py::arg("tw2"));
    m.def(
        "pearson_matrix",
        [](const Rows& vectors) { return from_matrix(markov::pearson_matrix(vectors)); },
        py::arg("vectors"));
    m.def(
        "vne",
        [](const Rows& correlation) {
            return markov::vne(markov::density_operator(to_matrix(correlation)));
        },
        py::arg("correlation"),
        "Von Neumann entropy of rho = R/N for a correlation matrix R.");
    m.def(
        "matrix_log_mercator",
        [](const Rows& b, std::size_t k_max, double tol) {
            auto result = markov::matrix_log_mercator(to_matrix(b), k_max, tol);
            return py::make_tuple(from_matrix(result.log), result.residual, result.terms);
        },
        py::arg("b"), py::arg("k_max") = 1000, py::arg("tol") = 1e-14,
        "Returns (log, residual, terms).");
    m.def(
        "analytic_entropy_production",
        [](const std::vector<double>& pi, const Rows& transition) {
            auto ep = markov::analytic_entropy_production(pi, to_matrix(transition));
            return py::make_tuple(ep.sigma, ep.excluded_pairs);
        },
        py::arg("pi"), py::arg("transition"),
        "Returns (sigma, excluded_pairs).");

    // ---- NEEP ---------------------------------------------------------------
    py::class_<neep::NeepModel>(m, "NeepModel")
        .def("h", &neep::NeepModel::h, py::arg("s_prev"), py::arg("s_next"))
        .def("delta_s", &neep::NeepModel::delta_s, py::arg("s_prev"), py::arg("s_next"))
        .def("estimate_ep",
             [](const neep::NeepModel& model, const std::vector<int>& states) {
                 return neep::estimate_ep(model, states);
             })
        .def("save", &neep::NeepModel::save, py::arg("path"))
        .def_static("load", &neep::NeepModel::load, py::arg("path"))
        .def_property_readonly("n_states", &neep::NeepModel::n_states)
        .def_property_readonly("embed_dim", &neep::NeepModel::embed_dim);
    m.def(
        "train_neep",
        [](const std::vector<int>& states, std::size_t n_states, double lr, std::size_t epochs,
           std::size_t batch, std::uint64_t seed, std::size_t embed_dim, std::size_t hidden,
           double holdout) {
            neep::TrainConfig cfg;
            cfg.learning_rate = lr;
            cfg.epochs = epochs;
            cfg.batch_size = batch;
            cfg.seed = seed;
            cfg.embed_dim = embed_dim;
            cfg.hidden_width = hidden;
            cfg.holdout_fraction = holdout;
            auto result = neep::train_neep(states, n_states, cfg);
            std::vector<double> curve;
            for (const auto& epoch : result.curve) curve.push_back(epoch.per_transition);
            return py::make_tuple(std::move(result.model), curve);
        },
        py::arg("states"), py::arg("n_states"), py::arg("lr") = 0.01, py::arg("epochs") = 20,
        py::arg("batch") = 128, py::arg("seed") = 0, py::arg("embed_dim") = 16,
        py::arg("hidden") = 64, py::arg("holdout") = 0.0,
        "Returns (model, per-epoch mean objective); holdout > 0 trains on the "
        "leading 1-holdout fraction only.");

    // ---- selection ------------------------------------------------------------
    m.def("mutual_information", &select::mutual_information, py::arg("values"),
          py::arg("labels"), py::arg("bins") = 10);
    m.def(
        "select_features",
        [](const std::vector<std::string>& names, const Rows& rows,
           const std::vector<int>& labels, std::size_t k, double tau, std::size_t bins) {
            select::FeatureMatrix matrix;
            matrix.feature_names = names;
            matrix.rows = rows;
            matrix.labels = labels;
            auto report = select::select_features(matrix, k, tau, bins);
            py::dict out;
            out["mi_scores"] = report.mi_scores;
            out["selected"] = report.selected;
            out["pearson"] = from_matrix(report.pearson);
            out["incomplete"] = report.incomplete;
            py::list rejections;
            for (const auto& r : report.rejections) {
                py::dict d;
                d["feature"] = r.feature;
                d["blocker"] = r.blocker;
                d["correlation"] = r.correlation;
                rejections.append(d);
            }
            out["rejections"] = rejections;
            return out;
        },
        py::arg("names"), py::arg("rows"), py::arg("labels"), py::arg("k") = 4,
        py::arg("tau") = 0.9, py::arg("bins") = 10);

    // ---- evaluation -------------------------------------------------------------
    m.def(
        "repeated_holdout",
        [](const Rows& rows, const std::vector<int>& labels, const std::string& model,
           double test_fraction, std::size_t repeats, std::uint64_t seed, double lr,
           std::size_t epochs, const std::vector<std::size_t>& hidden, std::size_t batch) {
            eval::ModelSpec spec;
            if (model == "logreg") {
                spec.kind = eval::ModelSpec::Kind::logreg;
                spec.logreg.learning_rate = lr;
                spec.logreg.epochs = epochs;
            } else if (model == "mlp") {
                spec.kind = eval::ModelSpec::Kind::mlp;
                spec.mlp.learning_rate = lr;
                spec.mlp.epochs = epochs;
                spec.mlp.hidden = hidden;
                spec.mlp.batch_size = batch;
                spec.mlp.seed = seed;
            } else {
                throw std::invalid_argument("model must be 'logreg' or 'mlp'");
            }
            eval::EvalProtocol protocol;
            protocol.test_fraction = test_fraction;
            protocol.repeats = repeats;
            protocol.seed = seed;
            auto report = eval::repeated_holdout(rows, labels, spec, protocol);
            py::dict out;
            auto stat = [](const eval::Stat& s) { return py::make_tuple(s.mean, s.stddev); };
            out["recall"] = stat(report.recall);
            out["f1"] = stat(report.f1);
            out["accuracy"] = stat(report.accuracy);
            out["roc_auc"] = stat(report.auc);
            return out;
        },
        py::arg("rows"), py::arg("labels"), py::arg("model") = "logreg",
        py::arg("test_fraction") = 0.3, py::arg("repeats") = 30, py::arg("seed") = 0,
        py::arg("lr") = 0.1, py::arg("epochs") = 500,
        py::arg("hidden") = std::vector<std::size_t>{64, 64, 64, 64}, py::arg("batch") = 256,
        "Returns {metric: (mean, std)}.");

    // ---- synthetic data ------------------------------------------------------------
    m.def(
        "gen_chain",
        [](const Rows& transition, std::size_t length, std::uint64_t seed,
           std::optional<std::pair<std::size_t, Rows>> change_point) {
            synth::ChainSpec spec;
            spec.transition = to_matrix(transition);
            spec.length = length;
            spec.seed = seed;
            if (change_point)
                spec.change_point = {change_point->first, to_matrix(change_point->second)};
            return synth::gen_chain(spec).states;
        },
        py::arg("transition"), py::arg("length"), py::arg("seed") = 0,
        py::arg("change_point") = std::nullopt);
    m.def(
        "gen_signal",
        [](const std::string& kind, std::size_t length, std::uint64_t seed, double amplitude,
           double frequency, double phase, double level, double slope, double rho, double r,
           double x0, double noise_sd) {
            synth::SignalSpec spec;
            spec.kind = synth::signal_kind_from_name(kind);
            spec.length = length;
            spec.seed = seed;
            spec.amplitude = amplitude;
            spec.frequency = frequency;
            spec.phase = phase;
            spec.level = level;
            spec.slope = slope;
            spec.rho = rho;
            spec.r = r;
            spec.x0 = x0;
            spec.noise_sd = noise_sd;
            return synth::gen_signal(spec).values;
        },
        py::arg("kind"), py::arg("length"), py::arg("seed") = 0, py::arg("amplitude") = 1.0,
        py::arg("frequency") = 0.05, py::arg("phase") = 0.0, py::arg("level") = 0.0,
        py::arg("slope") = 1.0, py::arg("rho") = 0.9, py::arg("r") = 3.99, py::arg("x0") = 0.4,
        py::arg("noise_sd") = 0.0);

    m.attr("__version__") = "0.1.0";
}
