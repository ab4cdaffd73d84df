#include "entropykit/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "entropykit/config.hpp"
#include "entropykit/core.hpp"
#include "entropykit/csv.hpp"
#include "entropykit/eval.hpp"
#include "entropykit/markov.hpp"
#include "entropykit/neep.hpp"
#include "entropykit/select.hpp"
#include "entropykit/sigent.hpp"
#include "entropykit/synth.hpp"

namespace fs = std::filesystem;

namespace entropykit::cli {

namespace {

struct Run {
    config::Ini ini;
    std::uint64_t seed = 0;
    fs::path out_dir;
    std::size_t threads = 1;
};

Run prepare(const CommonArgs& args) {
    Run run;
    try {
        run.ini = config::Ini::parse_file(args.config_path);
    } catch (const std::exception& e) {
        throw CliError(exit_usage, e.what());
    }
    run.seed = args.seed ? *args.seed
                         : static_cast<std::uint64_t>(run.ini.get_int_or("run", "seed", 0));
    run.out_dir = args.out_dir ? *args.out_dir : run.ini.get_or("run", "out", "out");
    run.threads = effective_threads(run.ini.get_int_or("run", "threads", 0));
    std::error_code ec;
    fs::create_directories(run.out_dir, ec);
    if (ec) throw CliError(exit_usage, "cannot create output directory: " + run.out_dir.string());
    return run;
}

std::string require_input(const config::Ini& ini) {
    std::string path;
    try {
        path = ini.get("run", "input");
    } catch (const std::exception& e) {
        throw CliError(exit_usage, e.what());
    }
    if (!fs::exists(path)) throw CliError(exit_input, "input file not found: " + path);
    return path;
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                body(i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) error_message = e.what();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failed.load()) throw std::runtime_error(error_message);
}

// ---- signal feature registry -------------------------------------------

struct SignalFeature {
    std::string name;
    std::function<double(const std::vector<double>&)> compute;
};

SignalFeature make_signal_feature(const std::string& name, const config::Ini& ini) {
    const std::string sec = "features";
    auto p = [&](const std::string& key, double fallback) {
        return ini.get_real_or(sec, name + "." + key, fallback);
    };
    auto pi = [&](const std::string& key, std::int64_t fallback) {
        return ini.get_int_or(sec, name + "." + key, fallback);
    };
    auto pb = [&](const std::string& key, bool fallback) {
        return ini.get_bool_or(sec, name + "." + key, fallback);
    };

    if (name == "ApEn") {
        std::size_t m = static_cast<std::size_t>(pi("m", 2));
        double tol = p("p", 0.2);
        bool relative = pb("relative", true);
        bool ratio_mode = pb("count_ratio", false);
        return {name, [=](const std::vector<double>& u) {
                    return sigent::apen(u, m, tol, relative, ratio_mode);
                }};
    }
    if (name == "SampEn") {
        std::size_t m = static_cast<std::size_t>(pi("m", 2));
        double tol = p("p", 0.2);
        bool relative = pb("relative", true);
        return {name, [=](const std::vector<double>& u) {
                    sigent::SampEnResult r = sigent::sampen(u, m, tol, relative);
                    if (!r.defined)
                        throw std::runtime_error("SampEn undefined (no template matches)");
                    return r.value;
                }};
    }
    if (name == "FuzzyEn") {
        std::size_t m = static_cast<std::size_t>(pi("m", 2));
        double tol = p("p", 0.2);
        int n_grad = static_cast<int>(pi("n", 2));
        bool relative = pb("relative", true);
        return {name, [=](const std::vector<double>& u) {
                    return sigent::fuzzyen(u, m, tol, n_grad, relative);
                }};
    }
    if (name == "IncrEn") {
        std::size_t m = static_cast<std::size_t>(pi("m", 2));
        int res = static_cast<int>(pi("R", 4));
        return {name,
                [=](const std::vector<double>& u) { return sigent::incren(u, m, res); }};
    }
    if (name == "DispEn") {
        std::size_t m = static_cast<std::size_t>(pi("m", 2));
        int c = static_cast<int>(pi("c", 3));
        std::size_t d = static_cast<std::size_t>(pi("d", 1));
        return {name, [=](const std::vector<double>& u) { return sigent::dispen(u, m, c, d); }};
    }
    if (name == "PhEn") {
        std::size_t k = static_cast<std::size_t>(pi("k", 16));
        return {name, [=](const std::vector<double>& u) { return sigent::phen(u, k); }};
    }
    if (name == "SlopEn") {
        std::size_t m = static_cast<std::size_t>(pi("m", 3));
        double gamma = p("gamma", 1.0);
        double delta = p("delta", 0.001);
        return {name,
                [=](const std::vector<double>& u) { return sigent::slopen(u, m, gamma, delta); }};
    }
    throw CliError(exit_feature, "unknown feature name: " + name);
}

const std::vector<std::string> kMarkovFeatures = {"ShannonEn", "EntropyRate", "EP",
                                                  "VNEFreq",   "VNEDur",      "DurationDiff"};

bool is_markov_feature(const std::string& name) {
    for (const std::string& f : kMarkovFeatures)
        if (f == name) return true;
    return false;
}

// ---- extract: signals ----------------------------------------------------

void extract_signals(const Run& run, const std::string& input) {
    csv::SignalTable table;
    try {
        table = csv::read_signals(input);
    } catch (const std::exception& e) {
        throw CliError(exit_csv, e.what());
    }

    std::vector<std::string> names;
    try {
        names = run.ini.get_list("features", "list");
    } catch (const std::exception& e) {
        throw CliError(exit_usage, e.what());
    }
    std::vector<SignalFeature> features;
    for (const std::string& name : names) features.push_back(make_signal_feature(name, run.ini));
    if (features.empty()) throw CliError(exit_usage, "empty feature list");

    const std::string positive = run.ini.get_or("run", "positive_label", "");

    csv::FeatureTable out;
    for (const SignalFeature& f : features) out.feature_names.push_back(f.name);
    out.ids = table.ids;
    out.window_starts.assign(table.rows.size(), 0);
    out.rows.resize(table.rows.size());
    out.labels.resize(table.rows.size());

    parallel_for(table.rows.size(), run.threads, [&](std::size_t i) {
        core::SignalSeries filled = core::fill_missing(table.rows[i]);
        std::vector<double> row;
        row.reserve(features.size());
        for (const SignalFeature& f : features) row.push_back(f.compute(filled.values));
        out.rows[i] = std::move(row);
        out.labels[i] = positive.empty() ? table.labels[i]
                                         : (table.labels[i] == positive ? "1" : "0");
    });

    csv::write_features((run.out_dir / "features.csv").string(), out);
    std::cout << "wrote " << (run.out_dir / "features.csv").string() << " (" << out.rows.size()
              << " rows)\n";
}

// ---- extract: events -----------------------------------------------------

struct EventStream {
    std::string name;
    std::vector<core::EventRecord> events;
};

void extract_events(const Run& run, const std::string& input) {
    csv::EventTable table;
    try {
        table = csv::read_events(input);
    } catch (const std::exception& e) {
        throw CliError(exit_csv, e.what());
    }

    const config::Ini& ini = run.ini;
    std::int64_t bin_seconds;
    std::size_t tw2;
    try {
        bin_seconds = ini.get_int("window", "bin_seconds");
        tw2 = static_cast<std::size_t>(ini.get_int("window", "tw2"));
    } catch (const std::exception& e) {
        throw CliError(exit_usage, e.what());
    }
    if (bin_seconds <= 0) throw CliError(exit_usage, "bin_seconds must be positive");
    if (tw2 < 2) throw CliError(exit_usage, "tw2 must be at least 2 bins");
    const std::size_t tw1 = static_cast<std::size_t>(ini.get_int_or("window", "tw1", 0));
    const std::size_t stride =
        static_cast<std::size_t>(ini.get_int_or("window", "stride", 0)); // 0 = tw2
    const int tz = static_cast<int>(ini.get_int_or("run", "timezone_offset_minutes", 0));
    const bool day_night = ini.get_bool_or("window", "day_night", false);

    std::vector<std::string> names;
    try {
        names = ini.get_list("features", "list");
    } catch (const std::exception& e) {
        throw CliError(exit_usage, e.what());
    }
    for (const std::string& name : names)
        if (!is_markov_feature(name)) throw CliError(exit_feature, "unknown feature name: " + name);
    if (names.empty()) throw CliError(exit_usage, "empty feature list");
    auto wants = [&](const std::string& f) {
        return std::find(names.begin(), names.end(), f) != names.end();
    };

    if (wants("EntropyRate") && tw1 < 2)
        throw CliError(exit_usage, "EntropyRate requires [window] tw1 >= 2");
    if ((wants("VNEFreq") || wants("VNEDur")) &&
        static_cast<std::int64_t>(tw2) * bin_seconds < 2 * 86400)
        throw CliError(exit_usage,
                       "VNE features need windows spanning at least 2 days (tw2 * bin_seconds)");

    neep::TrainConfig neep_cfg;
    neep_cfg.learning_rate = ini.get_real_or("neep", "lr", 0.01);
    neep_cfg.epochs = static_cast<std::size_t>(ini.get_int_or("neep", "epochs", 20));
    neep_cfg.batch_size = static_cast<std::size_t>(ini.get_int_or("neep", "batch", 128));
    neep_cfg.embed_dim = static_cast<std::size_t>(ini.get_int_or("neep", "embed_dim", 16));
    neep_cfg.hidden_width = static_cast<std::size_t>(ini.get_int_or("neep", "hidden", 64));

    std::vector<EventStream> streams;
    if (day_night) {
        core::DayNight dn = core::day_night_split(table.events, tz);
        streams.push_back({"day", std::move(dn.day)});
        streams.push_back({"night", std::move(dn.night)});
    } else {
        streams.push_back({"all", table.events});
    }

    for (std::size_t si = 0; si < streams.size(); ++si) {
        const EventStream& stream = streams[si];
        if (stream.events.empty())
            throw CliError(exit_csv, "stream '" + stream.name + "' has no events");
        core::StateTrajectory traj =
            core::resample_events(stream.events, table.alphabet, bin_seconds);
        if (tw2 > traj.length())
            throw CliError(exit_window, "window larger than data: tw2=" + std::to_string(tw2) +
                                            ", bins=" + std::to_string(traj.length()));
        if (wants("EntropyRate") && tw1 > traj.length())
            throw CliError(exit_window, "window larger than data: tw1=" + std::to_string(tw1) +
                                            ", bins=" + std::to_string(traj.length()));

        std::vector<core::Window> windows = core::window_split(traj.length(), tw2, stride);

        std::vector<double> pi;
        if (wants("EntropyRate")) {
            std::vector<int> prefix(traj.states.begin(),
                                    traj.states.begin() + static_cast<std::ptrdiff_t>(tw1));
            Matrix t1 = markov::estimate_transition_matrix(prefix, traj.alphabet_size());
            std::vector<double> freq(traj.alphabet_size(), 0.0);
            for (int s : prefix) freq[static_cast<std::size_t>(s)] += 1.0;
            pi = markov::stationary_distribution(t1, freq).pi;
        }

        std::vector<std::vector<double>> rows(windows.size());
        std::vector<char> skipped(windows.size(), 0);
        std::vector<std::vector<double>> dwells(windows.size());

        parallel_for(windows.size(), run.threads, [&](std::size_t wi) {
            const core::Window& w = windows[wi];
            std::vector<int> slice(
                traj.states.begin() + static_cast<std::ptrdiff_t>(w.start),
                traj.states.begin() + static_cast<std::ptrdiff_t>(w.start + w.length));
            const std::int64_t t_start = traj.timestamps[w.start];
            const std::int64_t t_end = t_start + static_cast<std::int64_t>(tw2) * bin_seconds;
            std::vector<core::EventRecord> span;
            for (const core::EventRecord& e : stream.events)
                if (e.timestamp >= t_start && e.timestamp < t_end) span.push_back(e);

            std::vector<double> row;
            row.reserve(names.size());
            for (const std::string& name : names) {
                if (name == "ShannonEn") {
                    core::StateTrajectory sub;
                    sub.alphabet = traj.alphabet;
                    sub.states = slice;
                    row.push_back(markov::shannon_entropy(markov::state_distribution(sub)));
                } else if (name == "EntropyRate") {
                    Matrix t = markov::estimate_transition_matrix(slice, traj.alphabet_size());
                    row.push_back(markov::entropy_rate(pi, t));
                } else if (name == "EP") {
                    neep::TrainConfig cfg = neep_cfg;
                    cfg.seed = run.seed + 1000003ull * si + wi;
                    neep::TrainResult trained =
                        neep::train_neep(slice, traj.alphabet_size(), cfg);
                    row.push_back(neep::estimate_ep(trained.model, slice));
                } else if (name == "VNEFreq" || name == "VNEDur") {
                    markov::RouteMode mode = name == "VNEFreq" ? markov::RouteMode::frequency
                                                               : markov::RouteMode::duration;
                    if (span.size() < 2) {
                        skipped[wi] = 1;
                        return;
                    }
                    std::vector<markov::RouteMatrix> days =
                        markov::route_matrices(span, traj.alphabet_size(), mode, tz);
                    if (days.size() < 2) {
                        skipped[wi] = 1;
                        return;
                    }
                    std::vector<std::vector<double>> vecs;
                    for (const markov::RouteMatrix& d : days) vecs.push_back(d.A.data());
                    Matrix r = markov::pearson_matrix(vecs);
                    row.push_back(markov::vne(markov::density_operator(r)));
                } else if (name == "DurationDiff") {
                    dwells[wi] = markov::dwell_vector(stream.events, traj.alphabet_size(),
                                                      t_start, t_end);
                    row.push_back(0.0); // patched after the parallel section
                }
            }
            rows[wi] = std::move(row);
        });

        // DurationDiff needs the previous window's dwell vector
        if (wants("DurationDiff")) {
            std::size_t col = 0;
            for (std::size_t c = 0; c < names.size(); ++c)
                if (names[c] == "DurationDiff") col = c;
            for (std::size_t wi = 0; wi < windows.size(); ++wi) {
                if (skipped[wi] || wi == 0) continue;
                if (skipped[wi - 1]) continue;
                double l1 = 0.0;
                for (std::size_t s = 0; s < dwells[wi].size(); ++s)
                    l1 += std::abs(dwells[wi][s] - dwells[wi - 1][s]);
                rows[wi][col] = l1;
            }
        }

        csv::FeatureTable out;
        out.feature_names = names;
        for (std::size_t wi = 0; wi < windows.size(); ++wi) {
            if (skipped[wi]) {
                std::cerr << "warning: stream '" << stream.name << "' window " << wi
                          << " skipped (fewer than 2 days of events)\n";
                continue;
            }
            out.ids.push_back(stream.name);
            out.window_starts.push_back(static_cast<std::int64_t>(windows[wi].start));
            out.rows.push_back(rows[wi]);
            out.labels.push_back("");
        }

        std::string filename =
            streams.size() == 1 ? "features.csv" : "features_" + stream.name + ".csv";
        csv::write_features((run.out_dir / filename).string(), out);
        std::cout << "wrote " << (run.out_dir / filename).string() << " (" << out.rows.size()
                  << " rows)\n";
    }
}

// ---- feature CSV -> matrix + labels --------------------------------------

// [select]/[eval] may override [run] input so one preset file can drive
// the whole extract -> select -> eval chain
std::string stage_input(const Run& run, const std::string& section) {
    if (run.ini.has(section, "input")) {
        std::string path = run.ini.get(section, "input");
        if (!fs::exists(path)) throw CliError(exit_input, "input file not found: " + path);
        return path;
    }
    return require_input(run.ini);
}

std::pair<select::FeatureMatrix, csv::FeatureTable> load_feature_matrix(const Run& run,
                                                                        const std::string& section) {
    const std::string input = stage_input(run, section);
    csv::FeatureTable table;
    try {
        table = csv::read_features(input);
    } catch (const std::exception& e) {
        throw CliError(exit_csv, e.what());
    }
    for (const std::string& label : table.labels)
        if (label.empty()) throw CliError(exit_csv, input + ": unlabeled rows");
    core::LabelEncoding enc;
    try {
        enc = core::encode_labels(table.labels);
    } catch (const std::exception& e) {
        throw CliError(exit_csv, input + ": " + e.what());
    }

    select::FeatureMatrix matrix;
    matrix.feature_names = table.feature_names;
    matrix.rows = table.rows;
    matrix.labels = enc.encoded;
    try {
        matrix.validate();
    } catch (const std::exception& e) {
        throw CliError(exit_csv, input + ": " + e.what());
    }
    return {std::move(matrix), std::move(table)};
}

} // namespace

std::size_t effective_threads(std::int64_t config_threads) {
    if (const char* env = std::getenv("ENTROPY_KIT_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    if (config_threads > 0) return static_cast<std::size_t>(config_threads);
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

int run_extract(const CommonArgs& args) {
    Run run = prepare(args);
    const std::string input = require_input(run.ini);
    std::string kind;
    try {
        kind = run.ini.get("run", "kind");
    } catch (const std::exception& e) {
        throw CliError(exit_usage, e.what());
    }
    if (kind == "signals") extract_signals(run, input);
    else if (kind == "events") extract_events(run, input);
    else throw CliError(exit_usage, "kind must be 'events' or 'signals', got '" + kind + "'");
    return exit_ok;
}

int run_select(const CommonArgs& args) {
    Run run = prepare(args);
    auto [matrix, table] = load_feature_matrix(run, "select");

    const std::size_t k =
        static_cast<std::size_t>(run.ini.get_int_or("select", "k", 4));
    const double tau = run.ini.get_real_or("select", "tau", 0.9);
    const std::size_t bins =
        static_cast<std::size_t>(run.ini.get_int_or("select", "bins", 10));

    select::SelectionReport report;
    try {
        report = select::select_features(matrix, std::min(k, matrix.feature_names.size()), tau,
                                         bins);
    } catch (const std::exception& e) {
        throw CliError(exit_csv, e.what());
    }

    // rank order for the score table: MI descending, ties by name
    std::vector<std::size_t> rank(report.feature_names.size());
    for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
    std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
        if (report.mi_scores[a] != report.mi_scores[b])
            return report.mi_scores[a] > report.mi_scores[b];
        return report.feature_names[a] < report.feature_names[b];
    });

    auto status_of = [&](const std::string& name) -> std::pair<std::string, const select::Rejection*> {
        for (const std::string& s : report.selected)
            if (s == name) return {"selected", nullptr};
        for (const select::Rejection& r : report.rejections)
            if (r.feature == name)
                return {r.blocker.empty() ? "rejected_budget" : "rejected_correlation", &r};
        return {"unranked", nullptr};
    };

    std::ofstream scores((run.out_dir / "selection_scores.csv").string());
    scores << "feature,mi,status,blocker,correlation\n";
    std::ofstream log((run.out_dir / "selection_log.txt").string());
    for (std::size_t idx : rank) {
        const std::string& name = report.feature_names[idx];
        auto [status, rejection] = status_of(name);
        scores << name << ',' << csv::format_real(report.mi_scores[idx]) << ',' << status << ','
               << (rejection ? rejection->blocker : "") << ','
               << (rejection && !rejection->blocker.empty()
                       ? csv::format_real(rejection->correlation)
                       : "")
               << '\n';
        if (status == "selected")
            log << "accepted " << name << " (mi=" << csv::format_real(report.mi_scores[idx])
                << ")\n";
        else if (status == "rejected_correlation")
            log << "rejected " << name << ": |r|="
                << csv::format_real(std::abs(rejection->correlation)) << " with "
                << rejection->blocker << " (cap " << csv::format_real(tau) << ")\n";
        else if (status == "rejected_budget")
            log << "rejected " << name << ": selection budget reached\n";
    }
    if (k > matrix.feature_names.size())
        log << "warning: k=" << k << " exceeds the " << matrix.feature_names.size()
            << " available features\n";
    if (report.incomplete)
        log << "warning: only " << report.selected.size() << " of " << k
            << " requested features were acceptable\n";

    csv::write_matrix((run.out_dir / "pearson_matrix.csv").string(), report.pearson,
                      report.feature_names);
    std::cout << "selected";
    for (const std::string& s : report.selected) std::cout << ' ' << s;
    std::cout << '\n';
    return exit_ok;
}

int run_eval(const CommonArgs& args) {
    Run run = prepare(args);
    auto [matrix, table] = load_feature_matrix(run, "eval");

    eval::ModelSpec spec;
    const std::string model = run.ini.get_or("eval", "model", "logreg");
    if (model == "logreg") {
        spec.kind = eval::ModelSpec::Kind::logreg;
        spec.logreg.learning_rate = run.ini.get_real_or("eval", "lr", 0.1);
        spec.logreg.epochs = static_cast<std::size_t>(run.ini.get_int_or("eval", "epochs", 500));
        spec.logreg.l2 = run.ini.get_real_or("eval", "l2", 1e-4);
        spec.logreg.balanced = run.ini.get_bool_or("eval", "balanced", true);
    } else if (model == "mlp") {
        spec.kind = eval::ModelSpec::Kind::mlp;
        spec.mlp.learning_rate = run.ini.get_real_or("eval", "lr", 0.3);
        spec.mlp.epochs = static_cast<std::size_t>(run.ini.get_int_or("eval", "epochs", 2000));
        spec.mlp.batch_size = static_cast<std::size_t>(run.ini.get_int_or("eval", "batch", 256));
        spec.mlp.seed = run.seed;
        if (run.ini.has("eval", "layers")) {
            spec.mlp.hidden.clear();
            for (const std::string& w : run.ini.get_list("eval", "layers"))
                spec.mlp.hidden.push_back(static_cast<std::size_t>(std::stoll(w)));
        }
    } else {
        throw CliError(exit_usage, "model must be 'logreg' or 'mlp', got '" + model + "'");
    }

    eval::EvalProtocol protocol;
    protocol.test_fraction = run.ini.get_real_or("eval", "test_fraction", 0.3);
    protocol.repeats = static_cast<std::size_t>(run.ini.get_int_or("eval", "repeats", 30));
    protocol.standardize = run.ini.get_bool_or("eval", "standardize", true);
    protocol.seed = run.seed;

    eval::EvalReport report;
    try {
        report = eval::repeated_holdout(matrix.rows, matrix.labels, spec, protocol);
    } catch (const std::exception& e) {
        std::string msg = e.what();
        if (msg.find("diverged") != std::string::npos) throw CliError(exit_divergence, msg);
        throw CliError(exit_csv, msg);
    }

    std::ofstream out((run.out_dir / "eval_report.csv").string());
    out << "metric,mean,std,n_repeats\n";
    auto emit = [&](const char* name, const eval::Stat& s) {
        out << name << ',' << csv::format_real(s.mean) << ',' << csv::format_real(s.stddev) << ','
            << protocol.repeats << '\n';
    };
    emit("recall", report.recall);
    emit("f1", report.f1);
    emit("accuracy", report.accuracy);
    emit("roc_auc", report.auc);

    std::ofstream txt((run.out_dir / "eval_report.txt").string());
    txt << "model: " << model << "\n"
        << "repeats: " << protocol.repeats << ", test fraction: "
        << csv::format_real(protocol.test_fraction) << "\n"
        << "recall:   " << csv::format_real(report.recall.mean) << " +/- "
        << csv::format_real(report.recall.stddev) << "\n"
        << "f1:       " << csv::format_real(report.f1.mean) << " +/- "
        << csv::format_real(report.f1.stddev) << "\n"
        << "accuracy: " << csv::format_real(report.accuracy.mean) << " +/- "
        << csv::format_real(report.accuracy.stddev) << "\n"
        << "roc_auc:  " << csv::format_real(report.auc.mean) << " +/- "
        << csv::format_real(report.auc.stddev) << "\n";

    std::cout << "accuracy " << csv::format_real(report.accuracy.mean) << " +/- "
              << csv::format_real(report.accuracy.stddev) << '\n';
    return exit_ok;
}

namespace {

// NEEP consumes a plain state sequence: either an event CSV
// (timestamp,state) or a bare trajectory CSV with a single "state"
// column, in file order.
std::pair<std::vector<int>, std::size_t> read_state_sequence(const std::string& path) {
    std::ifstream probe(path);
    std::string header;
    std::getline(probe, header);
    if (config::trim(header) == "state") {
        std::vector<int> states;
        std::map<std::string, int> index;
        std::vector<std::string> names;
        std::string line;
        std::size_t line_no = 1;
        while (std::getline(probe, line)) {
            ++line_no;
            std::string name = config::trim(line);
            if (name.empty()) continue;
            auto [it, inserted] = index.try_emplace(name, static_cast<int>(names.size()));
            if (inserted) names.push_back(name);
            states.push_back(it->second);
        }
        if (states.empty()) throw std::runtime_error(path + ": no states");
        return {std::move(states), names.size()};
    }
    csv::EventTable table = csv::read_events(path);
    std::vector<int> states;
    states.reserve(table.events.size());
    for (const core::EventRecord& e : table.events) states.push_back(e.state);
    return {std::move(states), table.alphabet.size()};
}

} // namespace

int run_neep(const CommonArgs& args) {
    Run run = prepare(args);
    const std::string input = require_input(run.ini);
    std::vector<int> states;
    std::size_t n_states = 0;
    try {
        std::tie(states, n_states) = read_state_sequence(input);
    } catch (const std::exception& e) {
        throw CliError(exit_csv, e.what());
    }

    neep::TrainConfig cfg;
    cfg.learning_rate = run.ini.get_real_or("neep", "lr", 0.01);
    cfg.epochs = static_cast<std::size_t>(run.ini.get_int_or("neep", "epochs", 20));
    cfg.batch_size = static_cast<std::size_t>(run.ini.get_int_or("neep", "batch", 128));
    cfg.embed_dim = static_cast<std::size_t>(run.ini.get_int_or("neep", "embed_dim", 16));
    cfg.hidden_width = static_cast<std::size_t>(run.ini.get_int_or("neep", "hidden", 64));
    cfg.holdout_fraction = run.ini.get_real_or("neep", "holdout", 0.0);
    cfg.seed = run.seed;

    neep::TrainResult result;
    try {
        result = neep::train_neep(states, n_states, cfg);
    } catch (const std::runtime_error& e) {
        throw CliError(exit_divergence, e.what());
    }

    result.model.save((run.out_dir / "neep_model.bin").string());
    std::ofstream curve((run.out_dir / "neep_curve.csv").string());
    curve << "epoch,objective,objective_per_transition\n";
    for (std::size_t e = 0; e < result.curve.size(); ++e)
        curve << (e + 1) << ',' << csv::format_real(result.curve[e].total) << ','
              << csv::format_real(result.curve[e].per_transition) << '\n';

    double ep = neep::estimate_ep(result.model, states);
    std::cout << "ep_per_step " << csv::format_real(ep) << " transitions " << (states.size() - 1);
    if (!result.holdout.empty())
        std::cout << " holdout_ep_per_step "
                  << csv::format_real(neep::estimate_ep(result.model, result.holdout))
                  << " holdout_transitions " << (result.holdout.size() - 1);
    std::cout << '\n';
    return exit_ok;
}

namespace {

Matrix parse_matrix(const std::string& text) {
    std::vector<std::vector<double>> rows;
    for (const std::string& row_text : config::split(text, ';')) {
        std::istringstream row_in(row_text);
        std::vector<double> row;
        double v;
        while (row_in >> v) row.push_back(v);
        if (row.empty()) throw std::runtime_error("empty matrix row");
        rows.push_back(row);
    }
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw std::runtime_error("ragged matrix rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

synth::SignalSpec parse_signal_spec(const config::Ini& ini, const std::string& section,
                                    std::size_t length, std::uint64_t seed) {
    synth::SignalSpec spec;
    spec.kind = synth::signal_kind_from_name(ini.get(section, "kind"));
    spec.length = length;
    spec.amplitude = ini.get_real_or(section, "amplitude", 1.0);
    spec.frequency = ini.get_real_or(section, "frequency", 0.05);
    spec.phase = ini.get_real_or(section, "phase", 0.0);
    spec.level = ini.get_real_or(section, "level", 0.0);
    spec.slope = ini.get_real_or(section, "slope", 1.0);
    spec.rho = ini.get_real_or(section, "rho", 0.9);
    spec.r = ini.get_real_or(section, "r", 3.99);
    spec.x0 = ini.get_real_or(section, "x0", 0.4);
    spec.noise_sd = ini.get_real_or(section, "noise_sd", 0.0);
    spec.seed = seed;
    return spec;
}

} // namespace

int run_synth(const CommonArgs& args) {
    Run run = prepare(args);
    const config::Ini& ini = run.ini;
    std::string kind;
    try {
        kind = ini.get("synth", "kind");
    } catch (const std::exception& e) {
        throw CliError(exit_usage, e.what());
    }

    try {
        if (kind == "chain") {
            synth::ChainSpec spec;
            spec.transition = parse_matrix(ini.get("chain", "T"));
            spec.length = static_cast<std::size_t>(ini.get_int("chain", "length"));
            spec.seed = run.seed;
            if (ini.has("chain", "states")) spec.alphabet = ini.get_list("chain", "states");
            if (ini.has("chain", "change_point")) {
                std::size_t pos = static_cast<std::size_t>(ini.get_int("chain", "change_point"));
                spec.change_point = {pos, parse_matrix(ini.get("chain", "T2"))};
            }
            core::StateTrajectory traj = synth::gen_chain(spec);

            const std::int64_t step = ini.get_int_or("chain", "step_seconds", 60);
            const std::int64_t start = ini.get_int_or("chain", "start_timestamp", 0);
            csv::EventTable table;
            table.alphabet = traj.alphabet;
            for (std::size_t i = 0; i < traj.states.size(); ++i)
                table.events.push_back(
                    core::EventRecord{start + static_cast<std::int64_t>(i) * step,
                                      traj.states[i]});
            csv::write_events((run.out_dir / "events.csv").string(), table);
            std::cout << "wrote " << (run.out_dir / "events.csv").string() << " ("
                      << table.events.size() << " events)\n";
        } else if (kind == "signal_corpus") {
            const std::size_t count = static_cast<std::size_t>(ini.get_int("synth", "count"));
            const std::size_t length = static_cast<std::size_t>(ini.get_int("synth", "length"));
            synth::SignalSpec a = parse_signal_spec(ini, "class_a", length, run.seed);
            synth::SignalSpec b = parse_signal_spec(ini, "class_b", length, run.seed + 777777);
            synth::SignalCorpus corpus = synth::gen_labeled_corpus(a, b, count);

            csv::SignalTable table;
            for (std::size_t i = 0; i < corpus.signals.size(); ++i) {
                table.ids.push_back("c" + std::to_string(corpus.labels[i]) + "-" +
                                    std::to_string(i));
                table.labels.push_back(std::to_string(corpus.labels[i]));
                table.rows.push_back(corpus.signals[i]);
            }
            csv::write_signals((run.out_dir / "corpus.csv").string(), table);
            std::cout << "wrote " << (run.out_dir / "corpus.csv").string() << " ("
                      << table.rows.size() << " rows)\n";
        } else {
            throw CliError(exit_usage, "synth kind must be 'chain' or 'signal_corpus'");
        }
    } catch (const CliError&) {
        throw;
    } catch (const std::exception& e) {
        throw CliError(exit_usage, e.what());
    }
    return exit_ok;
}

} // namespace entropykit::cli
