#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "entropykit/commands.hpp"
#include "entropykit/config.hpp"
#include "entropykit/csv.hpp"
#include "entropykit/rng.hpp"

using namespace entropykit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        fs::path p = path / name;
        std::ofstream out(p.string());
        out << content;
        return p.string();
    }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("ini parser handles sections, comments, and errors with line numbers") {
    std::istringstream in(
        "# comment\n"
        "[run]\n"
        "input = data.csv  # trailing comment\n"
        "seed = 42\n"
        "\n"
        "[eval]\n"
        "lr = 0.25\n"
        "layers = 64, 32,16\n"
        "flag = true\n");
    auto ini = config::Ini::parse(in, "test.cfg");
    CHECK(ini.get("run", "input") == "data.csv");
    CHECK(ini.get_int("run", "seed") == 42);
    CHECK(ini.get_real("eval", "lr") == 0.25);
    CHECK(ini.get_bool_or("eval", "flag", false));
    CHECK(ini.get_list("eval", "layers") == std::vector<std::string>{"64", "32", "16"});
    CHECK(ini.get_or("run", "missing", "dflt") == "dflt");
    CHECK_THROWS(ini.get("run", "missing"));

    std::istringstream bad("[run]\nnot a pair\n");
    try {
        config::Ini::parse(bad, "bad.cfg");
        FAIL("expected parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("bad.cfg:2") != std::string::npos);
    }

    std::istringstream dup("[s]\nk = 1\nk = 2\n");
    CHECK_THROWS(config::Ini::parse(dup, "dup.cfg"));
}

TEST_CASE("synth chain -> extract -> neep round trip with exit codes") {
    TempDir dir("ek_cli_chain");

    std::string synth_cfg = dir.file("synth.cfg",
                                     "[run]\nout = " + dir.sub("synth_out") +
                                         "\nseed = 5\n"
                                         "[synth]\nkind = chain\n"
                                         "[chain]\nT = 0.1 0.7 0.2; 0.2 0.1 0.7; 0.7 0.2 0.1\n"
                                         "length = 4000\nstep_seconds = 60\n");
    cli::CommonArgs synth_args{synth_cfg, std::nullopt, std::nullopt};
    CHECK(cli::run_synth(synth_args) == 0);
    std::string events_path = dir.sub("synth_out") + "/events.csv";
    REQUIRE(fs::exists(events_path));

    std::string extract_cfg = dir.file(
        "extract.cfg", "[run]\ninput = " + events_path + "\nkind = events\nout = " +
                           dir.sub("extract_out") +
                           "\nseed = 7\n"
                           "[window]\nbin_seconds = 60\ntw1 = 2000\ntw2 = 500\n"
                           "[features]\nlist = ShannonEn,EntropyRate\n");
    cli::CommonArgs extract_args{extract_cfg, std::nullopt, std::nullopt};
    CHECK(cli::run_extract(extract_args) == 0);
    auto features = csv::read_features(dir.sub("extract_out") + "/features.csv");
    CHECK(features.feature_names == std::vector<std::string>{"ShannonEn", "EntropyRate"});
    CHECK(features.rows.size() == 8);

    // entropy-rate column roughly constant across windows on a stationary chain
    double lo = 1e9, hi = -1e9;
    for (const auto& row : features.rows) {
        lo = std::min(lo, row[1]);
        hi = std::max(hi, row[1]);
    }
    CHECK(hi - lo < 0.25);

    std::string neep_cfg = dir.file("neep.cfg", "[run]\ninput = " + events_path + "\nout = " +
                                                    dir.sub("neep_out") +
                                                    "\nseed = 9\n"
                                                    "[neep]\nepochs = 2\nbatch = 64\n"
                                                    "embed_dim = 4\nhidden = 8\n");
    cli::CommonArgs neep_args{neep_cfg, std::nullopt, std::nullopt};
    CHECK(cli::run_neep(neep_args) == 0);
    CHECK(fs::exists(dir.sub("neep_out") + "/neep_model.bin"));
    CHECK(fs::exists(dir.sub("neep_out") + "/neep_curve.csv"));

    // window larger than the data is its own exit code
    std::string big_cfg = dir.file(
        "big.cfg", "[run]\ninput = " + events_path + "\nkind = events\nout = " +
                       dir.sub("big_out") +
                       "\n[window]\nbin_seconds = 60\ntw2 = 100000\n"
                       "[features]\nlist = ShannonEn\n");
    try {
        cli::run_extract(cli::CommonArgs{big_cfg, std::nullopt, std::nullopt});
        FAIL("expected window error");
    } catch (const cli::CliError& e) {
        CHECK(e.code == cli::exit_window);
    }

    // unknown feature name is its own exit code
    std::string bad_feature = dir.file(
        "badf.cfg", "[run]\ninput = " + events_path + "\nkind = events\nout = " +
                        dir.sub("badf_out") +
                        "\n[window]\nbin_seconds = 60\ntw2 = 500\n"
                        "[features]\nlist = NoSuchEntropy\n");
    try {
        cli::run_extract(cli::CommonArgs{bad_feature, std::nullopt, std::nullopt});
        FAIL("expected feature error");
    } catch (const cli::CliError& e) {
        CHECK(e.code == cli::exit_feature);
    }

    // missing input file is its own exit code
    std::string missing = dir.file("missing.cfg",
                                   "[run]\ninput = " + dir.sub("nope.csv") +
                                       "\nkind = events\nout = " + dir.sub("m_out") +
                                       "\n[window]\nbin_seconds = 60\ntw2 = 10\n"
                                       "[features]\nlist = ShannonEn\n");
    try {
        cli::run_extract(cli::CommonArgs{missing, std::nullopt, std::nullopt});
        FAIL("expected input error");
    } catch (const cli::CliError& e) {
        CHECK(e.code == cli::exit_input);
    }
}

TEST_CASE("synth corpus -> extract -> select -> eval round trip") {
    TempDir dir("ek_cli_pipeline");

    std::string synth_cfg = dir.file("synth.cfg",
                                     "[run]\nout = " + dir.sub("corpus") +
                                         "\nseed = 11\n"
                                         "[synth]\nkind = signal_corpus\ncount = 40\nlength = 220\n"
                                         "[class_a]\nkind = sine\nfrequency = 0.04\nnoise_sd = 0.05\n"
                                         "[class_b]\nkind = white-noise\nnoise_sd = 1.0\n");
    REQUIRE(cli::run_synth(cli::CommonArgs{synth_cfg, std::nullopt, std::nullopt}) == 0);
    std::string corpus = dir.sub("corpus") + "/corpus.csv";

    std::string extract_cfg = dir.file(
        "extract.cfg", "[run]\ninput = " + corpus + "\nkind = signals\nout = " +
                           dir.sub("features") +
                           "\n[features]\nlist = ApEn,SampEn,IncrEn,PhEn,SlopEn\n");
    REQUIRE(cli::run_extract(cli::CommonArgs{extract_cfg, std::nullopt, std::nullopt}) == 0);
    std::string features = dir.sub("features") + "/features.csv";
    auto table = csv::read_features(features);
    CHECK(table.rows.size() == 80);
    CHECK(table.feature_names.size() == 5);

    std::string select_cfg = dir.file("select.cfg",
                                      "[run]\ninput = " + features + "\nout = " +
                                          dir.sub("selection") +
                                          "\n[select]\nk = 3\ntau = 0.9\nbins = 10\n");
    REQUIRE(cli::run_select(cli::CommonArgs{select_cfg, std::nullopt, std::nullopt}) == 0);
    CHECK(fs::exists(dir.sub("selection") + "/selection_scores.csv"));
    CHECK(fs::exists(dir.sub("selection") + "/pearson_matrix.csv"));
    CHECK(fs::exists(dir.sub("selection") + "/selection_log.txt"));

    std::string eval_cfg = dir.file("eval.cfg",
                                    "[run]\ninput = " + features + "\nout = " + dir.sub("eval") +
                                        "\nseed = 3\n"
                                        "[eval]\nmodel = logreg\nlr = 0.5\nepochs = 200\n"
                                        "repeats = 10\n");
    REQUIRE(cli::run_eval(cli::CommonArgs{eval_cfg, std::nullopt, std::nullopt}) == 0);
    std::string report = slurp(dir.sub("eval") + "/eval_report.csv");
    CHECK(report.find("accuracy") != std::string::npos);

    // separable corpus: accuracy should be high; parse the CSV line
    std::istringstream in(report);
    std::string line;
    double accuracy = 0.0;
    while (std::getline(in, line)) {
        if (line.rfind("accuracy,", 0) == 0) {
            auto cells = csv::split_csv_line(line);
            accuracy = std::stod(cells[1]);
        }
    }
    CHECK(accuracy >= 0.9);
}

TEST_CASE("EEG-style feature list yields exactly the four named columns") {
    TempDir dir("ek_cli_esrd_cols");
    std::ostringstream csv;
    csv << "id,label,v1,v2,v3,v4,v5,v6,v7,v8,v9,v10,v11,v12\n";
    for (int i = 0; i < 6; ++i) {
        csv << "r" << i << ',' << (i % 2);
        for (int v = 0; v < 12; ++v) csv << ',' << (0.5 * v + i * ((v % 3) - 1));
        csv << '\n';
    }
    std::string input = dir.file("signals.csv", csv.str());
    std::string cfg = dir.file("extract.cfg",
                               "[run]\ninput = " + input + "\nkind = signals\nout = " +
                                   dir.sub("out") +
                                   "\n[features]\nlist = IncrEn,ApEn,SlopEn,PhEn\n"
                                   "ApEn.relative = false\nApEn.p = 0.5\nPhEn.k = 4\n");
    REQUIRE(cli::run_extract(cli::CommonArgs{cfg, std::nullopt, std::nullopt}) == 0);
    auto table = csv::read_features(dir.sub("out") + "/features.csv");
    CHECK(table.feature_names ==
          std::vector<std::string>{"IncrEn", "ApEn", "SlopEn", "PhEn"});
}

TEST_CASE("empty input file errors without partial output") {
    TempDir dir("ek_cli_empty");
    std::string input = dir.file("empty.csv", "");
    std::string cfg = dir.file("extract.cfg",
                               "[run]\ninput = " + input + "\nkind = signals\nout = " +
                                   dir.sub("out") + "\n[features]\nlist = ApEn\n");
    try {
        cli::run_extract(cli::CommonArgs{cfg, std::nullopt, std::nullopt});
        FAIL("expected csv error");
    } catch (const cli::CliError& e) {
        CHECK(e.code == cli::exit_csv);
    }
    CHECK_FALSE(fs::exists(dir.sub("out") + "/features.csv"));
}

TEST_CASE("commands are byte-deterministic under fixed config and seed") {
    TempDir dir("ek_cli_determinism");
    std::string synth_cfg = dir.file("synth.cfg",
                                     "[run]\nseed = 17\n"
                                         "[synth]\nkind = signal_corpus\ncount = 10\nlength = 120\n"
                                         "[class_a]\nkind = ar1\nrho = 0.9\nnoise_sd = 1.0\n"
                                         "[class_b]\nkind = white-noise\nnoise_sd = 1.0\n");
    cli::CommonArgs first{synth_cfg, std::nullopt, dir.sub("out1")};
    cli::CommonArgs second{synth_cfg, std::nullopt, dir.sub("out2")};
    REQUIRE(cli::run_synth(first) == 0);
    REQUIRE(cli::run_synth(second) == 0);
    CHECK(slurp(dir.sub("out1") + "/corpus.csv") == slurp(dir.sub("out2") + "/corpus.csv"));

    // seed override changes the bytes
    cli::CommonArgs reseeded{synth_cfg, 99, dir.sub("out3")};
    REQUIRE(cli::run_synth(reseeded) == 0);
    CHECK(slurp(dir.sub("out1") + "/corpus.csv") != slurp(dir.sub("out3") + "/corpus.csv"));
}

TEST_CASE("extract day/night split emits two aligned files") {
    TempDir dir("ek_cli_daynight");
    // events alternating across day and night hours over 30 days
    std::ostringstream events;
    events << "timestamp,state\n";
    for (int day = 0; day < 30; ++day) {
        for (int hour = 0; hour < 24; hour += 2) {
            long long ts = static_cast<long long>(day) * 86400 + hour * 3600;
            events << ts << ',' << (hour % 4 == 0 ? "kitchen" : "lounge") << '\n';
        }
    }
    std::string events_path = dir.file("events.csv", events.str());

    std::string cfg = dir.file("extract.cfg",
                               "[run]\ninput = " + events_path + "\nkind = events\nout = " +
                                   dir.sub("out") +
                                   "\n[window]\nbin_seconds = 3600\ntw2 = 24\nday_night = true\n"
                                   "[features]\nlist = ShannonEn\n");
    REQUIRE(cli::run_extract(cli::CommonArgs{cfg, std::nullopt, std::nullopt}) == 0);
    CHECK(fs::exists(dir.sub("out") + "/features_day.csv"));
    CHECK(fs::exists(dir.sub("out") + "/features_night.csv"));
}

TEST_CASE("weekly day/night extraction with the full Markov feature set") {
    TempDir dir("ek_cli_weekly");
    // three weeks of hourly events cycling through three rooms
    std::ostringstream events;
    events << "timestamp,state\n";
    SplitMix64 rng(77);
    for (int day = 0; day < 21; ++day) {
        for (int hour = 0; hour < 24; ++hour) {
            long long ts = static_cast<long long>(day) * 86400 + hour * 3600 +
                           static_cast<long long>(rng.below(1800));
            const char* room = hour % 3 == 0 ? "kitchen" : (hour % 3 == 1 ? "lounge" : "bedroom");
            events << ts << ',' << room << '\n';
        }
    }
    std::string events_path = dir.file("events.csv", events.str());
    std::string cfg = dir.file(
        "extract.cfg",
        "[run]\ninput = " + events_path + "\nkind = events\nout = " + dir.sub("out") +
            "\nseed = 4\n"
            "[window]\nbin_seconds = 3600\ntw1 = 336\ntw2 = 168\nday_night = true\n"
            "[features]\nlist = ShannonEn,EntropyRate,EP,VNEFreq,VNEDur,DurationDiff\n"
            "[neep]\nepochs = 2\nbatch = 32\nembed_dim = 4\nhidden = 8\n");
    REQUIRE(cli::run_extract(cli::CommonArgs{cfg, std::nullopt, std::nullopt}) == 0);
    for (const char* name : {"features_day.csv", "features_night.csv"}) {
        auto table = csv::read_features(dir.sub("out") + "/" + name);
        CHECK(table.feature_names.size() == 6);
        CHECK(table.rows.size() >= 2); // three weeks give at least two full windows
        for (const auto& row : table.rows)
            for (double v : row) CHECK(std::isfinite(v));
    }
}

TEST_CASE("positive_label collapses multi-class labels to binary") {
    TempDir dir("ek_cli_positive");
    SplitMix64 rng(41);
    std::ostringstream csv;
    csv << "id,label,v1,v2,v3,v4,v5,v6,v7,v8,v9,v10\n";
    for (int i = 0; i < 20; ++i) {
        csv << 'r' << i << ',' << (i % 5 + 1); // five raw classes
        for (int v = 0; v < 10; ++v) csv << ',' << rng.gaussian();
        csv << '\n';
    }
    std::string input = dir.file("signals.csv", csv.str());
    std::string cfg = dir.file("extract.cfg",
                               "[run]\ninput = " + input + "\nkind = signals\nout = " +
                                   dir.sub("out") +
                                   "\npositive_label = 1\n"
                                   "[features]\nlist = PhEn\nPhEn.k = 4\n");
    REQUIRE(cli::run_extract(cli::CommonArgs{cfg, std::nullopt, std::nullopt}) == 0);
    auto table = csv::read_features(dir.sub("out") + "/features.csv");
    std::size_t positives = 0;
    for (const auto& label : table.labels) {
        CHECK((label == "0" || label == "1"));
        positives += label == "1";
    }
    CHECK(positives == 4); // the class-1 rows
}

TEST_CASE("neep accepts a bare trajectory CSV") {
    TempDir dir("ek_cli_traj");
    std::ostringstream traj;
    traj << "state\n";
    for (int i = 0; i < 600; ++i) traj << "s" << (i % 3) << "\n";
    std::string input = dir.file("trajectory.csv", traj.str());
    std::string cfg = dir.file("neep.cfg",
                               "[run]\ninput = " + input + "\nout = " + dir.sub("out") +
                                   "\nseed = 2\n"
                                   "[neep]\nepochs = 2\nbatch = 32\nembed_dim = 4\nhidden = 8\n");
    REQUIRE(cli::run_neep(cli::CommonArgs{cfg, std::nullopt, std::nullopt}) == 0);
    CHECK(fs::exists(dir.sub("out") + "/neep_model.bin"));
}

TEST_CASE("effective_threads respects the environment override") {
    setenv("ENTROPY_KIT_THREADS", "3", 1);
    CHECK(cli::effective_threads(8) == 3);
    unsetenv("ENTROPY_KIT_THREADS");
    CHECK(cli::effective_threads(8) == 8);
    CHECK(cli::effective_threads(0) >= 1);
}
