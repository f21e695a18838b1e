// End-to-end tests that drive the installed CLI binary (path injected by the
// build as SONARTEX_CLI_PATH).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "oracles.hpp"
#include "sonartex/dataset_config.hpp"
#include "sonartex/manifest.hpp"
#include "sonartex/report.hpp"
#include "sonartex/rng.hpp"
#include "sonartex/wav.hpp"

using namespace sonartex;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args, const std::filesystem::path& dir) {
    const std::filesystem::path out = dir / "stdout.txt";
    const std::string cmd = std::string(SONARTEX_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.stdout_text = ss.str();
    return r;
}

std::string file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_small_config(const std::filesystem::path& p, int per_class, std::uint64_t seed) {
    std::ofstream f(p);
    f << "kind = mixed\n";
    f << "duration_s = 1.0\n";
    f << "samples_per_class = " << per_class << "\n";
    f << "seed = " << seed << "\n";
}

SignalBuffer make_sine(double freq_hz, double seconds, std::uint32_t rate) {
    SignalBuffer s;
    s.sample_rate_hz = rate;
    s.samples.resize(static_cast<std::size_t>(seconds * rate));
    for (std::size_t t = 0; t < s.samples.size(); ++t)
        s.samples[t] =
            0.9 * std::sin(2.0 * M_PI * freq_hz * static_cast<double>(t) / rate);
    return s;
}

} // namespace

TEST_CASE("--version reports the toolkit and config schema versions") {
    oracle::TmpDir tmp("cli_version");
    const RunResult r = run_cli("--version", tmp.path);
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("sonartex") != std::string::npos);
    CHECK(r.stdout_text.find("config schema") != std::string::npos);
}

TEST_CASE("generate twice with the same seed is byte-identical, workers included") {
    oracle::TmpDir tmp("cli_gen");
    write_small_config(tmp.path / "mixed.cfg", 2, 7);

    auto gen = [&](const std::string& out, int workers) {
        return run_cli("generate --config " + (tmp.path / "mixed.cfg").string() + " --out " +
                           (tmp.path / out).string() + " --workers " + std::to_string(workers),
                       tmp.path);
    };
    REQUIRE(gen("d1", 1).exit_code == 0);
    REQUIRE(gen("d2", 8).exit_code == 0);

    const Manifest m = read_manifest(tmp.path / "d1" / "manifest.csv");
    REQUIRE(m.rows.size() == 8);
    CHECK(file_bytes(tmp.path / "d1" / "manifest.csv") ==
          file_bytes(tmp.path / "d2" / "manifest.csv"));
    for (const auto& row : m.rows)
        REQUIRE(file_bytes(tmp.path / "d1" / row.path) == file_bytes(tmp.path / "d2" / row.path));
}

TEST_CASE("generate with a missing config exits 1") {
    oracle::TmpDir tmp("cli_gen_bad");
    const RunResult r = run_cli("generate --config /nonexistent.cfg --out " +
                                    (tmp.path / "out").string(),
                                tmp.path);
    CHECK(r.exit_code == 1);
}

TEST_CASE("generate --seed overrides the config seed") {
    oracle::TmpDir tmp("cli_seed");
    write_small_config(tmp.path / "mixed.cfg", 1, 7);
    REQUIRE(run_cli("generate --config " + (tmp.path / "mixed.cfg").string() + " --out " +
                        (tmp.path / "a").string() + " --seed 99",
                    tmp.path)
                .exit_code == 0);
    const Manifest m = read_manifest(tmp.path / "a" / "manifest.csv");
    CHECK(m.rows[0].seed == derive_seed(99, 0, 1, 0));
}

TEST_CASE("score on a sine reports StrTS near 5; exit codes follow the contract") {
    oracle::TmpDir tmp("cli_score");
    write_wav(make_sine(440.0, 5.0, 32000), tmp.path / "sine.wav");

    const RunResult r = run_cli("score --input " + (tmp.path / "sine.wav").string() + " --out " +
                                    (tmp.path / "report.csv").string(),
                                tmp.path);
    REQUIRE(r.exit_code == 0);
    const auto rows = read_score_csv(tmp.path / "report.csv");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].strts == doctest::Approx(5.0).epsilon(0.02));

    // all inputs unreadable -> exit 2
    CHECK(run_cli("score --input /does/not/exist.wav", tmp.path).exit_code == 2);
    // nothing to score -> exit 1
    CHECK(run_cli("score", tmp.path).exit_code == 1);
}

TEST_CASE("score resamples non-32 kHz input automatically") {
    oracle::TmpDir tmp("cli_rate");
    write_wav(make_sine(1000.0, 2.0, 48000), tmp.path / "hi.wav");
    const RunResult r = run_cli("score --input " + (tmp.path / "hi.wav").string(), tmp.path);
    REQUIRE(r.exit_code == 0);
    // stdout CSV: the strts column of the single row should be near 5
    std::istringstream in(r.stdout_text);
    std::string line;
    std::getline(in, line); // header
    std::getline(in, line);
    const auto last_comma = line.rfind(',');
    const auto prev_comma = line.rfind(',', last_comma - 1);
    const double strts = std::stod(line.substr(prev_comma + 1, last_comma - prev_comma - 1));
    CHECK(strts > 4.8);
}

TEST_CASE("score --bins 2 keeps scores in range") {
    oracle::TmpDir tmp("cli_bins");
    Rng rng(5);
    SignalBuffer noise;
    noise.sample_rate_hz = 32000;
    noise.samples.resize(64000);
    for (auto& s : noise.samples) s = 0.5 * rng.uniform(-1.0, 1.0);
    write_wav(noise, tmp.path / "n.wav");
    const RunResult r = run_cli("score --bins 2 --frame-len 512 --hop 256 --input " +
                                    (tmp.path / "n.wav").string() + " --out " +
                                    (tmp.path / "r.csv").string(),
                                tmp.path);
    REQUIRE(r.exit_code == 0);
    const auto rows = read_score_csv(tmp.path / "r.csv");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].stats >= 0.0);
    CHECK(rows[0].stats <= 5.0);
}

TEST_CASE("ssm produces a square image and detectable stripes in CSV") {
    oracle::TmpDir tmp("cli_ssm");
    // period = 2 * hop so frames two apart repeat
    write_wav(make_sine(32000.0 / 1024.0, 2.0, 32000), tmp.path / "p.wav");

    const RunResult png = run_cli("ssm --input " + (tmp.path / "p.wav").string() + " --out " +
                                      (tmp.path / "m.png").string() + " --frame-len 2048 --hop 512",
                                  tmp.path);
    REQUIRE(png.exit_code == 0);
    // dimensions printed as "N x N"
    std::size_t w = 0, h = 0;
    char x = 0;
    std::istringstream(png.stdout_text) >> w >> x >> h;
    CHECK(w == h);
    CHECK(w == (64000 - 2048) / 512 + 1);
    CHECK(std::filesystem::exists(tmp.path / "m.png"));

    const RunResult csv = run_cli("ssm --input " + (tmp.path / "p.wav").string() + " --out " +
                                      (tmp.path / "m.csv").string() + " --frame-len 2048 --hop 512",
                                  tmp.path);
    REQUIRE(csv.exit_code == 0);
    // stripe oracle: row 0, offset 2 should be near 1
    std::ifstream in(tmp.path / "m.csv");
    std::string line;
    std::getline(in, line);
    std::istringstream row(line);
    std::string cell;
    std::vector<double> first_row;
    while (std::getline(row, cell, ',')) first_row.push_back(std::stod(cell));
    REQUIRE(first_row.size() == w);
    CHECK(first_row[2] > 0.9);

    CHECK(run_cli("ssm --input /missing.wav --out " + (tmp.path / "x.png").string(), tmp.path)
              .exit_code != 0);
}

TEST_CASE("spectrogram of a 5 s clip is 497 frames wide") {
    oracle::TmpDir tmp("cli_spec");
    write_wav(make_sine(2000.0, 5.0, 32000), tmp.path / "c.wav");
    const RunResult r = run_cli("spectrogram --input " + (tmp.path / "c.wav").string() +
                                    " --out " + (tmp.path / "s.png").string(),
                                tmp.path);
    REQUIRE(r.exit_code == 0);
    std::size_t w = 0, h = 0;
    char x = 0;
    std::istringstream(r.stdout_text) >> w >> x >> h;
    CHECK(w == 497);
    CHECK(h == 1024);
    CHECK(std::filesystem::exists(tmp.path / "s.png"));
}

TEST_CASE("report merges score CSVs idempotently") {
    oracle::TmpDir tmp("cli_report");
    write_wav(make_sine(440.0, 2.0, 32000), tmp.path / "a.wav");
    write_wav(make_sine(880.0, 2.0, 32000), tmp.path / "b.wav");
    REQUIRE(run_cli("score --input " + (tmp.path / "a.wav").string() + " " +
                        (tmp.path / "b.wav").string() + " --out " + (tmp.path / "s.csv").string(),
                    tmp.path)
                .exit_code == 0);

    const RunResult once =
        run_cli("report --scores " + (tmp.path / "s.csv").string() + " --out " +
                    (tmp.path / "sum1.csv").string(),
                tmp.path);
    REQUIRE(once.exit_code == 0);
    CHECK(once.stdout_text.find("input") != std::string::npos);

    // the same report twice: identical summary (merge keyed by dataset + file)
    const RunResult twice =
        run_cli("report --scores " + (tmp.path / "s.csv").string() + " " +
                    (tmp.path / "s.csv").string() + " --out " + (tmp.path / "sum2.csv").string(),
                tmp.path);
    REQUIRE(twice.exit_code == 0);
    CHECK(once.stdout_text == twice.stdout_text);
    CHECK(file_bytes(tmp.path / "sum1.csv") == file_bytes(tmp.path / "sum2.csv"));

    // no inputs -> exit 1
    CHECK(run_cli("report", tmp.path).exit_code == 1);
}

TEST_CASE("SONARTEX_WORKERS sets the default worker count") {
    oracle::TmpDir tmp("cli_env");
    write_small_config(tmp.path / "c.cfg", 1, 5);
    const std::filesystem::path out = tmp.path / "stdout.txt";
    const std::string cmd = std::string("SONARTEX_WORKERS=3 ") + SONARTEX_CLI_PATH +
                            " generate --config " + (tmp.path / "c.cfg").string() + " --out " +
                            (tmp.path / "d").string() + " > " + out.string() + " 2> " +
                            (tmp.path / "stderr.txt").string();
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::ifstream err(tmp.path / "stderr.txt");
    std::stringstream ss;
    ss << err.rdbuf();
    CHECK(ss.str().find("workers = 3") != std::string::npos);
}

TEST_CASE("generate summary reports the file count") {
    oracle::TmpDir tmp("cli_count");
    write_small_config(tmp.path / "c.cfg", 10, 3);
    const RunResult r = run_cli("generate --config " + (tmp.path / "c.cfg").string() + " --out " +
                                    (tmp.path / "d").string(),
                                tmp.path);
    REQUIRE(r.exit_code == 0);
    std::ifstream err(tmp.path / "stderr.txt");
    std::stringstream ss;
    ss << err.rdbuf();
    CHECK(ss.str().find("generated 40 files") != std::string::npos);
    CHECK(ss.str().find("resolved configuration") != std::string::npos);
}
