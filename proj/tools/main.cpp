// sonartex - synthesize texture-controlled sonar-like datasets and score
// arbitrary audio for statistical (StaTS) and structural (StrTS) texture.
//
// Exit codes: 0 success, 1 validation/usage error, 2 runtime or I/O error.
// Progress goes to stderr; machine-readable output goes to stdout or files.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sonartex/dataset_config.hpp"
#include "sonartex/dsp.hpp"
#include "sonartex/errors.hpp"
#include "sonartex/image.hpp"
#include "sonartex/manifest.hpp"
#include "sonartex/report.hpp"
#include "sonartex/synth.hpp"
#include "sonartex/texture.hpp"
#include "sonartex/version.hpp"
#include "sonartex/wav.hpp"

namespace fs = std::filesystem;
using namespace sonartex;

namespace {

int default_workers() {
    if (const char* env = std::getenv("SONARTEX_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
        std::cerr << "warning: ignoring SONARTEX_WORKERS='" << env << "'\n";
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void log_resolved_config(const DatasetSpec& spec) {
    std::cerr << "resolved configuration:\n";
    std::istringstream lines(format_config(spec));
    std::string line;
    while (std::getline(lines, line)) std::cerr << "  " << line << "\n";
}

struct GenerateArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples_per_class;
    int workers = default_workers();
    std::string format = "float32";
};

int cmd_generate(const GenerateArgs& args) {
    DatasetSpec spec = read_config(args.config_path, [](const std::string& msg) {
        std::cerr << "warning: " << msg << "\n";
    });
    // flags override config values, which override built-in defaults
    if (args.seed) spec.master_seed = *args.seed;
    if (args.samples_per_class) spec.samples_per_class = *args.samples_per_class;
    validate(spec);
    log_resolved_config(spec);
    std::cerr << "workers = " << args.workers << "\n";

    GenerateOptions options;
    options.workers = args.workers;
    options.format = args.format == "pcm16" ? WavFormat::pcm16 : WavFormat::float32;

    const auto start = std::chrono::steady_clock::now();
    const Manifest manifest = generate_dataset(spec, args.out_dir, options);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

    std::cerr << "generated " << manifest.rows.size() << " files ("
              << spec.duration_s * static_cast<double>(manifest.rows.size())
              << " s of audio, seed " << spec.master_seed << ") in " << elapsed.count()
              << " s\n";
    std::cout << (fs::path(args.out_dir) / "manifest.csv").string() << "\n";
    return 0;
}

struct ScoreArgs {
    std::string manifest_path;
    std::vector<std::string> inputs;
    std::string out_path;
    std::string format = "csv";
    StaTSParams params;
    int workers = default_workers();
};

int cmd_score(const ScoreArgs& args) {
    Manifest manifest;
    if (!args.manifest_path.empty()) {
        manifest = read_manifest(args.manifest_path);
    } else {
        for (const auto& input : args.inputs) {
            ManifestRow row;
            row.path = fs::absolute(input).string();
            row.class_name = "";
            row.kind = "input";
            manifest.rows.push_back(std::move(row));
        }
    }
    if (manifest.rows.empty()) throw ValidationError("nothing to score");

    std::cerr << "scoring " << manifest.rows.size() << " files (frame_len="
              << args.params.frame_len << " hop=" << args.params.hop << " bins="
              << args.params.n_bins << " workers=" << args.workers << ")\n";

    BatchOptions options;
    options.params = args.params;
    options.workers = args.workers;
    const ScoreReport report = batch_score(manifest, options);

    std::size_t failed = 0;
    for (const auto& f : report.files) {
        if (!f.error.empty()) {
            ++failed;
            std::cerr << "warning: " << f.path << ": " << f.error << "\n";
        }
    }

    const ReportFormat fmt = args.format == "json" ? ReportFormat::json : ReportFormat::csv;
    if (args.out_path.empty())
        std::cout << render_report(report, fmt);
    else
        write_report(report, args.out_path, fmt);

    if (failed == report.files.size()) throw IoError("all input files failed to score");
    return 0;
}

// column-aligned summary table, one row per group
void print_summary_table(const std::vector<GroupStats>& groups) {
    std::size_t name_w = 7;
    for (const auto& g : groups) name_w = std::max(name_w, g.dataset.size());
    std::printf("%-*s %8s %18s %18s\n", static_cast<int>(name_w), "dataset", "n",
                "StrTS (mean+-std)", "StaTS (mean+-std)");
    for (const auto& g : groups) {
        std::printf("%-*s %8zu %9.3f +- %5.3f %9.3f +- %5.3f\n", static_cast<int>(name_w),
                    g.dataset.c_str(), g.n, g.strts_mean, g.strts_std, g.stats_mean,
                    g.stats_std);
    }
}

struct ReportArgs {
    std::vector<std::string> score_paths;
    std::string out_path;
};

int cmd_report(const ReportArgs& args) {
    if (args.score_paths.empty()) throw ValidationError("at least one score report is required");

    // merge keyed by dataset: re-reading the same report replaces its rows,
    // so the merge is idempotent
    ScoreReport merged;
    for (const auto& path : args.score_paths) {
        const auto rows = read_score_csv(path);
        for (const auto& row : rows) {
            auto match = std::find_if(merged.files.begin(), merged.files.end(),
                                      [&](const FileScore& f) {
                                          return f.dataset == row.dataset && f.path == row.path;
                                      });
            if (match != merged.files.end())
                *match = row;
            else
                merged.files.push_back(row);
        }
    }
    summarize_scores(merged);

    print_summary_table(merged.per_dataset);
    if (!args.out_path.empty()) write_report(merged, args.out_path, ReportFormat::csv);
    return 0;
}

struct MatrixOutArgs {
    std::string input;
    std::string out_path;
};

void write_matrix_output(const Matrix& m, const fs::path& out) {
    if (out.extension() == ".png")
        write_png_gray8(m, out);
    else
        write_matrix_csv(m, out);
}

int cmd_ssm(const MatrixOutArgs& args, int frame_len, int hop) {
    const SignalBuffer signal = read_wav(args.input);
    const SelfSimilarityMatrix ssm = self_similarity(signal, frame_len, hop);
    if (ssm.zero_frames > 0)
        std::cerr << "warning: " << ssm.zero_frames << " zero-variance frames\n";
    write_matrix_output(ssm.values, args.out_path);
    std::cout << ssm.values.cols << " x " << ssm.values.rows << "\n";
    return 0;
}

int cmd_spectrogram(const MatrixOutArgs& args, SpectrogramConfig cfg) {
    const SignalBuffer signal = read_wav(args.input);
    cfg.sample_rate_hz = signal.sample_rate_hz;
    const MelSpectrogram mel = log_mel(signal, cfg);
    // image convention: row 0 = lowest mel band, columns = frames
    Matrix image(mel.values.cols, mel.values.rows);
    for (std::size_t f = 0; f < mel.values.rows; ++f)
        for (std::size_t m = 0; m < mel.values.cols; ++m) image(m, f) = mel.values(f, m);
    write_matrix_output(image, args.out_path);
    std::cout << image.cols << " x " << image.rows << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sonartex: texture-controlled sonar-like dataset synthesis and scoring"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("sonartex ") + kVersion +
                                          " (config schema " +
                                          std::to_string(kConfigSchemaVersion) + ")");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Synthesize a dataset from a config file");
    generate->add_option("--config", gen.config_path, "Dataset config file")
        ->required()
        ->check(CLI::ExistingFile);
    generate->add_option("--out", gen.out_dir, "Output directory")->required();
    generate->add_option("--seed", gen.seed, "Master seed (overrides the config)");
    generate->add_option("--samples-per-class", gen.samples_per_class,
                         "Samples per class (overrides the config)");
    generate->add_option("--workers", gen.workers, "Worker threads");
    generate->add_option("--format", gen.format, "WAV sample format")
        ->check(CLI::IsMember({"float32", "pcm16"}));

    ScoreArgs score;
    auto* score_cmd = app.add_subcommand("score", "Score files for StaTS/StrTS texture");
    score_cmd->add_option("--manifest", score.manifest_path, "Manifest CSV of files to score")
        ->check(CLI::ExistingFile);
    score_cmd->add_option("--input,input", score.inputs, "WAV files to score");
    score_cmd->add_option("--out", score.out_path, "Report path (stdout when omitted)");
    score_cmd->add_option("--format", score.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}));
    score_cmd->add_option("--frame-len", score.params.frame_len, "Entropy frame length");
    score_cmd->add_option("--hop", score.params.hop, "Entropy frame hop");
    score_cmd->add_option("--bins", score.params.n_bins, "Histogram bins");
    score_cmd->add_option("--eps", score.params.convergence_eps, "Convergence band fraction");
    score_cmd->add_option("--workers", score.workers, "Worker threads");

    MatrixOutArgs ssm;
    int ssm_frame_len = 2048;
    int ssm_hop = 512;
    auto* ssm_cmd = app.add_subcommand("ssm", "Export a self-similarity matrix");
    ssm_cmd->add_option("--input", ssm.input, "Input WAV")->required()->check(CLI::ExistingFile);
    ssm_cmd->add_option("--out", ssm.out_path, "Output .png or .csv")->required();
    ssm_cmd->add_option("--frame-len", ssm_frame_len, "Frame length");
    ssm_cmd->add_option("--hop", ssm_hop, "Frame hop");

    MatrixOutArgs spec_args;
    SpectrogramConfig spec_cfg;
    auto* spec_cmd = app.add_subcommand("spectrogram", "Export a log-mel spectrogram");
    spec_cmd->add_option("--input", spec_args.input, "Input WAV")
        ->required()
        ->check(CLI::ExistingFile);
    spec_cmd->add_option("--out", spec_args.out_path, "Output .png or .csv")->required();
    spec_cmd->add_option("--window-len", spec_cfg.window_len, "Window length");
    spec_cmd->add_option("--hop", spec_cfg.hop, "Hop size");
    spec_cmd->add_option("--mels", spec_cfg.n_mels, "Mel bins");

    ReportArgs rep;
    auto* report_cmd = app.add_subcommand("report", "Merge score reports into a summary table");
    report_cmd->add_option("--scores", rep.score_paths, "Score report CSVs")->required();
    report_cmd->add_option("--out", rep.out_path, "Summary CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*generate) return cmd_generate(gen);
        if (*score_cmd) return cmd_score(score);
        if (*ssm_cmd) return cmd_ssm(ssm, ssm_frame_len, ssm_hop);
        if (*spec_cmd) return cmd_spectrogram(spec_args, spec_cfg);
        if (*report_cmd) return cmd_report(rep);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
