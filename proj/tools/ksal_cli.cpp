#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "ksal/dataset.hpp"
#include "ksal/errors.hpp"
#include "ksal/harness.hpp"
#include "ksal/image_io.hpp"
#include "ksal/saliency.hpp"

namespace {

// Values given on the command line win over the config file, which wins over
// the built-in defaults.
struct Overrides {
    std::string config_path;
    std::optional<std::string> variant;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<int> working_width;
    std::optional<int> working_height;
    std::optional<int> block_size;
    std::optional<double> threshold;
};

void add_config_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--variant", o.variant, "Channel variant: ks3 or ks7")
        ->check(CLI::IsMember({"ks3", "ks7"}));
    cmd->add_option("--seed", o.seed, "Base seed for the block traversals");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--working-width", o.working_width, "Internal processing width");
    cmd->add_option("--working-height", o.working_height, "Internal processing height");
    cmd->add_option("--block-size", o.block_size, "Square block edge in pixels");
    cmd->add_option("--threshold", o.threshold, "Prediction-error regime threshold");
}

ksal::RunConfig resolve_config(const Overrides& o) {
    ksal::RunConfig cfg =
        o.config_path.empty() ? ksal::RunConfig{} : ksal::load_config(o.config_path);
    auto& sal = cfg.saliency;
    if (o.variant)
        sal.variant = *o.variant == "ks3" ? ksal::ChannelVariant::KS3
                                          : ksal::ChannelVariant::KS7;
    if (o.seed) sal.seed = *o.seed;
    if (o.threads) sal.max_threads = *o.threads;
    if (o.working_width) sal.working_width = *o.working_width;
    if (o.working_height) sal.working_height = *o.working_height;
    if (o.block_size) sal.block_size = *o.block_size;
    if (o.threshold) sal.kalman.error_threshold = *o.threshold;
    return cfg;
}

std::string hex_hash(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void log_run(const ksal::RunConfig& cfg) {
    std::cerr << "ksal: config " << hex_hash(ksal::config_hash(cfg)) << " seed "
              << cfg.saliency.seed << "\n";
}

int run_saliency(const std::string& image_path, const std::string& out_prefix,
                 const std::string& dump_channels, const std::string& dump_stats,
                 const ksal::RunConfig& cfg) {
    ksal::RgbImage img = ksal::load_image(image_path);
    ksal::SaliencyResult result = ksal::compute_saliency(img, cfg.saliency);
    ksal::save_png_gray(result.map, out_prefix + ".png");
    ksal::save_raw_float(result.map, out_prefix + ".raw");

    if (!dump_channels.empty() || !dump_stats.empty()) {
        ksal::RgbImage working = ksal::resize_bilinear(img, cfg.saliency.working_width,
                                                       cfg.saliency.working_height);
        ksal::ChannelSet set = ksal::extract_channels(working, cfg.saliency.variant,
                                                      cfg.saliency.channels);
        if (!dump_channels.empty())
            for (const auto& ch : set.channels)
                ksal::save_png_gray(ch.field, dump_channels + "." + ch.label + ".png");
        if (!dump_stats.empty()) {
            // The statistic maps of the first channel, rescaled for viewing
            // (entropy runs past 1 bit).
            ksal::StatStack stack =
                ksal::make_stat_stack(set.channels.front().field, cfg.saliency.entropy_bins);
            for (int i = 0; i < ksal::StatStack::kCount; ++i)
                ksal::save_png_gray(ksal::normalize_minmax(stack.maps[static_cast<std::size_t>(i)]),
                                    dump_stats + "." + ksal::kStatLabels[static_cast<std::size_t>(i)] +
                                        ".png");
        }
    }
    std::cerr << "ksal: wrote " << out_prefix << ".png and " << out_prefix << ".raw\n";
    return 0;
}

int run_evaluate(const std::string& root, const std::string& manifest,
                 const std::string& report_path, const ksal::RunConfig& cfg) {
    ksal::DatasetIndex index = ksal::build_index(root, manifest);
    ksal::BenchmarkConfig bench{cfg.saliency, cfg.borji, cfg.density};
    ksal::BenchmarkResult result = ksal::run_benchmark(index, bench);

    std::string report = ksal::report_json(result, cfg);
    if (report_path.empty())
        std::cout << report;
    else
        ksal::write_text_file(report_path, report);

    std::cerr << "ksal: evaluated " << result.evaluated << " failed " << result.failed
              << "\n";
    if (result.evaluated == 0) {
        std::cerr << "ksal: no image could be scored\n";
        return 2;
    }
    return result.failed > 0 ? 3 : 0;
}

int run_roc(const std::string& root, const std::string& manifest,
            const std::string& csv_path, int steps, const ksal::RunConfig& cfg) {
    ksal::DatasetIndex index = ksal::build_index(root, manifest);
    ksal::BenchmarkConfig bench{cfg.saliency, cfg.borji, cfg.density};
    ksal::write_roc_csv(ksal::pooled_roc(index, bench, steps), csv_path);
    std::cerr << "ksal: wrote " << csv_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kalman-filter visual saliency"};
    app.require_subcommand(1);

    Overrides overrides;

    std::string image_path, out_prefix, dump_channels, dump_stats;
    CLI::App* saliency = app.add_subcommand("saliency", "Compute one saliency map");
    saliency->add_option("image", image_path, "Input image")->required();
    saliency->add_option("--out", out_prefix, "Output prefix (PREFIX.png, PREFIX.raw)")
        ->required();
    saliency->add_option("--dump-channels", dump_channels,
                         "Also write each feature channel as PREFIX.<label>.png");
    saliency->add_option("--dump-stats", dump_stats,
                         "Also write the first channel's statistic maps");
    add_config_flags(saliency, overrides);

    std::string eval_root, eval_manifest, report_path;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Score a fixation dataset");
    evaluate->add_option("root", eval_root, "Dataset root directory")->required();
    evaluate->add_option("--manifest", eval_manifest, "Dataset manifest JSON");
    evaluate->add_option("--report", report_path, "Report file (default: stdout)");
    add_config_flags(evaluate, overrides);

    std::string roc_root, roc_manifest, csv_path;
    int steps = 256;
    CLI::App* roc = app.add_subcommand("roc", "Dataset-pooled ROC curve");
    roc->add_option("root", roc_root, "Dataset root directory")->required();
    roc->add_option("--manifest", roc_manifest, "Dataset manifest JSON");
    roc->add_option("--csv", csv_path, "Output CSV path")->required();
    roc->add_option("--thresholds", steps, "Threshold count")->check(CLI::Range(2, 65536));
    add_config_flags(roc, overrides);

    CLI::App* print_config =
        app.add_subcommand("print-config", "Print the effective configuration");
    add_config_flags(print_config, overrides);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        ksal::RunConfig cfg = resolve_config(overrides);
        if (app.got_subcommand(print_config)) {
            std::cout << ksal::config_to_json(cfg);
            return 0;
        }
        log_run(cfg);
        if (app.got_subcommand(saliency))
            return run_saliency(image_path, out_prefix, dump_channels, dump_stats, cfg);
        if (app.got_subcommand(evaluate))
            return run_evaluate(eval_root, eval_manifest, report_path, cfg);
        return run_roc(roc_root, roc_manifest, csv_path, steps, cfg);
    } catch (const ksal::ParseError& e) {
        std::cerr << "ksal: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "ksal: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ksal: " << e.what() << "\n";
        return 2;
    }
}
