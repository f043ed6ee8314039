#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ksal/dataset.hpp"
#include "ksal/errors.hpp"
#include "ksal/harness.hpp"
#include "ksal/image_io.hpp"
#include "ksal/saliency.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using ksal::RgbImage;
using ksal::RunConfig;
using ksal::ScalarField;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "ksal_test_harness" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void write_ppm(const fs::path& path, const RgbImage& img) {
    std::ofstream out(path, std::ios::binary);
    out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            ksal::Rgb px = img.at(x, y);
            for (double v : {px.r, px.g, px.b})
                out.put(static_cast<char>(std::lround(v * 255.0)));
        }
}

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

template <typename E, typename Fn>
std::string message_of(Fn&& fn) {
    try {
        fn();
    } catch (const E& e) {
        return e.what();
    }
    return {};
}

// A config touching every key with non-default values.
const char* kFullConfig = R"({
  "variant": "ks3",
  "working_width": 64,
  "working_height": 48,
  "block_size": 8,
  "scales": [1, 2],
  "seed": 99,
  "max_threads": 2,
  "stretch_low": 2.5,
  "stretch_high": 97.5,
  "center_bias": false,
  "center_bias_after_fusion": true,
  "center_bias_sigma_factor": 0.5,
  "entropy_bins": 32,
  "dark_clamp": 0.2,
  "gabor": {"wavelength": 6.0, "sigma": 2.5, "kernel_size": 15},
  "kalman": {"set1_q": 0.2, "set1_r": 1e-9, "set2_q": 1e-9, "set2_r": 0.2,
             "p0": 2.0, "x0": 0.1, "error_threshold": 0.15},
  "borji": {"splits": 10, "samples": 5, "seed": 4},
  "density": {"sigma": 30.0, "reference_width": 600.0, "reference_height": 400.0}
})";

fs::path make_benchmark_root(const std::string& name,
                             const std::vector<std::string>& ids) {
    fs::path root = fresh_dir(name);
    fs::create_directories(root / "images");
    fs::create_directories(root / "fixations");
    oracle::Rng rng(4242);
    for (const auto& id : ids) {
        write_ppm(root / "images" / (id + ".ppm"), oracle::random_image(rng, 40, 30));
        write_text(root / "fixations" / (id + ".csv"), "x,y\n5,5\n20,15\n35,25\n10,8\n");
    }
    return root;
}

ksal::BenchmarkConfig small_benchmark() {
    ksal::BenchmarkConfig cfg;
    cfg.saliency.variant = ksal::ChannelVariant::KS3;
    cfg.saliency.working_width = 32;
    cfg.saliency.working_height = 24;
    cfg.saliency.block_size = 8;
    cfg.saliency.scales = {1};
    cfg.saliency.entropy_bins = 16;
    cfg.saliency.seed = 7;
    cfg.borji.splits = 20;
    cfg.borji.seed = 3;
    return cfg;
}

}  // namespace

TEST_CASE("an empty config document means the defaults") {
    RunConfig parsed = ksal::config_from_json("{}");
    CHECK(ksal::config_to_json(parsed) == ksal::config_to_json(RunConfig{}));
    CHECK(ksal::config_hash(parsed) == ksal::config_hash(RunConfig{}));
}

TEST_CASE("every config key overrides its field") {
    RunConfig cfg = ksal::config_from_json(kFullConfig);
    const auto& sal = cfg.saliency;
    CHECK(sal.variant == ksal::ChannelVariant::KS3);
    CHECK(sal.working_width == 64);
    CHECK(sal.working_height == 48);
    CHECK(sal.block_size == 8);
    CHECK(sal.scales == std::vector<int>{1, 2});
    CHECK(sal.seed == 99);
    CHECK(sal.max_threads == 2);
    CHECK(sal.stretch_low == 2.5);
    CHECK(sal.stretch_high == 97.5);
    CHECK_FALSE(sal.center_bias);
    CHECK(sal.center_bias_after_fusion);
    CHECK(sal.center_bias_sigma_factor == 0.5);
    CHECK(sal.entropy_bins == 32);
    CHECK(sal.channels.dark_clamp == 0.2);
    CHECK(sal.channels.gabor.wavelength == 6.0);
    CHECK(sal.channels.gabor.sigma == 2.5);
    CHECK(sal.channels.gabor.kernel_size == 15);
    CHECK(sal.kalman.set1.q == 0.2);
    CHECK(sal.kalman.set1.r == 1e-9);
    CHECK(sal.kalman.set2.q == 1e-9);
    CHECK(sal.kalman.set2.r == 0.2);
    CHECK(sal.kalman.p0 == 2.0);
    CHECK(sal.kalman.x0 == 0.1);
    CHECK(sal.kalman.error_threshold == 0.15);
    CHECK(cfg.borji.splits == 10);
    CHECK(cfg.borji.samples == 5);
    CHECK(cfg.borji.seed == 4);
    CHECK(cfg.density.sigma == 30.0);
    CHECK(cfg.density.reference_width == 600.0);
    CHECK(cfg.density.reference_height == 400.0);
}

TEST_CASE("unknown and ill-typed config keys are rejected by name") {
    std::string msg =
        message_of<ksal::ParseError>([] { ksal::config_from_json("{\"bogus\": 1}"); });
    CHECK(contains(msg, "unknown config key"));
    CHECK(contains(msg, "bogus"));

    msg = message_of<ksal::ParseError>(
        [] { ksal::config_from_json("{\"gabor\": {\"foo\": 1}}"); });
    CHECK(contains(msg, "gabor.foo"));

    msg = message_of<ksal::ParseError>(
        [] { ksal::config_from_json("{\"borji\": {\"shuffles\": 3}}"); });
    CHECK(contains(msg, "borji.shuffles"));

    msg = message_of<ksal::ParseError>(
        [] { ksal::config_from_json("{\"working_width\": \"wide\"}"); });
    CHECK(contains(msg, "working_width"));
    CHECK(contains(msg, "wrong type"));

    msg = message_of<ksal::ParseError>(
        [] { ksal::config_from_json("{\"kalman\": {\"p0\": \"big\"}}"); });
    CHECK(contains(msg, "kalman.p0"));

    CHECK_THROWS_AS(ksal::config_from_json("{\"gabor\": 3}"), ksal::ParseError);
    CHECK_THROWS_AS(ksal::config_from_json("{\"variant\": \"ks5\"}"), ksal::ParseError);
    CHECK_THROWS_AS(ksal::config_from_json("{\"scales\": \"all\"}"), ksal::ParseError);
    CHECK_THROWS_AS(ksal::config_from_json("[1, 2]"), ksal::ParseError);
    CHECK_THROWS_AS(ksal::config_from_json("{"), ksal::ParseError);
}

TEST_CASE("the canonical rendering round-trips and pins the key order") {
    RunConfig cfg = ksal::config_from_json(kFullConfig);
    std::string text = ksal::config_to_json(cfg);
    CHECK(text.back() == '\n');

    // Parse -> render is the identity on canonical text.
    CHECK(ksal::config_to_json(ksal::config_from_json(text)) == text);

    auto doc = nlohmann::ordered_json::parse(text);
    std::vector<std::string> keys;
    for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{
                      "variant", "working_width", "working_height", "block_size",
                      "scales", "seed", "max_threads", "stretch_low", "stretch_high",
                      "center_bias", "center_bias_after_fusion",
                      "center_bias_sigma_factor", "entropy_bins", "dark_clamp",
                      "gabor", "kalman", "borji", "density"});
}

TEST_CASE("config hashes separate configs and follow the canonical text") {
    RunConfig a;
    RunConfig b = ksal::config_from_json("{\"seed\": 1}");
    CHECK(ksal::config_hash(a) == ksal::fnv1a64(ksal::config_to_json(a)));
    CHECK(ksal::config_hash(a) != ksal::config_hash(b));

    RunConfig c = ksal::config_from_json("{\"borji\": {\"seed\": 1}}");
    CHECK(ksal::config_hash(b) != ksal::config_hash(c));
    CHECK(ksal::config_hash(c) != ksal::config_hash(a));
}

TEST_CASE("load_config reads a file and reports unreadable paths") {
    fs::path dir = fresh_dir("config");
    write_text(dir / "run.json", "{\"seed\": 21, \"variant\": \"ks3\"}");
    RunConfig cfg = ksal::load_config((dir / "run.json").string());
    CHECK(cfg.saliency.seed == 21);
    CHECK(cfg.saliency.variant == ksal::ChannelVariant::KS3);

    CHECK_THROWS_AS(ksal::load_config((dir / "absent.json").string()), ksal::IoError);
}

TEST_CASE("report_json renders scores, failures and means deterministically") {
    ksal::BenchmarkResult result;
    ksal::ImageResult good;
    good.id = "img1";
    good.ok = true;
    good.scores.auc_judd = 0.75;
    good.scores.auc_borji = 0.625;
    good.scores.cc = 0.5;
    good.scores.sim = 0.25;
    good.scores.nss = 1.5;
    ksal::ImageResult bad;
    bad.id = "img2";
    bad.ok = false;
    bad.error = "cannot decode";
    result.images = {good, bad};
    result.evaluated = 1;
    result.failed = 1;
    result.mean = good.scores;

    RunConfig cfg = ksal::config_from_json("{\"seed\": 5}");
    std::string text = ksal::report_json(result, cfg);
    CHECK(ksal::report_json(result, cfg) == text);

    char expected_hash[19];
    std::snprintf(expected_hash, sizeof expected_hash, "0x%016llx",
                  static_cast<unsigned long long>(ksal::config_hash(cfg)));

    auto doc = nlohmann::json::parse(text);
    CHECK(doc.at("config_hash").get<std::string>() == expected_hash);
    CHECK(doc.at("seed").get<std::uint64_t>() == 5);
    CHECK(doc.at("evaluated").get<int>() == 1);
    CHECK(doc.at("failed").get<int>() == 1);
    REQUIRE(doc.at("images").size() == 2);
    CHECK(doc.at("images")[0].at("id").get<std::string>() == "img1");
    CHECK(doc.at("images")[0].at("status").get<std::string>() == "ok");
    CHECK(doc.at("images")[0].at("auc_judd").get<double>() == 0.75);
    CHECK(doc.at("images")[0].at("auc_borji").get<double>() == 0.625);
    CHECK(doc.at("images")[0].at("cc").get<double>() == 0.5);
    CHECK(doc.at("images")[0].at("sim").get<double>() == 0.25);
    CHECK(doc.at("images")[0].at("nss").get<double>() == 1.5);
    CHECK(doc.at("images")[1].at("status").get<std::string>() == "failed");
    CHECK(doc.at("images")[1].at("error").get<std::string>() == "cannot decode");
    CHECK_FALSE(doc.at("images")[1].contains("auc_judd"));
    CHECK(doc.at("mean").at("nss").get<double>() == 1.5);
}

TEST_CASE("pooled_roc matches a per-pixel recount and skips failed images") {
    fs::path root = make_benchmark_root("roc", {"p", "q", "r"});
    write_text(root / "images" / "r.ppm", "broken\n");
    ksal::DatasetIndex index = ksal::build_index(root.string());
    ksal::BenchmarkConfig cfg = small_benchmark();

    const int steps = 11;
    std::vector<ksal::RocPoint> curve = ksal::pooled_roc(index, cfg, steps);
    REQUIRE(curve.size() == steps);
    CHECK(curve.front().threshold == 0.0);
    CHECK(curve.front().fpr == 1.0);
    CHECK(curve.front().tpr == 1.0);
    CHECK(curve.back().threshold == 1.0);
    for (int j = 1; j < steps; ++j) {
        CHECK(curve[j].threshold > curve[j - 1].threshold);
        CHECK(curve[j].fpr <= curve[j - 1].fpr);
        CHECK(curve[j].tpr <= curve[j - 1].tpr);
    }

    // Recount directly: pool >=-threshold hits over the two readable images.
    std::vector<double> pos_ge(steps, 0.0), neg_ge(steps, 0.0);
    double npos = 0.0, nneg = 0.0;
    for (const auto& entry : index.entries) {
        if (entry.id == "r") continue;
        RgbImage img = ksal::load_image(entry.image_path);
        ksal::FixationRecord rec =
            ksal::load_fixations(entry.fixation_path, img.width(), img.height());
        ksal::SaliencyConfig sal_cfg = cfg.saliency;
        sal_cfg.seed = ksal::fnv1a64(entry.id) ^ cfg.saliency.seed;
        sal_cfg.max_threads = 1;
        ScalarField sal = ksal::resize_bilinear(ksal::compute_saliency(img, sal_cfg).map,
                                                rec.width, rec.height);
        std::vector<char> mask(sal.size(), 0);
        for (const auto& f : rec.points)
            mask[sal.index(static_cast<int>(std::lround(f.x)),
                           static_cast<int>(std::lround(f.y)))] = 1;
        for (std::size_t p = 0; p < sal.size(); ++p) {
            (mask[p] ? npos : nneg) += 1.0;
            for (int j = 0; j < steps; ++j) {
                double t = static_cast<double>(j) / (steps - 1);
                if (sal[p] >= t) (mask[p] ? pos_ge : neg_ge)[j] += 1.0;
            }
        }
    }
    for (int j = 0; j < steps; ++j) {
        CHECK(curve[j].threshold == static_cast<double>(j) / (steps - 1));
        CHECK(curve[j].fpr == neg_ge[j] / nneg);
        CHECK(curve[j].tpr == pos_ge[j] / npos);
    }

    CHECK_THROWS_AS(ksal::pooled_roc(index, cfg, 1), std::invalid_argument);

    // Nothing readable -> nothing pooled.
    fs::path dead = make_benchmark_root("roc_dead", {"only"});
    write_text(dead / "images" / "only.ppm", "broken\n");
    ksal::DatasetIndex dead_index = ksal::build_index(dead.string());
    CHECK_THROWS_AS(ksal::pooled_roc(dead_index, cfg, steps), ksal::IoError);
}

TEST_CASE("write_roc_csv renders shortest round-trip decimals") {
    fs::path dir = fresh_dir("csv");
    std::vector<ksal::RocPoint> curve = {
        {0.0, 1.0, 1.0}, {0.5, 0.25, 0.75}, {1.0, 0.0, 0.125}};
    fs::path path = dir / "curve.csv";
    ksal::write_roc_csv(curve, path.string());

    std::ifstream in(path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text == "threshold,fpr,tpr\n0,1,1\n0.5,0.25,0.75\n1,0,0.125\n");
}

TEST_CASE("write_text_file round-trips bytes and reports unwritable paths") {
    fs::path dir = fresh_dir("textfile");
    std::string content = "line one\nline two\n\x01\x02 binary tail";
    ksal::write_text_file((dir / "out.txt").string(), content);

    std::ifstream in(dir / "out.txt", std::ios::binary);
    std::string back((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(back == content);

    CHECK_THROWS_AS(ksal::write_text_file((dir / "no" / "such" / "dir.txt").string(), "x"),
                    ksal::IoError);
}
