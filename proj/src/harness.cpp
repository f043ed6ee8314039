#include "ksal/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ksal/errors.hpp"
#include "ksal/image_io.hpp"
#include "ksal/parallel.hpp"

namespace ksal {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown(const json& obj, std::initializer_list<const char*> keys,
                    const std::string& prefix) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) throw ParseError("unknown config key: " + prefix + it.key());
    }
}

const json* subobject(const json& doc, const char* key) {
    if (!doc.contains(key)) return nullptr;
    const json& sub = doc.at(key);
    if (!sub.is_object())
        throw ParseError(std::string("config key '") + key + "' must be an object");
    return &sub;
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& prefix) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParseError("config key '" + prefix + key + "' has the wrong type");
    }
}

std::string hex64(std::uint64_t v) {
    char buf[19] = "0x";
    static const char* digits = "0123456789abcdef";
    for (int i = 0; i < 16; ++i) buf[2 + i] = digits[(v >> (60 - 4 * i)) & 0xf];
    buf[18] = '\0';
    return buf;
}

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

}  // namespace

RunConfig config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config: expected a JSON object");

    reject_unknown(doc,
                   {"variant", "working_width", "working_height", "block_size",
                    "scales", "seed", "max_threads", "stretch_low", "stretch_high",
                    "center_bias", "center_bias_after_fusion",
                    "center_bias_sigma_factor", "entropy_bins", "gabor", "dark_clamp",
                    "kalman", "borji", "density"},
                   "");

    RunConfig cfg;
    auto& sal = cfg.saliency;

    if (doc.contains("variant")) {
        std::string v;
        read(doc, "variant", v, "");
        if (v == "ks3")
            sal.variant = ChannelVariant::KS3;
        else if (v == "ks7")
            sal.variant = ChannelVariant::KS7;
        else
            throw ParseError("config key 'variant' must be \"ks3\" or \"ks7\"");
    }
    read(doc, "working_width", sal.working_width, "");
    read(doc, "working_height", sal.working_height, "");
    read(doc, "block_size", sal.block_size, "");
    read(doc, "scales", sal.scales, "");
    read(doc, "seed", sal.seed, "");
    read(doc, "max_threads", sal.max_threads, "");
    read(doc, "stretch_low", sal.stretch_low, "");
    read(doc, "stretch_high", sal.stretch_high, "");
    read(doc, "center_bias", sal.center_bias, "");
    read(doc, "center_bias_after_fusion", sal.center_bias_after_fusion, "");
    read(doc, "center_bias_sigma_factor", sal.center_bias_sigma_factor, "");
    read(doc, "entropy_bins", sal.entropy_bins, "");
    read(doc, "dark_clamp", sal.channels.dark_clamp, "");

    if (const json* gabor = subobject(doc, "gabor")) {
        reject_unknown(*gabor, {"wavelength", "sigma", "kernel_size"}, "gabor.");
        read(*gabor, "wavelength", sal.channels.gabor.wavelength, "gabor.");
        read(*gabor, "sigma", sal.channels.gabor.sigma, "gabor.");
        read(*gabor, "kernel_size", sal.channels.gabor.kernel_size, "gabor.");
    }
    if (const json* kalman = subobject(doc, "kalman")) {
        reject_unknown(*kalman,
                       {"set1_q", "set1_r", "set2_q", "set2_r", "p0", "x0",
                        "error_threshold"},
                       "kalman.");
        read(*kalman, "set1_q", sal.kalman.set1.q, "kalman.");
        read(*kalman, "set1_r", sal.kalman.set1.r, "kalman.");
        read(*kalman, "set2_q", sal.kalman.set2.q, "kalman.");
        read(*kalman, "set2_r", sal.kalman.set2.r, "kalman.");
        read(*kalman, "p0", sal.kalman.p0, "kalman.");
        read(*kalman, "x0", sal.kalman.x0, "kalman.");
        read(*kalman, "error_threshold", sal.kalman.error_threshold, "kalman.");
    }
    if (const json* borji = subobject(doc, "borji")) {
        reject_unknown(*borji, {"splits", "samples", "seed"}, "borji.");
        read(*borji, "splits", cfg.borji.splits, "borji.");
        read(*borji, "samples", cfg.borji.samples, "borji.");
        read(*borji, "seed", cfg.borji.seed, "borji.");
    }
    if (const json* density = subobject(doc, "density")) {
        reject_unknown(*density, {"sigma", "reference_width", "reference_height"},
                       "density.");
        read(*density, "sigma", cfg.density.sigma, "density.");
        read(*density, "reference_width", cfg.density.reference_width, "density.");
        read(*density, "reference_height", cfg.density.reference_height, "density.");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

std::string config_to_json(const RunConfig& cfg) {
    const auto& sal = cfg.saliency;
    ordered_json doc;
    doc["variant"] = sal.variant == ChannelVariant::KS3 ? "ks3" : "ks7";
    doc["working_width"] = sal.working_width;
    doc["working_height"] = sal.working_height;
    doc["block_size"] = sal.block_size;
    doc["scales"] = sal.scales;
    doc["seed"] = sal.seed;
    doc["max_threads"] = sal.max_threads;
    doc["stretch_low"] = sal.stretch_low;
    doc["stretch_high"] = sal.stretch_high;
    doc["center_bias"] = sal.center_bias;
    doc["center_bias_after_fusion"] = sal.center_bias_after_fusion;
    doc["center_bias_sigma_factor"] = sal.center_bias_sigma_factor;
    doc["entropy_bins"] = sal.entropy_bins;
    doc["dark_clamp"] = sal.channels.dark_clamp;
    doc["gabor"] = {{"wavelength", sal.channels.gabor.wavelength},
                    {"sigma", sal.channels.gabor.sigma},
                    {"kernel_size", sal.channels.gabor.kernel_size}};
    doc["kalman"] = {{"set1_q", sal.kalman.set1.q},   {"set1_r", sal.kalman.set1.r},
                     {"set2_q", sal.kalman.set2.q},   {"set2_r", sal.kalman.set2.r},
                     {"p0", sal.kalman.p0},           {"x0", sal.kalman.x0},
                     {"error_threshold", sal.kalman.error_threshold}};
    doc["borji"] = {{"splits", cfg.borji.splits},
                    {"samples", cfg.borji.samples},
                    {"seed", cfg.borji.seed}};
    doc["density"] = {{"sigma", cfg.density.sigma},
                      {"reference_width", cfg.density.reference_width},
                      {"reference_height", cfg.density.reference_height}};
    return doc.dump(2) + "\n";
}

std::uint64_t config_hash(const RunConfig& cfg) { return fnv1a64(config_to_json(cfg)); }

std::string report_json(const BenchmarkResult& result, const RunConfig& config) {
    ordered_json doc;
    doc["config_hash"] = hex64(config_hash(config));
    doc["seed"] = config.saliency.seed;
    doc["evaluated"] = result.evaluated;
    doc["failed"] = result.failed;

    ordered_json images = ordered_json::array();
    for (const auto& r : result.images) {
        ordered_json row;
        row["id"] = r.id;
        if (r.ok) {
            row["status"] = "ok";
            row["auc_judd"] = r.scores.auc_judd;
            row["auc_borji"] = r.scores.auc_borji;
            row["cc"] = r.scores.cc;
            row["sim"] = r.scores.sim;
            row["nss"] = r.scores.nss;
        } else {
            row["status"] = "failed";
            row["error"] = r.error;
        }
        images.push_back(std::move(row));
    }
    doc["images"] = std::move(images);
    doc["mean"] = {{"auc_judd", result.mean.auc_judd},
                   {"auc_borji", result.mean.auc_borji},
                   {"cc", result.mean.cc},
                   {"sim", result.mean.sim},
                   {"nss", result.mean.nss}};
    return doc.dump(2) + "\n";
}

std::vector<RocPoint> pooled_roc(const DatasetIndex& index, const BenchmarkConfig& config,
                                 int steps) {
    if (steps < 2) throw std::invalid_argument("pooled_roc: steps must be >= 2");

    struct Counts {
        bool ok = false;
        std::vector<double> pos_ge, neg_ge;  // per threshold, ascending j
        double npos = 0.0, nneg = 0.0;
    };
    std::vector<Counts> counts(index.entries.size());

    int threads = resolve_threads(config.saliency.max_threads);
    parallel_for(static_cast<int>(index.entries.size()), threads, [&](int i) {
        const DatasetEntry& entry = index.entries[static_cast<std::size_t>(i)];
        Counts& c = counts[static_cast<std::size_t>(i)];
        try {
            RgbImage img = load_image(entry.image_path);
            FixationRecord record =
                load_fixations(entry.fixation_path, img.width(), img.height());

            SaliencyConfig cfg = config.saliency;
            cfg.seed = fnv1a64(entry.id) ^ config.saliency.seed;
            cfg.max_threads = 1;
            ScalarField sal = resize_bilinear(compute_saliency(img, cfg).map,
                                              record.width, record.height);

            std::vector<char> mask(sal.size(), 0);
            for (const auto& f : record.points) {
                int x = static_cast<int>(std::lround(f.x));
                int y = static_cast<int>(std::lround(f.y));
                if (x < 0 || x >= sal.width() || y < 0 || y >= sal.height())
                    throw std::invalid_argument("fixation outside map");
                mask[sal.index(x, y)] = 1;
            }
            std::vector<double> pos, neg;
            for (std::size_t p = 0; p < sal.size(); ++p)
                (mask[p] ? pos : neg).push_back(sal[p]);
            std::sort(pos.begin(), pos.end());
            std::sort(neg.begin(), neg.end());

            c.pos_ge.resize(static_cast<std::size_t>(steps));
            c.neg_ge.resize(static_cast<std::size_t>(steps));
            for (int j = 0; j < steps; ++j) {
                double t = static_cast<double>(j) / (steps - 1);
                auto ge = [t](const std::vector<double>& v) {
                    return static_cast<double>(
                        v.end() - std::lower_bound(v.begin(), v.end(), t));
                };
                c.pos_ge[static_cast<std::size_t>(j)] = ge(pos);
                c.neg_ge[static_cast<std::size_t>(j)] = ge(neg);
            }
            c.npos = static_cast<double>(pos.size());
            c.nneg = static_cast<double>(neg.size());
            c.ok = true;
        } catch (const std::exception&) {
            c.ok = false;
        }
    });

    std::vector<double> pos_ge(static_cast<std::size_t>(steps), 0.0);
    std::vector<double> neg_ge(static_cast<std::size_t>(steps), 0.0);
    double npos = 0.0, nneg = 0.0;
    for (const auto& c : counts) {
        if (!c.ok) continue;
        for (int j = 0; j < steps; ++j) {
            pos_ge[static_cast<std::size_t>(j)] += c.pos_ge[static_cast<std::size_t>(j)];
            neg_ge[static_cast<std::size_t>(j)] += c.neg_ge[static_cast<std::size_t>(j)];
        }
        npos += c.npos;
        nneg += c.nneg;
    }
    if (npos == 0.0 || nneg == 0.0) throw IoError("pooled_roc: no images evaluated");

    std::vector<RocPoint> curve(static_cast<std::size_t>(steps));
    for (int j = 0; j < steps; ++j) {
        curve[static_cast<std::size_t>(j)] = {
            static_cast<double>(j) / (steps - 1),
            neg_ge[static_cast<std::size_t>(j)] / nneg,
            pos_ge[static_cast<std::size_t>(j)] / npos};
    }
    return curve;
}

void write_roc_csv(const std::vector<RocPoint>& curve, const std::string& path) {
    std::string out = "threshold,fpr,tpr\n";
    for (const auto& p : curve) {
        out += format_double(p.threshold);
        out += ',';
        out += format_double(p.fpr);
        out += ',';
        out += format_double(p.tpr);
        out += '\n';
    }
    write_text_file(path, out);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + path);
}

}  // namespace ksal
