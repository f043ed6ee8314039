#include "ksal/channels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ksal {

OpponentBasis default_opponent_basis() {
    const double s2 = 1.0 / std::sqrt(2.0);
    const double s6 = 1.0 / std::sqrt(6.0);
    const double s3 = 1.0 / std::sqrt(3.0);
    return {{{s2, -s2, 0.0},           // O1 = (R - G) / sqrt2
             {s6, s6, -2.0 * s6},      // O2 = (R + G - 2B) / sqrt6
             {s3, s3, s3}}};           // O3 = (R + G + B) / sqrt3
}

std::array<double, 3> opponent_components(const Rgb& px, const OpponentBasis& basis) {
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i)
        out[i] = basis[i][0] * px.r + basis[i][1] * px.g + basis[i][2] * px.b;
    return out;
}

std::array<double, 3> ks7_opponency(const Rgb& px, double dark_clamp) {
    double intensity = (px.r + px.g + px.b) / 3.0;
    if (intensity < dark_clamp) return {intensity, 0.0, 0.0};
    return {intensity, px.r - px.g, px.b - 0.5 * (px.r + px.g)};
}

ScalarField gabor_kernel(double theta_deg, double wavelength, double sigma, int size) {
    if (size < 3 || size % 2 == 0)
        throw std::invalid_argument("gabor_kernel: size must be odd and >= 3");
    double theta = theta_deg * std::numbers::pi / 180.0;
    double ct = std::cos(theta), st = std::sin(theta);

    ScalarField kernel(size, size);
    int r = size / 2;
    double sum = 0.0;
    for (int y = -r; y <= r; ++y) {
        for (int x = -r; x <= r; ++x) {
            double xr = x * ct + y * st;
            double yr = -x * st + y * ct;
            double v = std::exp(-(xr * xr + yr * yr) / (2.0 * sigma * sigma)) *
                       std::cos(2.0 * std::numbers::pi * xr / wavelength);
            kernel.at(x + r, y + r) = v;
            sum += v;
        }
    }
    double mean = sum / kernel.size();
    for (auto& v : kernel.data()) v -= mean;
    return kernel;
}

ScalarField convolve_replicate(const ScalarField& field, const ScalarField& kernel) {
    if (kernel.width() % 2 == 0 || kernel.height() % 2 == 0)
        throw std::invalid_argument("convolve_replicate: kernel dims must be odd");
    int rx = kernel.width() / 2;
    int ry = kernel.height() / 2;
    int w = field.width(), h = field.height();

    ScalarField out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int ky = 0; ky < kernel.height(); ++ky) {
                int sy = y + ky - ry;
                sy = sy < 0 ? 0 : (sy >= h ? h - 1 : sy);
                for (int kx = 0; kx < kernel.width(); ++kx) {
                    int sx = x + kx - rx;
                    sx = sx < 0 ? 0 : (sx >= w ? w - 1 : sx);
                    s += kernel.at(kx, ky) * field.at(sx, sy);
                }
            }
            out.at(x, y) = s;
        }
    }
    return out;
}

namespace {

ScalarField plane(int w, int h) { return ScalarField(w, h); }

}  // namespace

ChannelSet extract_ks3(const RgbImage& img, const ChannelConfig& cfg) {
    if (img.empty()) throw std::invalid_argument("extract_ks3: empty image");
    int w = img.width(), h = img.height();

    ChannelSet set;
    set.variant = ChannelVariant::KS3;
    static const char* kLabels[3] = {"opponent-1", "opponent-2", "opponent-3"};
    for (int c = 0; c < 3; ++c) set.channels.push_back({kLabels[c], plane(w, h)});

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            auto o = opponent_components(img.at(x, y), cfg.opponent_basis);
            for (int c = 0; c < 3; ++c) set.channels[c].field.at(x, y) = o[c];
        }

    for (auto& ch : set.channels) ch.field = normalize_minmax(ch.field);
    return set;
}

ChannelSet extract_ks7(const RgbImage& img, const ChannelConfig& cfg) {
    if (img.empty()) throw std::invalid_argument("extract_ks7: empty image");
    int w = img.width(), h = img.height();

    ScalarField intensity(w, h), rg(w, h), by(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            auto o = ks7_opponency(img.at(x, y), cfg.dark_clamp);
            intensity.at(x, y) = o[0];
            rg.at(x, y) = o[1];
            by.at(x, y) = o[2];
        }

    ChannelSet set;
    set.variant = ChannelVariant::KS7;
    set.channels.push_back({"intensity", intensity});
    set.channels.push_back({"red-green", std::move(rg)});
    set.channels.push_back({"blue-yellow", std::move(by)});

    static const double kThetas[4] = {0.0, 45.0, 90.0, 135.0};
    static const char* kOrientLabels[4] = {"orientation-0", "orientation-45",
                                           "orientation-90", "orientation-135"};
    for (int i = 0; i < 4; ++i) {
        ScalarField kernel = gabor_kernel(kThetas[i], cfg.gabor.wavelength,
                                          cfg.gabor.sigma, cfg.gabor.kernel_size);
        ScalarField resp = convolve_replicate(intensity, kernel);
        for (auto& v : resp.data()) v = std::abs(v);
        set.channels.push_back({kOrientLabels[i], std::move(resp)});
    }

    for (auto& ch : set.channels) ch.field = normalize_minmax(ch.field);
    return set;
}

ChannelSet extract_channels(const RgbImage& img, ChannelVariant variant,
                            const ChannelConfig& cfg) {
    return variant == ChannelVariant::KS3 ? extract_ks3(img, cfg)
                                          : extract_ks7(img, cfg);
}

}  // namespace ksal
