#pragma once

#include <array>
#include <string>
#include <vector>

#include "ksal/scalar_field.hpp"

namespace ksal {

enum class ChannelVariant { KS3, KS7 };

struct Channel {
    std::string label;
    ScalarField field;
};

struct ChannelSet {
    ChannelVariant variant = ChannelVariant::KS3;
    std::vector<Channel> channels;
};

struct GaborParams {
    double wavelength = 8.0;  // px
    double sigma = 3.2;       // px
    int kernel_size = 19;     // odd
};

using OpponentBasis = std::array<std::array<double, 3>, 3>;

// Orthonormal opponent basis: (R-G)/sqrt2, (R+G-2B)/sqrt6, (R+G+B)/sqrt3.
OpponentBasis default_opponent_basis();

struct ChannelConfig {
    GaborParams gabor;
    double dark_clamp = 0.1;  // intensity below which hue opponency is zeroed
    OpponentBasis opponent_basis = default_opponent_basis();
};

std::array<double, 3> opponent_components(const Rgb& px, const OpponentBasis& basis);

// Raw KS-7 per-pixel values: intensity, R-G, B-(R+G)/2; the two opponency
// values are zeroed where intensity < dark_clamp.
std::array<double, 3> ks7_opponency(const Rgb& px, double dark_clamp);

// Cosine-phase Gabor kernel, mean-subtracted so the taps sum to 0.
// theta = 0 puts the carrier along x (responds to vertical structure).
ScalarField gabor_kernel(double theta_deg, double wavelength, double sigma, int size);

// Cross-correlation with replicate-edge padding. Kernel dims must be odd.
ScalarField convolve_replicate(const ScalarField& field, const ScalarField& kernel);

// Three opponent color channels, each min-max normalized to [0,1].
ChannelSet extract_ks3(const RgbImage& img, const ChannelConfig& cfg = {});

// Intensity, two color opponency and four Gabor orientation channels,
// each min-max normalized to [0,1].
ChannelSet extract_ks7(const RgbImage& img, const ChannelConfig& cfg = {});

ChannelSet extract_channels(const RgbImage& img, ChannelVariant variant, const ChannelConfig& cfg = {});

}  // namespace ksal
