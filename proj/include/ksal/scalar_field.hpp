#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace ksal {

// Row-major 2-D grid of doubles. Carries feature channels, statistic maps,
// expected images, saliency maps and fixation densities.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(int width, int height, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& at(int x, int y) { return data_[index(x, y)]; }
    double at(int x, int y) const { return data_[index(x, y)]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_dims(const ScalarField& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    // (min, max) over all values; (0, 0) for an empty field.
    std::pair<double, double> minmax() const;
    double sum() const;
    bool all_finite() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
};

// Interleaved RGB raster with components in [0,1].
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb fill = {});

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return width_ == 0 || height_ == 0; }

    Rgb at(int x, int y) const {
        std::size_t i = index(x, y);
        return {data_[i], data_[i + 1], data_[i + 2]};
    }
    void set(int x, int y, Rgb v) {
        std::size_t i = index(x, y);
        data_[i] = v.r;
        data_[i + 1] = v.g;
        data_[i + 2] = v.b;
    }

    std::size_t index(int x, int y) const {
        return 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x));
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;  // r,g,b triplets, row-major
};

// Bilinear resampling with half-pixel centers; resizing to the same
// dimensions reproduces the input exactly, constants stay constant.
ScalarField resize_bilinear(const ScalarField& field, int new_width, int new_height);
RgbImage resize_bilinear(const RgbImage& img, int new_width, int new_height);

// Affine map of the value range onto [0,1]; a constant field becomes all
// zeros (a flat map carries no signal).
ScalarField normalize_minmax(const ScalarField& field);

}  // namespace ksal
