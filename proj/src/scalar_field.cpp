#include "ksal/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ksal {

ScalarField::ScalarField(int width, int height, double fill)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("ScalarField: dimensions must be positive");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                 fill);
}

std::pair<double, double> ScalarField::minmax() const {
    if (data_.empty()) return {0.0, 0.0};
    auto [lo, hi] = std::minmax_element(data_.begin(), data_.end());
    return {*lo, *hi};
}

double ScalarField::sum() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s;
}

bool ScalarField::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("RgbImage: dimensions must be positive");
    std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    data_.resize(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        data_[3 * i] = fill.r;
        data_[3 * i + 1] = fill.g;
        data_[3 * i + 2] = fill.b;
    }
}

namespace {

// Shared bilinear machinery. Source coordinates follow the half-pixel
// convention src = (dst + 0.5) * src_dim / dst_dim - 0.5; the lerp form
// a + f*(b-a) keeps constants and identity resizes exact.
struct Axis {
    int lo, hi;
    double frac;
};

Axis axis_sample(int dst, int dst_dim, int src_dim) {
    double s = (dst + 0.5) * static_cast<double>(src_dim) / dst_dim - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_dim - 1));
    int lo = static_cast<int>(std::floor(s));
    int hi = std::min(lo + 1, src_dim - 1);
    return {lo, hi, s - lo};
}

}  // namespace

ScalarField resize_bilinear(const ScalarField& field, int new_width, int new_height) {
    if (new_width <= 0 || new_height <= 0)
        throw std::invalid_argument("resize_bilinear: dimensions must be positive");
    if (field.empty()) throw std::invalid_argument("resize_bilinear: empty field");
    if (new_width == field.width() && new_height == field.height()) return field;

    std::vector<Axis> xs(new_width);
    for (int x = 0; x < new_width; ++x) xs[x] = axis_sample(x, new_width, field.width());

    ScalarField out(new_width, new_height);
    for (int y = 0; y < new_height; ++y) {
        Axis ay = axis_sample(y, new_height, field.height());
        for (int x = 0; x < new_width; ++x) {
            const Axis& ax = xs[x];
            double a = field.at(ax.lo, ay.lo);
            double b = field.at(ax.hi, ay.lo);
            double c = field.at(ax.lo, ay.hi);
            double d = field.at(ax.hi, ay.hi);
            double top = a + ax.frac * (b - a);
            double bot = c + ax.frac * (d - c);
            out.at(x, y) = top + ay.frac * (bot - top);
        }
    }
    return out;
}

RgbImage resize_bilinear(const RgbImage& img, int new_width, int new_height) {
    if (new_width <= 0 || new_height <= 0)
        throw std::invalid_argument("resize_bilinear: dimensions must be positive");
    if (img.empty()) throw std::invalid_argument("resize_bilinear: empty image");
    if (new_width == img.width() && new_height == img.height()) return img;

    std::vector<Axis> xs(new_width);
    for (int x = 0; x < new_width; ++x) xs[x] = axis_sample(x, new_width, img.width());

    RgbImage out(new_width, new_height);
    for (int y = 0; y < new_height; ++y) {
        Axis ay = axis_sample(y, new_height, img.height());
        for (int x = 0; x < new_width; ++x) {
            const Axis& ax = xs[x];
            Rgb a = img.at(ax.lo, ay.lo);
            Rgb b = img.at(ax.hi, ay.lo);
            Rgb c = img.at(ax.lo, ay.hi);
            Rgb d = img.at(ax.hi, ay.hi);
            auto lerp2 = [&](double va, double vb, double vc, double vd) {
                double top = va + ax.frac * (vb - va);
                double bot = vc + ax.frac * (vd - vc);
                return top + ay.frac * (bot - top);
            };
            out.set(x, y, {lerp2(a.r, b.r, c.r, d.r), lerp2(a.g, b.g, c.g, d.g),
                           lerp2(a.b, b.b, c.b, d.b)});
        }
    }
    return out;
}

ScalarField normalize_minmax(const ScalarField& field) {
    if (field.empty()) throw std::invalid_argument("normalize_minmax: empty field");
    auto [lo, hi] = field.minmax();
    ScalarField out(field.width(), field.height());
    if (hi > lo) {
        // Divide rather than multiply by the reciprocal so the extremes land
        // on exactly 0 and 1.
        double span = hi - lo;
        for (std::size_t i = 0; i < field.size(); ++i) out[i] = (field[i] - lo) / span;
    }
    return out;
}

}  // namespace ksal
