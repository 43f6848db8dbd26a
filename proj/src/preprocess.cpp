#include "pyroclass/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace pyroclass {

namespace {

struct Tap {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

std::vector<Tap> taps(std::size_t src_size, std::size_t dst_size) {
  std::vector<Tap> out(dst_size);
  const double scale = static_cast<double>(src_size) / static_cast<double>(dst_size);
  const double max_coord = static_cast<double>(src_size - 1);
  for (std::size_t i = 0; i < dst_size; ++i) {
    const double s = std::clamp((static_cast<double>(i) + 0.5) * scale - 0.5, 0.0, max_coord);
    const auto lo = static_cast<std::size_t>(std::floor(s));
    out[i] = {lo, std::min(lo + 1, src_size - 1), s - static_cast<double>(lo)};
  }
  return out;
}

// a + t*(b-a) is exact when a == b, which keeps constant images constant.
double lerp(double a, double b, double t) { return a + t * (b - a); }

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0)); }

} // namespace

RgbImage resize_bilinear(const RgbImage& img, std::size_t target_w, std::size_t target_h) {
  if (target_w == 0 || target_h == 0)
    throw ConfigError("resize target must be at least 1x1");
  const auto xs = taps(img.width(), target_w);
  const auto ys = taps(img.height(), target_h);
  RgbImage out(target_w, target_h);
  for (std::size_t y = 0; y < target_h; ++y) {
    const Tap& ty = ys[y];
    for (std::size_t x = 0; x < target_w; ++x) {
      const Tap& tx = xs[x];
      const Rgb& p00 = img.at(tx.lo, ty.lo);
      const Rgb& p01 = img.at(tx.hi, ty.lo);
      const Rgb& p10 = img.at(tx.lo, ty.hi);
      const Rgb& p11 = img.at(tx.hi, ty.hi);
      auto blend = [&](std::uint8_t Rgb::*ch) {
        const double top = lerp(p00.*ch, p01.*ch, tx.frac);
        const double bottom = lerp(p10.*ch, p11.*ch, tx.frac);
        return to_byte(lerp(top, bottom, ty.frac));
      };
      out.at(x, y) = {blend(&Rgb::r), blend(&Rgb::g), blend(&Rgb::b)};
    }
  }
  return out;
}

RgbImage flip_horizontal(const RgbImage& img) {
  RgbImage out(img.width(), img.height());
  for (std::size_t y = 0; y < img.height(); ++y)
    for (std::size_t x = 0; x < img.width(); ++x)
      out.at(x, y) = img.at(img.width() - 1 - x, y);
  return out;
}

RgbImage median_blur(const RgbImage& img, std::size_t window) {
  if (window < 3 || window % 2 == 0)
    throw ConfigError("median blur window must be odd and >= 3, got " + std::to_string(window));
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  const auto w = static_cast<std::ptrdiff_t>(img.width());
  const auto h = static_cast<std::ptrdiff_t>(img.height());
  const std::size_t mid = window * window / 2;
  RgbImage out(img.width(), img.height());
  std::array<std::vector<std::uint8_t>, 3> vals;
  for (auto& v : vals)
    v.resize(window * window);

  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      std::size_t k = 0;
      for (std::ptrdiff_t dy = -half; dy <= half; ++dy) {
        const auto sy = static_cast<std::size_t>(std::clamp(y + dy, std::ptrdiff_t{0}, h - 1));
        for (std::ptrdiff_t dx = -half; dx <= half; ++dx) {
          const auto sx = static_cast<std::size_t>(std::clamp(x + dx, std::ptrdiff_t{0}, w - 1));
          const Rgb& p = img.at(sx, sy);
          vals[0][k] = p.r;
          vals[1][k] = p.g;
          vals[2][k] = p.b;
          ++k;
        }
      }
      std::array<std::uint8_t, 3> med;
      for (std::size_t c = 0; c < 3; ++c) {
        std::nth_element(vals[c].begin(), vals[c].begin() + static_cast<std::ptrdiff_t>(mid), vals[c].end());
        med[c] = vals[c][mid];
      }
      out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = {med[0], med[1], med[2]};
    }
  }
  return out;
}

void AugmentPlan::validate() const {
  if (enable_median_blur && (blur_window < 3 || blur_window % 2 == 0))
    throw ConfigError("augmentation blur_window must be odd and >= 3");
}

std::vector<LabeledImage> augment(const std::vector<LabeledImage>& images, const AugmentPlan& plan) {
  plan.validate();
  std::vector<LabeledImage> out;
  out.reserve(images.size() * plan.multiplier());
  for (const auto& item : images) {
    std::vector<RgbImage> variants{item.image};
    if (plan.enable_flip)
      variants.push_back(flip_horizontal(item.image));
    if (plan.enable_median_blur) {
      const std::size_t base = variants.size();
      for (std::size_t i = 0; i < base; ++i)
        variants.push_back(median_blur(variants[i], plan.blur_window));
    }
    for (auto& v : variants)
      out.push_back({std::move(v), item.label, item.source});
  }
  return out;
}

} // namespace pyroclass
