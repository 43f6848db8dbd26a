#pragma once

#include <cstddef>
#include <vector>

#include "pyroclass/image.hpp"

namespace pyroclass {

/// Bilinear resampling with the pixel-center convention
/// src = (dst + 0.5) * (src_size / dst_size) - 0.5, clamped to the image, rounded half-up.
/// Same-size resizes are exact identities.
RgbImage resize_bilinear(const RgbImage& img, std::size_t target_w, std::size_t target_h);

/// out(x, y) = in(width - 1 - x, y).
RgbImage flip_horizontal(const RgbImage& img);

/// Per-channel median over a window x window neighborhood with edge replication.
/// window must be odd and >= 3 (ConfigError otherwise).
RgbImage median_blur(const RgbImage& img, std::size_t window = 3);

struct AugmentPlan {
  bool enable_flip = true;
  bool enable_median_blur = true;
  std::size_t blur_window = 3;

  /// Variants produced per input image.
  std::size_t multiplier() const { return (enable_flip ? 2 : 1) * (enable_median_blur ? 2 : 1); }
  void validate() const;
};

/// Per input: original, flipped, blurred(original), blurred(flipped), omitting
/// variants whose flag is off. Labels and sources are copied unchanged.
std::vector<LabeledImage> augment(const std::vector<LabeledImage>& images, const AugmentPlan& plan);

} // namespace pyroclass
