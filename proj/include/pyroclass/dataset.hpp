#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pyroclass/image.hpp"
#include "pyroclass/matrix.hpp"

namespace pyroclass {

/// Feature rows in [0,1] with +1/-1 labels.
struct LabeledDataset {
  Matrix features;
  std::vector<Label> labels;
  std::vector<std::string> feature_names;
  /// Square image side the rows were produced at, 0 when not image-derived.
  std::uint32_t resolution = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }
  std::span<const double> row(std::size_t i) const { return features.row(i); }

  std::size_t count(Label label) const;
  bool has_both_classes() const { return count(+1) > 0 && count(-1) > 0; }

  /// Checks the shape and value-range invariants; throws DataError.
  void validate() const;

  /// Rows picked by index, in the given order.
  LabeledDataset subset(std::span<const std::size_t> indices) const;
};

/// Pixel-major, channel-interleaved (r,g,b) row scaled by 1/255.
std::vector<double> vectorize(const RgbImage& image);

/// Vectorizes every image; all images must share one size.
LabeledDataset make_dataset(const std::vector<LabeledImage>& images, std::uint32_t resolution);

// FFDS: little-endian "FFDS", u32 version (1), u64 n, u64 d, u32 resolution,
// n x i8 labels, n*d x f64 features (row-major), no padding.
inline constexpr std::uint32_t kFfdsVersion = 1;

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path);
LabeledDataset load_dataset(const std::filesystem::path& path);

} // namespace pyroclass
