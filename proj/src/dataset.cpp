#include "pyroclass/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "binary_io.hpp"

namespace pyroclass {

std::size_t LabeledDataset::count(Label label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void LabeledDataset::validate() const {
  if (features.rows() != labels.size())
    throw DataError("dataset has " + std::to_string(features.rows()) + " rows but " +
                    std::to_string(labels.size()) + " labels");
  for (Label l : labels)
    if (l != 1 && l != -1)
      throw DataError("label value " + std::to_string(l) + " outside {+1,-1}");
  for (double v : features.data())
    if (!(v >= 0.0 && v <= 1.0))
      throw DataError("feature value outside [0,1]");
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.features = Matrix(indices.size(), dim());
  out.labels.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto src = row(indices[k]);
    std::copy(src.begin(), src.end(), out.features.row(k).begin());
    out.labels.push_back(labels[indices[k]]);
  }
  out.feature_names = feature_names;
  out.resolution = resolution;
  return out;
}

std::vector<double> vectorize(const RgbImage& image) {
  std::vector<double> row;
  row.reserve(image.pixels().size() * 3);
  for (const Rgb& p : image.pixels()) {
    row.push_back(p.r / 255.0);
    row.push_back(p.g / 255.0);
    row.push_back(p.b / 255.0);
  }
  return row;
}

LabeledDataset make_dataset(const std::vector<LabeledImage>& images, std::uint32_t resolution) {
  LabeledDataset ds;
  ds.resolution = resolution;
  if (images.empty())
    return ds;
  const std::size_t w = images.front().image.width();
  const std::size_t h = images.front().image.height();
  ds.features = Matrix(images.size(), w * h * 3);
  ds.labels.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto& img = images[i].image;
    if (img.width() != w || img.height() != h)
      throw DataError(images[i].source.string() + ": image size differs from the rest of the dataset");
    const auto row = vectorize(img);
    std::copy(row.begin(), row.end(), ds.features.row(i).begin());
    ds.labels.push_back(images[i].label);
  }
  return ds;
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path) {
  ds.validate();
  detail::BinaryWriter out(path);
  out.magic("FFDS");
  out.uint<std::uint32_t>(kFfdsVersion);
  out.uint<std::uint64_t>(ds.size());
  out.uint<std::uint64_t>(ds.dim());
  out.uint<std::uint32_t>(ds.resolution);
  for (Label l : ds.labels)
    out.i8(l);
  out.f64s(ds.features.data());
  out.finish();
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
  detail::BinaryReader in(path);
  if (!in.magic("FFDS"))
    throw DataError(path.string() + ": bad magic (not an FFDS file)");
  const auto version = in.uint<std::uint32_t>();
  if (version != kFfdsVersion)
    throw DataError(path.string() + ": unsupported FFDS version " + std::to_string(version));
  const auto n = in.uint<std::uint64_t>();
  const auto d = in.uint<std::uint64_t>();
  LabeledDataset ds;
  ds.resolution = in.uint<std::uint32_t>();
  in.require_remaining(n, 1);
  ds.labels.resize(n);
  for (auto& l : ds.labels) {
    l = in.i8();
    if (l != 1 && l != -1)
      throw DataError(path.string() + ": label value " + std::to_string(l) + " outside {+1,-1}");
  }
  if (d != 0 && n > std::numeric_limits<std::uint64_t>::max() / d)
    throw DataError(path.string() + ": truncated payload");
  ds.features = Matrix(n, d, in.f64s(n * d));
  return ds;
}

} // namespace pyroclass
