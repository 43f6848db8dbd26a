#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pyroclass/error.hpp"

namespace pyroclass {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Width x height grid of 8-bit RGB pixels, stored row-major.
class RgbImage {
public:
  RgbImage() = default;
  /// Black image of the given size.
  RgbImage(std::size_t width, std::size_t height);
  /// Throws DataError unless pixels.size() == width * height and both sides are >= 1.
  RgbImage(std::size_t width, std::size_t height, std::vector<Rgb> pixels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }

  Rgb& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
  const Rgb& at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }

  const std::vector<Rgb>& pixels() const { return pixels_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<Rgb> pixels_;
};

/// Failure to read or decode an image; the message always names the path.
class ImageError : public DataError {
public:
  ImageError(const std::filesystem::path& path, const std::string& what)
      : DataError(path.string() + ": " + what), path_(path) {}
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

/// Decodes a PNG or JPEG file. Grayscale is replicated to three channels and
/// alpha is composited over black.
RgbImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG.
void save_png(const RgbImage& image, const std::filesystem::path& path);

/// +1 for the positive ("fire") class, -1 for the negative one.
using Label = std::int8_t;

struct LabeledImage {
  RgbImage image;
  Label label = 0;
  std::filesystem::path source;
};

struct IngestResult {
  std::vector<LabeledImage> entries;
  /// Files skipped because their extension is not .png/.jpg/.jpeg.
  std::size_t skipped = 0;
};

/// Loads root/positive_dir (label +1) and root/negative_dir (label -1).
/// Entries are sorted by full path.
IngestResult ingest_directory(const std::filesystem::path& root,
                              const std::string& positive_dir_name,
                              const std::string& negative_dir_name);

} // namespace pyroclass
