#include "pyroclass/image.hpp"

#include <algorithm>
#include <array>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>

#include <jpeglib.h>
#include <png.h>

namespace pyroclass {

namespace fs = std::filesystem;

RgbImage::RgbImage(std::size_t width, std::size_t height)
    : RgbImage(width, height, std::vector<Rgb>(width * height)) {}

RgbImage::RgbImage(std::size_t width, std::size_t height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ == 0 || height_ == 0)
    throw DataError("image dimensions must be at least 1x1");
  if (pixels_.size() != width_ * height_)
    throw DataError("pixel count " + std::to_string(pixels_.size()) + " does not match " +
                    std::to_string(width_) + "x" + std::to_string(height_));
}

namespace {

enum class Format { png, jpeg, unknown };

Format sniff(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ImageError(path, "cannot open file");
  std::array<unsigned char, 8> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got >= 8 && png_sig_cmp(head.data(), 0, 8) == 0)
    return Format::png;
  if (got >= 3 && head[0] == 0xff && head[1] == 0xd8 && head[2] == 0xff)
    return Format::jpeg;
  return Format::unknown;
}

// Alpha-over-black with round-half-up.
std::uint8_t premultiply(std::uint8_t c, std::uint8_t a) {
  return static_cast<std::uint8_t>((static_cast<unsigned>(c) * a + 127) / 255);
}

RgbImage decode_png(const fs::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    std::string msg = img.message;
    png_image_free(&img);
    throw ImageError(path, "corrupt PNG: " + msg);
  }
  img.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw ImageError(path, "corrupt PNG: " + msg);
  }
  std::vector<Rgb> pixels(static_cast<std::size_t>(img.width) * img.height);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const std::uint8_t a = buf[4 * i + 3];
    pixels[i] = {premultiply(buf[4 * i], a), premultiply(buf[4 * i + 1], a), premultiply(buf[4 * i + 2], a)};
  }
  return RgbImage(img.width, img.height, std::move(pixels));
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_fail(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// libjpeg only warns on premature end of data; treat every warning as corruption.
void jpeg_message(j_common_ptr cinfo, int level) {
  if (level < 0)
    jpeg_fail(cinfo);
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

// Only trivially destructible locals live across setjmp here.
bool decode_jpeg_raw(std::FILE* file, std::vector<std::uint8_t>& out, unsigned& width, unsigned& height,
                     char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_fail;
  err.base.emit_message = jpeg_message;
  if (setjmp(err.jump)) {
    std::copy(std::begin(err.message), std::end(err.message), message);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = cinfo.output_width;
  height = cinfo.output_height;
  out.resize(static_cast<std::size_t>(width) * height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

RgbImage decode_jpeg(const fs::path& path) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
  if (!file)
    throw ImageError(path, "cannot open file");
  std::vector<std::uint8_t> raw;
  unsigned width = 0, height = 0;
  char message[JMSG_LENGTH_MAX] = {};
  if (!decode_jpeg_raw(file.get(), raw, width, height, message))
    throw ImageError(path, std::string("corrupt JPEG: ") + message);
  std::vector<Rgb> pixels(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < pixels.size(); ++i)
    pixels[i] = {raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]};
  return RgbImage(width, height, std::move(pixels));
}

bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

} // namespace

RgbImage load_image(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec))
    throw ImageError(path, "not a readable file");
  switch (sniff(path)) {
  case Format::png:
    return decode_png(path);
  case Format::jpeg:
    return decode_jpeg(path);
  case Format::unknown:
    break;
  }
  throw ImageError(path, "unsupported image format (expected PNG or JPEG)");
}

void save_png(const RgbImage& image, const fs::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buf;
  buf.reserve(image.pixels().size() * 3);
  for (const Rgb& p : image.pixels()) {
    buf.push_back(p.r);
    buf.push_back(p.g);
    buf.push_back(p.b);
  }
  if (!png_image_write_to_file(&img, path.c_str(), 0, buf.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw ImageError(path, "PNG write failed: " + msg);
  }
}

IngestResult ingest_directory(const fs::path& root, const std::string& positive_dir_name,
                              const std::string& negative_dir_name) {
  struct Candidate {
    fs::path path;
    Label label;
  };
  std::vector<Candidate> candidates;
  IngestResult result;

  for (const auto& [name, label] : {std::pair{positive_dir_name, Label{+1}}, std::pair{negative_dir_name, Label{-1}}}) {
    const fs::path dir = root / name;
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
      throw DataError(dir.string() + ": missing class subdirectory");
    std::size_t found = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file())
        continue;
      if (!has_image_extension(entry.path())) {
        ++result.skipped;
        continue;
      }
      candidates.push_back({entry.path(), label});
      ++found;
    }
    if (found == 0)
      throw DataError(dir.string() + ": no images found");
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.path.string() < b.path.string(); });
  result.entries.reserve(candidates.size());
  for (auto& c : candidates)
    result.entries.push_back({load_image(c.path), c.label, std::move(c.path)});
  return result;
}

} // namespace pyroclass
