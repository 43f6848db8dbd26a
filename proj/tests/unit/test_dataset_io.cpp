#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

#include <jpeglib.h>
#include <png.h>

#include "pyroclass/dataset.hpp"
#include "pyroclass/error.hpp"
#include "pyroclass/image.hpp"
#include "support.hpp"

using namespace pyroclass;

namespace {

// Writes raw pixels through libpng's simplified API in any channel layout.
void write_png_raw(const std::filesystem::path& p, unsigned w, unsigned h, png_uint_32 format,
                   const std::vector<std::uint8_t>& bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = w;
  img.height = h;
  img.format = format;
  REQUIRE(png_image_write_to_file(&img, p.c_str(), 0, bytes.data(), 0, nullptr) != 0);
}

void write_jpeg(const std::filesystem::path& p, unsigned w, unsigned h, int components,
                const std::vector<std::uint8_t>& bytes) {
  std::FILE* f = std::fopen(p.c_str(), "wb");
  REQUIRE(f != nullptr);
  jpeg_compress_struct c;
  jpeg_error_mgr err;
  c.err = jpeg_std_error(&err);
  jpeg_create_compress(&c);
  jpeg_stdio_dest(&c, f);
  c.image_width = w;
  c.image_height = h;
  c.input_components = components;
  c.in_color_space = components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_set_defaults(&c);
  jpeg_set_quality(&c, 100, TRUE);
  jpeg_start_compress(&c, TRUE);
  for (unsigned y = 0; y < h; ++y) {
    JSAMPROW row = const_cast<JSAMPROW>(bytes.data() + y * w * components);
    jpeg_write_scanlines(&c, &row, 1);
  }
  jpeg_finish_compress(&c);
  jpeg_destroy_compress(&c);
  std::fclose(f);
}

LabeledDataset small_dataset() {
  LabeledDataset ds;
  ds.features = Matrix(2, 3, std::vector<double>{0.0, 0.25, 1.0, 0.1, 0.2, 0.3});
  ds.labels = {1, -1};
  ds.resolution = 0;
  return ds;
}

} // namespace

TEST_CASE("png decode single pixel") {
  test::TempDir dir;
  save_png(RgbImage(1, 1, {{255, 0, 128}}), dir / "a.png");
  const auto img = load_image(dir / "a.png");
  CHECK(img.width() == 1);
  CHECK(img.height() == 1);
  CHECK(img.at(0, 0) == Rgb{255, 0, 128});
}

TEST_CASE("png decode black 2x2") {
  test::TempDir dir;
  save_png(RgbImage(2, 2), dir / "black.png");
  const auto img = load_image(dir / "black.png");
  REQUIRE(img.pixels().size() == 4);
  for (const auto& p : img.pixels())
    CHECK(p == Rgb{0, 0, 0});
}

TEST_CASE("png round trip random image") {
  test::TempDir dir;
  std::mt19937_64 rng(7);
  const auto img = test::random_image(rng, 13, 5);
  save_png(img, dir / "r.png");
  CHECK(load_image(dir / "r.png") == img);
}

TEST_CASE("grayscale png replicates to three channels") {
  test::TempDir dir;
  write_png_raw(dir / "g.png", 2, 1, PNG_FORMAT_GRAY, {17, 200});
  const auto img = load_image(dir / "g.png");
  CHECK(img.at(0, 0) == Rgb{17, 17, 17});
  CHECK(img.at(1, 0) == Rgb{200, 200, 200});
}

TEST_CASE("alpha png composites over black") {
  test::TempDir dir;
  // opaque, fully transparent, half transparent
  write_png_raw(dir / "a.png", 3, 1, PNG_FORMAT_RGBA, {10, 20, 30, 255, 200, 200, 200, 0, 255, 100, 0, 128});
  const auto img = load_image(dir / "a.png");
  CHECK(img.at(0, 0) == Rgb{10, 20, 30});
  CHECK(img.at(1, 0) == Rgb{0, 0, 0});
  // round(255 * 128 / 255) = 128, round(100 * 128 / 255) = 50
  CHECK(img.at(2, 0) == Rgb{128, 50, 0});
}

TEST_CASE("jpeg decode rgb and grayscale") {
  test::TempDir dir;
  std::vector<std::uint8_t> rgb;
  for (int i = 0; i < 64; ++i)
    rgb.insert(rgb.end(), {200, 40, 40});
  write_jpeg(dir / "red.jpeg", 8, 8, 3, rgb);
  const auto red = load_image(dir / "red.jpeg");
  CHECK(red.width() == 8);
  CHECK(red.height() == 8);
  for (const auto& p : red.pixels()) {
    CHECK(std::abs(p.r - 200) <= 3);
    CHECK(std::abs(p.g - 40) <= 3);
    CHECK(std::abs(p.b - 40) <= 3);
  }
  write_jpeg(dir / "gray.jpg", 4, 4, 1, std::vector<std::uint8_t>(16, 90));
  const auto gray = load_image(dir / "gray.jpg");
  for (const auto& p : gray.pixels()) {
    CHECK(p.r == p.g);
    CHECK(p.g == p.b);
    CHECK(std::abs(p.r - 90) <= 1);
  }
}

TEST_CASE("truncated and bogus images name the path") {
  test::TempDir dir;
  std::mt19937_64 rng(3);
  save_png(test::random_image(rng, 16, 16), dir / "full.png");
  auto bytes = test::read_file(dir / "full.png");
  test::write_file(dir / "trunc.png", bytes.substr(0, bytes.size() / 2));

  std::vector<std::uint8_t> rgb(16 * 16 * 3);
  for (auto& b : rgb)
    b = static_cast<std::uint8_t>(rng());
  write_jpeg(dir / "full.jpg", 16, 16, 3, rgb);
  bytes = test::read_file(dir / "full.jpg");
  test::write_file(dir / "trunc.jpg", bytes.substr(0, bytes.size() / 2));
  test::write_file(dir / "text.png", "definitely not an image");

  for (const auto* name : {"trunc.png", "trunc.jpg", "text.png", "missing.png"}) {
    CAPTURE(name);
    try {
      load_image(dir / name);
      FAIL("expected ImageError");
    } catch (const ImageError& e) {
      CHECK(std::string(e.what()).find(name) != std::string::npos);
      CHECK(e.path() == dir / name);
    }
  }
}

TEST_CASE("ingest_directory orders by path and labels by folder") {
  test::TempDir dir;
  std::filesystem::create_directories(dir / "fire");
  std::filesystem::create_directories(dir / "nofire");
  save_png(RgbImage(1, 1, {{1, 1, 1}}), dir / "fire" / "b.png");
  save_png(RgbImage(1, 1, {{2, 2, 2}}), dir / "fire" / "a.png");
  save_png(RgbImage(1, 1, {{3, 3, 3}}), dir / "nofire" / "c.png");
  test::write_file(dir / "fire" / "notes.txt", "skip me");

  const auto r = ingest_directory(dir.path(), "fire", "nofire");
  REQUIRE(r.entries.size() == 3);
  CHECK(r.skipped == 1);
  CHECK(r.entries[0].source.filename() == "a.png");
  CHECK(r.entries[1].source.filename() == "b.png");
  CHECK(r.entries[2].source.filename() == "c.png");
  CHECK(r.entries[0].label == 1);
  CHECK(r.entries[1].label == 1);
  CHECK(r.entries[2].label == -1);
  CHECK(r.entries[0].image.at(0, 0) == Rgb{2, 2, 2});

  const auto again = ingest_directory(dir.path(), "fire", "nofire");
  REQUIRE(again.entries.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(again.entries[i].source == r.entries[i].source);
    CHECK(again.entries[i].image == r.entries[i].image);
  }
}

TEST_CASE("ingest_directory errors") {
  test::TempDir dir;
  std::filesystem::create_directories(dir / "fire");
  save_png(RgbImage(1, 1), dir / "fire" / "a.png");
  CHECK_THROWS_AS(ingest_directory(dir.path(), "fire", "nofire"), DataError);
  std::filesystem::create_directories(dir / "nofire");
  CHECK_THROWS_AS(ingest_directory(dir.path(), "fire", "nofire"), DataError);
  save_png(RgbImage(1, 1), dir / "nofire" / "b.png");
  CHECK(ingest_directory(dir.path(), "fire", "nofire").entries.size() == 2);
}

TEST_CASE("ingest_directory counts a 190 + 190 tree") {
  test::TempDir dir;
  test::write_color_corpus(dir.path(), 190, 2, 11);
  const auto r = ingest_directory(dir.path(), "fire", "nofire");
  CHECK(r.entries.size() == 380);
  std::size_t pos = 0;
  for (const auto& e : r.entries)
    pos += e.label == 1;
  CHECK(pos == 190);
}

TEST_CASE("vectorize layout and scaling") {
  const auto one = vectorize(RgbImage(1, 1, {{255, 0, 128}}));
  REQUIRE(one.size() == 3);
  CHECK(one[0] == 1.0);
  CHECK(one[1] == 0.0);
  CHECK(one[2] == 0.5019607843137255);

  const auto two = vectorize(RgbImage(2, 1, {{1, 2, 3}, {4, 5, 6}}));
  const std::vector<int> bytes{1, 2, 3, 4, 5, 6};
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(two[i] == bytes[i] / 255.0);

  CHECK(vectorize(RgbImage(50, 50)).size() == 7500);
  for (double v : vectorize(RgbImage(4, 3)))
    CHECK(v == 0.0);
}

TEST_CASE("vectorize property: length, range and byte recovery") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t w = 1 + rng() % 20, h = 1 + rng() % 20;
    const auto img = test::random_image(rng, w, h);
    const auto row = vectorize(img);
    REQUIRE(row.size() == w * h * 3);
    for (std::size_t i = 0; i < row.size(); ++i) {
      REQUIRE(row[i] >= 0.0);
      REQUIRE(row[i] <= 1.0);
      const auto& p = img.pixels()[i / 3];
      const int byte = i % 3 == 0 ? p.r : i % 3 == 1 ? p.g : p.b;
      REQUIRE(std::lround(row[i] * 255.0) == byte);
    }
  }
}

TEST_CASE("FFDS round trip is bit exact") {
  test::TempDir dir;
  auto ds = small_dataset();
  save_dataset(ds, dir / "a.ffds");
  const auto back = load_dataset(dir / "a.ffds");
  CHECK(back.features == ds.features);
  CHECK(back.labels == ds.labels);
  CHECK(back.resolution == ds.resolution);

  std::mt19937_64 rng(9);
  auto big = test::random_dataset(rng, 37, 11);
  big.resolution = 42;
  save_dataset(big, dir / "b.ffds");
  const auto big_back = load_dataset(dir / "b.ffds");
  CHECK(std::memcmp(big_back.features.data().data(), big.features.data().data(), 37 * 11 * sizeof(double)) == 0);
  CHECK(big_back.labels == big.labels);
  CHECK(big_back.resolution == 42);
}

TEST_CASE("FFDS byte layout") {
  test::TempDir dir;
  save_dataset(small_dataset(), dir / "a.ffds");
  const auto bytes = test::read_file(dir / "a.ffds");
  CHECK(bytes.size() == 4 + 4 + 8 + 8 + 4 + 2 + 6 * 8);
  CHECK(bytes.substr(0, 4) == "FFDS");
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 2);   // n
  CHECK(bytes[16] == 3);  // d
  CHECK(static_cast<std::int8_t>(bytes[28]) == 1);
  CHECK(static_cast<std::int8_t>(bytes[29]) == -1);
  double second;
  std::memcpy(&second, bytes.data() + 30 + 8, 8);
  CHECK(second == 0.25);
}

TEST_CASE("FFDS empty dataset") {
  test::TempDir dir;
  LabeledDataset empty;
  save_dataset(empty, dir / "e.ffds");
  const auto back = load_dataset(dir / "e.ffds");
  CHECK(back.size() == 0);
}

TEST_CASE("FFDS load errors") {
  test::TempDir dir;
  save_dataset(small_dataset(), dir / "a.ffds");
  const auto good = test::read_file(dir / "a.ffds");

  auto bad = good;
  bad[0] = 'X';
  test::write_file(dir / "magic.ffds", bad);
  CHECK_THROWS_WITH_AS(load_dataset(dir / "magic.ffds"), doctest::Contains("magic"), DataError);

  bad = good;
  bad[4] = 2;
  test::write_file(dir / "version.ffds", bad);
  CHECK_THROWS_WITH_AS(load_dataset(dir / "version.ffds"), doctest::Contains("version"), DataError);

  test::write_file(dir / "trunc.ffds", good.substr(0, good.size() - 3));
  CHECK_THROWS_WITH_AS(load_dataset(dir / "trunc.ffds"), doctest::Contains("truncated"), DataError);

  bad = good;
  bad[28] = 3;
  test::write_file(dir / "label.ffds", bad);
  CHECK_THROWS_WITH_AS(load_dataset(dir / "label.ffds"), doctest::Contains("label"), DataError);
}

TEST_CASE("make_dataset shape") {
  std::vector<LabeledImage> imgs{{RgbImage(3, 3), 1, "a"}, {RgbImage(3, 3), -1, "b"}};
  const auto ds = make_dataset(imgs, 3);
  CHECK(ds.size() == 2);
  CHECK(ds.dim() == 27);
  CHECK(ds.resolution == 3);
  CHECK(ds.labels == std::vector<Label>{1, -1});
}
