#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pyroclass/error.hpp"
#include "pyroclass/preprocess.hpp"
#include "support.hpp"

using namespace pyroclass;

namespace {

std::uint8_t channel(const Rgb& p, int c) { return c == 0 ? p.r : c == 1 ? p.g : p.b; }

// Straightforward restatement of the pixel-center bilinear rule.
RgbImage reference_resize(const RgbImage& img, std::size_t tw, std::size_t th) {
  RgbImage out(tw, th);
  const double sx = static_cast<double>(img.width()) / tw;
  const double sy = static_cast<double>(img.height()) / th;
  for (std::size_t y = 0; y < th; ++y)
    for (std::size_t x = 0; x < tw; ++x) {
      double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
      double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
      const auto x0 = static_cast<std::size_t>(std::floor(fx));
      const auto y0 = static_cast<std::size_t>(std::floor(fy));
      const auto x1 = std::min(x0 + 1, img.width() - 1);
      const auto y1 = std::min(y0 + 1, img.height() - 1);
      const double tx = fx - x0, ty = fy - y0;
      std::uint8_t v[3];
      for (int c = 0; c < 3; ++c) {
        const double top = channel(img.at(x0, y0), c) + tx * (channel(img.at(x1, y0), c) - channel(img.at(x0, y0), c));
        const double bot = channel(img.at(x0, y1), c) + tx * (channel(img.at(x1, y1), c) - channel(img.at(x0, y1), c));
        v[c] = static_cast<std::uint8_t>(std::floor(top + ty * (bot - top) + 0.5));
      }
      out.at(x, y) = {v[0], v[1], v[2]};
    }
  return out;
}

RgbImage reference_median(const RgbImage& img, std::size_t window) {
  RgbImage out(img.width(), img.height());
  const long r = static_cast<long>(window / 2);
  const long w = static_cast<long>(img.width()), h = static_cast<long>(img.height());
  for (long y = 0; y < h; ++y)
    for (long x = 0; x < w; ++x) {
      std::uint8_t v[3];
      for (int c = 0; c < 3; ++c) {
        std::vector<int> vals;
        for (long dy = -r; dy <= r; ++dy)
          for (long dx = -r; dx <= r; ++dx)
            vals.push_back(channel(img.at(std::clamp(x + dx, 0L, w - 1), std::clamp(y + dy, 0L, h - 1)), c));
        std::sort(vals.begin(), vals.end());
        v[c] = static_cast<std::uint8_t>(vals[vals.size() / 2]);
      }
      out.at(x, y) = {v[0], v[1], v[2]};
    }
  return out;
}

} // namespace

TEST_CASE("resize 2x1 to 4x1 by hand") {
  const RgbImage img(2, 1, {{0, 0, 0}, {255, 255, 255}});
  const auto out = resize_bilinear(img, 4, 1);
  REQUIRE(out.width() == 4);
  // sample centers map to -0.25, 0.25, 0.75, 1.25 -> clamped 0, 0.25, 0.75, 1
  const std::uint8_t expected[4] = {0, 64, 191, 255};
  for (std::size_t x = 0; x < 4; ++x) {
    CHECK(out.at(x, 0).r == expected[x]);
    CHECK(out.at(x, 0).g == expected[x]);
    CHECK(out.at(x, 0).b == expected[x]);
  }
}

TEST_CASE("resize identity and constant images") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t) {
    const std::size_t w = 1 + rng() % 17, h = 1 + rng() % 17;
    const auto img = test::random_image(rng, w, h);
    CHECK(resize_bilinear(img, w, h) == img);
    const Rgb c{static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng())};
    const std::size_t tw = 1 + rng() % 30, th = 1 + rng() % 30;
    CHECK(resize_bilinear(test::constant_image(w, h, c), tw, th) == test::constant_image(tw, th, c));
  }
}

TEST_CASE("resize matches reference implementation") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 40; ++t) {
    const auto img = test::random_image(rng, 1 + rng() % 25, 1 + rng() % 25);
    const std::size_t tw = 1 + rng() % 25, th = 1 + rng() % 25;
    CAPTURE(img.width());
    CAPTURE(tw);
    CHECK(resize_bilinear(img, tw, th) == reference_resize(img, tw, th));
  }
}

TEST_CASE("resize output is monotone for a monotone ramp") {
  const RgbImage img(2, 1, {{0, 0, 0}, {255, 255, 255}});
  for (std::size_t tw = 1; tw < 40; ++tw) {
    const auto out = resize_bilinear(img, tw, 1);
    for (std::size_t x = 1; x < tw; ++x)
      CHECK(out.at(x - 1, 0).r <= out.at(x, 0).r);
  }
}

TEST_CASE("flip definition and involution") {
  const Rgb a{1, 2, 3}, b{4, 5, 6};
  CHECK(flip_horizontal(RgbImage(2, 1, {a, b})) == RgbImage(2, 1, {b, a}));
  CHECK(flip_horizontal(RgbImage(1, 1, {a})) == RgbImage(1, 1, {a}));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto img = test::random_image(rng, 1 + rng() % 20, 1 + rng() % 20);
    const auto f = flip_horizontal(img);
    for (std::size_t y = 0; y < img.height(); ++y)
      for (std::size_t x = 0; x < img.width(); ++x)
        REQUIRE(f.at(x, y) == img.at(img.width() - 1 - x, y));
    CHECK(flip_horizontal(f) == img);
  }
}

TEST_CASE("median blur examples") {
  std::vector<Rgb> px(9, Rgb{0, 7, 7});
  px[4] = {255, 7, 7};
  const auto out = median_blur(RgbImage(3, 3, px), 3);
  CHECK(out.at(1, 1) == Rgb{0, 7, 7});

  const RgbImage one(1, 1, {{9, 8, 7}});
  CHECK(median_blur(one, 3) == one);

  const auto c = test::constant_image(6, 4, {12, 34, 56});
  CHECK(median_blur(c, 3) == c);
  CHECK(median_blur(c, 5) == c);
  CHECK(flip_horizontal(c) == c);
}

TEST_CASE("median blur matches brute-force reference") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    const auto img = test::random_image(rng, 1 + rng() % 12, 1 + rng() % 12);
    const std::size_t window = 3 + 2 * (rng() % 3);
    CHECK(median_blur(img, window) == reference_median(img, window));
  }
}

TEST_CASE("median blur rejects bad windows") {
  const RgbImage img(2, 2);
  CHECK_THROWS_AS(median_blur(img, 4), ConfigError);
  CHECK_THROWS_AS(median_blur(img, 1), ConfigError);
  AugmentPlan plan;
  plan.blur_window = 2;
  CHECK_THROWS_AS(plan.validate(), ConfigError);
}

TEST_CASE("augment order and counts") {
  std::mt19937_64 rng(5);
  const auto img = test::random_image(rng, 5, 4);
  const std::vector<LabeledImage> one{{img, -1, "x.png"}};
  const auto out = augment(one, AugmentPlan{});
  REQUIRE(out.size() == 4);
  CHECK(out[0].image == img);
  CHECK(out[1].image == flip_horizontal(img));
  CHECK(out[2].image == median_blur(img, 3));
  CHECK(out[3].image == median_blur(flip_horizontal(img), 3));
  for (const auto& e : out) {
    CHECK(e.label == -1);
    CHECK(e.source == "x.png");
  }

  std::vector<LabeledImage> many;
  for (int i = 0; i < 190; ++i)
    many.push_back({test::random_image(rng, 3, 3), static_cast<Label>(i < 95 ? 1 : -1), ""});
  for (bool flip : {false, true})
    for (bool blur : {false, true}) {
      AugmentPlan plan;
      plan.enable_flip = flip;
      plan.enable_median_blur = blur;
      const auto aug = augment(many, plan);
      CHECK(aug.size() == (1 + flip) * (1 + blur) * many.size());
      CHECK(plan.multiplier() == static_cast<std::size_t>((1 + flip) * (1 + blur)));
      std::size_t pos = 0;
      for (const auto& e : aug)
        pos += e.label == 1;
      CHECK(pos == 95 * plan.multiplier());
      if (!flip && !blur)
        for (std::size_t i = 0; i < many.size(); ++i)
          CHECK(aug[i].image == many[i].image);
    }
}

TEST_CASE("transforms are deterministic") {
  std::mt19937_64 rng(6);
  const auto img = test::random_image(rng, 9, 7);
  CHECK(resize_bilinear(img, 4, 11) == resize_bilinear(img, 4, 11));
  CHECK(median_blur(img, 3) == median_blur(img, 3));
}
