#include "support.hpp"

#include <cstdio>

namespace test {

void write_color_corpus(const std::filesystem::path& root, std::size_t per_class, std::size_t side,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> hi(140, 255), lo(0, 120);
  for (const auto& [dir, red] : {std::pair{"fire", true}, std::pair{"nofire", false}}) {
    std::filesystem::create_directories(root / dir);
    for (std::size_t k = 0; k < per_class; ++k) {
      std::vector<pyroclass::Rgb> px(side * side);
      for (auto& p : px) {
        const auto strong = static_cast<std::uint8_t>(hi(rng));
        const auto weak = static_cast<std::uint8_t>(lo(rng));
        const auto other = static_cast<std::uint8_t>(lo(rng));
        p = red ? pyroclass::Rgb{strong, weak, other} : pyroclass::Rgb{weak, strong, other};
      }
      char name[32];
      std::snprintf(name, sizeof name, "img_%04zu.png", k);
      pyroclass::save_png(pyroclass::RgbImage(side, side, std::move(px)), root / dir / name);
    }
  }
}

} // namespace test
