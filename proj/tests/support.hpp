#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "pyroclass/dataset.hpp"
#include "pyroclass/image.hpp"

namespace test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("pyroclass_test_" + std::to_string(rd()) + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

inline pyroclass::RgbImage random_image(std::mt19937_64& rng, std::size_t w, std::size_t h) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<pyroclass::Rgb> px(w * h);
  for (auto& p : px)
    p = {static_cast<std::uint8_t>(byte(rng)), static_cast<std::uint8_t>(byte(rng)),
         static_cast<std::uint8_t>(byte(rng))};
  return {w, h, std::move(px)};
}

inline pyroclass::RgbImage constant_image(std::size_t w, std::size_t h, pyroclass::Rgb c) {
  return {w, h, std::vector<pyroclass::Rgb>(w * h, c)};
}

/// n x d uniform [0,1) rows; labels alternate +1/-1 unless `labels` is given.
inline pyroclass::LabeledDataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  pyroclass::LabeledDataset ds;
  ds.features = pyroclass::Matrix(n, d);
  for (auto& v : ds.features.data())
    v = u(rng);
  for (std::size_t i = 0; i < n; ++i)
    ds.labels.push_back(i % 2 == 0 ? 1 : -1);
  return ds;
}

/// Writes a synthetic class-colored corpus: red-dominant noise under fire/, green-dominant under nofire/.
void write_color_corpus(const std::filesystem::path& root, std::size_t per_class, std::size_t side,
                        std::uint64_t seed);

} // namespace test
