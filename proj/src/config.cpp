#include "pyroclass/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>
#include <openssl/sha.h>

namespace pyroclass {

using nlohmann::json;
namespace fs = std::filesystem;

SvmConfig ExperimentConfig::solver() const {
  SvmConfig cfg = svm;
  cfg.cache_budget_bytes = gram_cache_budget_bytes;
  return cfg;
}

void ExperimentConfig::validate() const {
  if (resolutions.empty())
    throw ConfigError("config: resolutions must not be empty");
  for (auto r : resolutions)
    if (r < 1)
      throw ConfigError("config: resolutions must be >= 1");
  if (folds < 2)
    throw ConfigError("config: folds must be >= 2");
  if (models.empty())
    throw ConfigError("config: models must not be empty");
  augmentation.validate();
  if (!(svm.kkt_tol > 0.0) || svm.max_passes == 0)
    throw ConfigError("config: invalid svm solver settings");
}

unsigned effective_workers(unsigned configured) {
  if (const char* env = std::getenv("PYROCLASS_WORKERS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1)
      return static_cast<unsigned>(v);
    throw ConfigError(std::string("PYROCLASS_WORKERS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, configured);
}

namespace {

std::string sha256_hex(const std::string& text) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(text.data()), text.size(), digest);
  std::ostringstream os;
  for (unsigned char c : digest)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(c);
  return os.str();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<ScaledValue> scaled_values(const json& arr, const char* what) {
  std::vector<ScaledValue> out;
  for (const auto& v : arr) {
    if (v.is_string()) {
      if (v.get<std::string>() != "1/d")
        throw ConfigError(std::string("config: ") + what + " entries must be numbers or \"1/d\"");
      out.push_back(ScaledValue::inverse_of_dim());
    } else {
      out.push_back({v.get<double>(), false});
    }
  }
  return out;
}

template <typename T>
void read_if(const json& obj, const char* key, T& target) {
  if (obj.contains(key))
    target = obj.at(key).get<T>();
}

void apply_grids(const json& j, ExperimentConfig& cfg) {
  for (ModelFamily f : kAllModels)
    cfg.grids[f] = ParamGrid::defaults(f);
  if (!j.contains("grids"))
    return;
  const json& g = j.at("grids");
  std::vector<double> shared_c = ParamGrid{}.C;
  read_if(g, "C", shared_c);
  for (ModelFamily f : kAllModels)
    if (f != ModelFamily::logreg)
      cfg.grids[f].C = shared_c;
  if (g.contains("poly")) {
    const json& p = g.at("poly");
    auto& grid = cfg.grids[ModelFamily::svm_poly];
    read_if(p, "C", grid.C);
    read_if(p, "degree", grid.degrees);
    read_if(p, "offset", grid.offsets);
  }
  if (g.contains("gaussian")) {
    const json& p = g.at("gaussian");
    auto& grid = cfg.grids[ModelFamily::svm_gaussian];
    read_if(p, "C", grid.C);
    if (p.contains("gamma"))
      grid.gammas = scaled_values(p.at("gamma"), "gamma");
  }
  if (g.contains("sigmoid")) {
    const json& p = g.at("sigmoid");
    auto& grid = cfg.grids[ModelFamily::svm_sigmoid];
    read_if(p, "C", grid.C);
    if (p.contains("alpha"))
      grid.alphas = scaled_values(p.at("alpha"), "alpha");
    read_if(p, "beta", grid.betas);
  }
  if (g.contains("logreg")) {
    const json& p = g.at("logreg");
    auto& grid = cfg.grids[ModelFamily::logreg];
    read_if(p, "lambda", grid.lambdas);
    read_if(p, "learning_rate", grid.logreg.learning_rate);
    read_if(p, "iterations", grid.logreg.iterations);
  }
}

} // namespace

ExperimentConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
  ExperimentConfig cfg;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object())
      throw ConfigError("config: top level must be an object");
    if (!j.contains("train_root"))
      throw ConfigError("config: train_root is required");
    cfg.train_root = resolve(base_dir, j.at("train_root").get<std::string>());
    if (j.contains("test_roots"))
      for (const auto& [name, path] : j.at("test_roots").items())
        cfg.test_roots.emplace_back(name, resolve(base_dir, path.get<std::string>()));
    std::sort(cfg.test_roots.begin(), cfg.test_roots.end());
    read_if(j, "positive_dir", cfg.positive_dir);
    read_if(j, "negative_dir", cfg.negative_dir);
    read_if(j, "resolutions", cfg.resolutions);
    std::sort(cfg.resolutions.begin(), cfg.resolutions.end());
    cfg.resolutions.erase(std::unique(cfg.resolutions.begin(), cfg.resolutions.end()), cfg.resolutions.end());
    if (j.contains("models")) {
      cfg.models.clear();
      for (const auto& m : j.at("models")) {
        const ModelFamily f = parse_model_name(m.get<std::string>());
        if (std::find(cfg.models.begin(), cfg.models.end(), f) == cfg.models.end())
          cfg.models.push_back(f);
      }
    }
    apply_grids(j, cfg);
    read_if(j, "folds", cfg.folds);
    read_if(j, "seed", cfg.seed);
    read_if(j, "stratified", cfg.stratified);
    if (j.contains("augmentation")) {
      const json& a = j.at("augmentation");
      read_if(a, "flip", cfg.augmentation.enable_flip);
      read_if(a, "median_blur", cfg.augmentation.enable_median_blur);
      read_if(a, "blur_window", cfg.augmentation.blur_window);
    }
    if (j.contains("svm")) {
      const json& s = j.at("svm");
      read_if(s, "kkt_tol", cfg.svm.kkt_tol);
      read_if(s, "eps", cfg.svm.eps);
      read_if(s, "max_passes", cfg.svm.max_passes);
      read_if(s, "max_iter", cfg.svm.max_iter);
    }
    if (j.contains("output_dir"))
      cfg.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
    else
      cfg.output_dir = base_dir / "out";
    read_if(j, "gram_cache_budget_bytes", cfg.gram_cache_budget_bytes);
    read_if(j, "workers", cfg.workers);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  // Hash the normalized document (nlohmann sorts object keys) so formatting changes do not matter.
  cfg.hash = sha256_hex(j.dump());
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(path.string() + ": cannot read config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

} // namespace pyroclass
