#include "pyroclass/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

#include "parallel.hpp"
#include "pyroclass/dataset.hpp"
#include "pyroclass/preprocess.hpp"

namespace pyroclass {

namespace fs = std::filesystem;

fs::path train_file(const ExperimentConfig& cfg, std::uint32_t resolution) {
  return cfg.output_dir / ("train_" + std::to_string(resolution) + ".ffds");
}

fs::path test_file(const ExperimentConfig& cfg, const std::string& test_set, std::uint32_t resolution) {
  return cfg.output_dir / ("test_" + test_set + "_" + std::to_string(resolution) + ".ffds");
}

namespace {

std::vector<LabeledImage> resized(const std::vector<LabeledImage>& images, std::uint32_t r) {
  std::vector<LabeledImage> out;
  out.reserve(images.size());
  for (const auto& item : images)
    out.push_back({resize_bilinear(item.image, r, r), item.label, item.source});
  return out;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

} // namespace

PrepareSummary cmd_prepare(const ExperimentConfig& cfg) {
  cfg.validate();
  std::error_code ec;
  if (!fs::is_directory(cfg.train_root, ec))
    throw DataError(cfg.train_root.string() + ": train_root does not exist");
  const IngestResult train = ingest_directory(cfg.train_root, cfg.positive_dir, cfg.negative_dir);
  std::vector<IngestResult> tests;
  for (const auto& [name, root] : cfg.test_roots) {
    if (!fs::is_directory(root, ec))
      throw DataError(root.string() + ": test root '" + name + "' does not exist");
    tests.push_back(ingest_directory(root, cfg.positive_dir, cfg.negative_dir));
  }

  fs::create_directories(cfg.output_dir, ec);
  if (ec)
    throw DataError(cfg.output_dir.string() + ": cannot create output directory: " + ec.message());

  PrepareSummary summary;
  summary.train_images = train.entries.size();
  summary.skipped_files = train.skipped;
  for (const auto& t : tests)
    summary.skipped_files += t.skipped;

  std::vector<std::vector<fs::path>> written(cfg.resolutions.size());
  detail::parallel_for(cfg.resolutions.size(), effective_workers(cfg.workers), [&](std::size_t k) {
    const std::uint32_t r = cfg.resolutions[k];
    const auto train_ds = make_dataset(augment(resized(train.entries, r), cfg.augmentation), r);
    save_dataset(train_ds, train_file(cfg, r));
    written[k].push_back(train_file(cfg, r));
    for (std::size_t t = 0; t < tests.size(); ++t) {
      const auto path = test_file(cfg, cfg.test_roots[t].first, r);
      save_dataset(make_dataset(resized(tests[t].entries, r), r), path);
      written[k].push_back(path);
    }
  });
  for (auto& w : written)
    summary.written.insert(summary.written.end(), w.begin(), w.end());
  return summary;
}

namespace {

ReportRow evaluate(const FittedModel& fitted, const LabeledDataset& test, const std::string& model,
                   const std::string& test_set, std::uint32_t resolution) {
  if (test.size() == 0)
    throw DataError("test set '" + test_set + "' is empty");
  if (fitted.dim() != test.dim())
    throw DimensionError("test set '" + test_set + "' has " + std::to_string(test.dim()) +
                         " features, model expects " + std::to_string(fitted.dim()));
  ReportRow row;
  row.model = model;
  row.test_set = test_set;
  row.resolution = resolution;
  std::vector<double> scores(test.size());
  std::vector<Label> preds(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    scores[i] = fitted.decision(test.row(i));
    preds[i] = scores[i] >= 0.0 ? Label{1} : Label{-1};
  }
  row.cm = confusion(test.labels, preds);
  row.accuracy = accuracy(row.cm);
  row.tpr = tpr(row.cm);
  row.fpr = fpr(row.cm);
  row.f1 = f1(row.cm);
  if (test.has_both_classes()) {
    row.roc = roc_from_scores(test.labels, scores);
    row.auc = auc(row.roc);
  }
  return row;
}

struct CellOutput {
  std::vector<ReportRow> rows;
  std::vector<Failure> failures;
};

} // namespace

void compute_operating_curves(SweepReport& report) {
  report.operating_curves.clear();
  for (const auto& row : report.rows) {
    auto it = std::find_if(report.operating_curves.begin(), report.operating_curves.end(), [&](const auto& c) {
      return c.model == row.model && c.test_set == row.test_set;
    });
    if (it == report.operating_curves.end()) {
      report.operating_curves.push_back({row.model, row.test_set, {}, 0.0});
      it = std::prev(report.operating_curves.end());
    }
    if (row.tpr && row.fpr)
      it->roc.points.push_back({*row.fpr, *row.tpr});
  }
  for (auto& c : report.operating_curves) {
    c.roc = roc_from_points(std::move(c.roc.points));
    c.auc = auc(c.roc);
  }
}

SweepReport cmd_sweep(const ExperimentConfig& cfg, bool prepare_missing) {
  cfg.validate();
  for (ModelFamily m : cfg.models)
    cfg.grid(m).expand(1);

  auto missing = [&]() -> std::optional<fs::path> {
    for (auto r : cfg.resolutions) {
      if (!fs::exists(train_file(cfg, r)))
        return train_file(cfg, r);
      for (const auto& [name, root] : cfg.test_roots)
        if (!fs::exists(test_file(cfg, name, r)))
          return test_file(cfg, name, r);
    }
    return std::nullopt;
  };
  if (auto path = missing()) {
    if (!prepare_missing)
      throw DataError(path->string() + ": prepared dataset missing (run prepare first)");
    cmd_prepare(cfg);
  }

  SweepReport report;
  const unsigned workers = effective_workers(cfg.workers);
  report.provenance = {cfg.hash, cfg.seed, cfg.folds, cfg.stratified, workers, utc_now(), "", PYROCLASS_VERSION};

  const std::size_t n_res = cfg.resolutions.size();
  std::vector<CellOutput> cells(cfg.models.size() * n_res);
  const SvmConfig solver = cfg.solver();

  detail::parallel_for(cells.size(), workers, [&](std::size_t c) {
    const ModelFamily family = cfg.models[c / n_res];
    const std::uint32_t r = cfg.resolutions[c % n_res];
    const std::string model(model_name(family));
    CellOutput& out = cells[c];
    auto fail_all = [&](const std::string& msg) {
      for (const auto& [name, root] : cfg.test_roots)
        out.failures.push_back({model, r, name, msg});
    };
    try {
      const LabeledDataset train = load_dataset(train_file(cfg, r));
      SearchOptions opts;
      opts.stratified = cfg.stratified;
      opts.svm = solver;
      const GridSearchResult gs = grid_search(train, cfg.grid(family), cfg.folds, cfg.seed, opts);
      const GridRow& best = gs.best_row();
      const FittedModel fitted = fit_cell(train, best.params, solver);
      for (const auto& [name, root] : cfg.test_roots) {
        try {
          ReportRow row = evaluate(fitted, load_dataset(test_file(cfg, name, r)), model, name, r);
          row.best_params = best.params.describe();
          row.cv_mean = *best.cv.mean;
          out.rows.push_back(std::move(row));
        } catch (const DataError& e) {
          out.failures.push_back({model, r, name, e.what()});
        }
      }
    } catch (const DataError& e) {
      fail_all(e.what());
    }
  });

  for (auto& cell : cells) {
    report.rows.insert(report.rows.end(), cell.rows.begin(), cell.rows.end());
    report.failures.insert(report.failures.end(), cell.failures.begin(), cell.failures.end());
  }
  compute_operating_curves(report);
  report.provenance.finished_at = utc_now();
  return report;
}

} // namespace pyroclass
