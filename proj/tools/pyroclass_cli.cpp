// pyroclass: prepare datasets, run resolution sweeps, render reports, train/evaluate single models.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pyroclass/config.hpp"
#include "pyroclass/experiment.hpp"
#include "pyroclass/logreg.hpp"
#include "pyroclass/model_select.hpp"
#include "pyroclass/svm.hpp"

namespace fs = std::filesystem;
using namespace pyroclass;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

std::string fmt6(const std::optional<double>& v) {
  if (!v)
    return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

FittedModel load_any_model(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError(path.string() + ": cannot open model file");
  char magic[4] = {};
  in.read(magic, 4);
  const std::string m(magic, in ? 4 : 0);
  if (m == "SVMM") {
    SvmModel model = load_svm_model(path);
    ParamCell cell;
    cell.kernel = model.kernel();
    if (std::holds_alternative<PolynomialKernel>(cell.kernel))
      cell.family = ModelFamily::svm_poly;
    else if (std::holds_alternative<SigmoidKernel>(cell.kernel))
      cell.family = ModelFamily::svm_sigmoid;
    return {cell, std::move(model)};
  }
  if (m == "LOGR") {
    ParamCell cell;
    cell.family = ModelFamily::logreg;
    return {cell, load_logreg_model(path)};
  }
  throw DataError(path.string() + ": bad magic (expected SVMM or LOGR model file)");
}

int run_prepare(const fs::path& config_path) {
  const auto cfg = load_config(config_path);
  const auto summary = cmd_prepare(cfg);
  std::cout << "ingested " << summary.train_images << " training images";
  if (summary.skipped_files)
    std::cout << " (skipped " << summary.skipped_files << " non-image files)";
  std::cout << "\n";
  for (const auto& p : summary.written)
    std::cout << "wrote " << p.string() << "\n";
  return 0;
}

int run_sweep(const fs::path& config_path, bool prepare) {
  const auto cfg = load_config(config_path);
  const auto report = cmd_sweep(cfg, prepare);
  const auto report_path = cfg.output_dir / "report.json";
  save_report(report, report_path);
  std::cout << "wrote " << report_path.string() << "\n";
  for (const auto& p : cmd_report(report, cfg.output_dir))
    std::cout << "wrote " << p.string() << "\n";
  if (!report.failures.empty())
    std::cerr << report.failures.size() << " sweep cell(s) failed; see failures.log\n";
  return 0;
}

int run_report(const fs::path& in, const fs::path& out) {
  const auto report = load_report(in);
  for (const auto& p : cmd_report(report, out))
    std::cout << "wrote " << p.string() << "\n";
  return 0;
}

int run_train(const fs::path& config_path, const std::string& model_name_arg, std::uint32_t resolution,
              const fs::path& out) {
  const ModelFamily family = parse_model_name(model_name_arg);
  const auto cfg = load_config(config_path);
  const auto data_path = train_file(cfg, resolution);
  if (!fs::exists(data_path))
    throw DataError(data_path.string() + ": prepared dataset missing (run prepare first)");
  const auto ds = load_dataset(data_path);
  SearchOptions opts;
  opts.stratified = cfg.stratified;
  opts.workers = effective_workers(cfg.workers);
  opts.svm = cfg.solver();
  const auto cells = cfg.grid(family).expand(ds.dim());
  ParamCell chosen = cells.front();
  if (cells.size() > 1) {
    const auto gs = grid_search(ds, cfg.grid(family), cfg.folds, cfg.seed, opts);
    chosen = gs.best_row().params;
    std::cout << "cv mean accuracy " << fmt6(gs.best_row().cv.mean) << "\n";
  }
  const auto fitted = fit_cell(ds, chosen, opts.svm);
  std::visit([&](const auto& m) { save_model(m, out); }, fitted.model);
  std::cout << "model " << model_name_arg << " " << chosen.describe() << "\n";
  if (const auto* svm = std::get_if<SvmModel>(&fitted.model))
    std::cout << "support vectors " << svm->dual_coefs().size() << ", iterations " << svm->meta().iterations
              << (svm->meta().converged ? "" : " (iteration cap reached before KKT tolerance)") << "\n";
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

int run_eval(const fs::path& model_path, const fs::path& data_path) {
  const auto fitted = load_any_model(model_path);
  const auto ds = load_dataset(data_path);
  if (ds.size() == 0)
    throw DataError(data_path.string() + ": dataset is empty");
  if (fitted.dim() != ds.dim())
    throw DimensionError("dimension mismatch: model expects " + std::to_string(fitted.dim()) +
                         " features, data has " + std::to_string(ds.dim()));
  std::vector<Label> preds(ds.size());
  std::vector<double> scores(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    scores[i] = fitted.decision(ds.row(i));
    preds[i] = scores[i] >= 0.0 ? Label{1} : Label{-1};
  }
  const auto cm = confusion(ds.labels, preds);
  std::optional<double> area;
  if (ds.has_both_classes())
    area = auc(roc_from_scores(ds.labels, scores));
  std::cout << "accuracy,tp,fp,fn,tn,tpr,fpr,f1,auc\n"
            << fmt6(accuracy(cm)) << ',' << cm.tp << ',' << cm.fp << ',' << cm.fn << ',' << cm.tn << ','
            << fmt6(tpr(cm)) << ',' << fmt6(fpr(cm)) << ',' << fmt6(f1(cm)) << ',' << fmt6(area) << "\n"
            << "confusion matrix " << cm.to_string() << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel SVM / logistic regression image classification experiments"};
  app.require_subcommand(1);

  fs::path config_path, report_in, out_path, model_file, data_file;
  std::string model_arg;
  std::uint32_t resolution = 0;
  bool prepare_flag = false;

  auto* prepare = app.add_subcommand("prepare", "Resize, augment and vectorize datasets into FFDS files");
  prepare->add_option("--config", config_path, "Experiment JSON config")->required();

  auto* sweep = app.add_subcommand("sweep", "Grid search, refit and evaluate every model at every resolution");
  sweep->add_option("--config", config_path, "Experiment JSON config")->required();
  sweep->add_flag("--prepare", prepare_flag, "Run prepare first if dataset files are missing");

  auto* report = app.add_subcommand("report", "Write results.csv and SVG plots from a report.json");
  report->add_option("--in", report_in, "report.json written by sweep")->required();
  report->add_option("--out", out_path, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Fit one model at one resolution and save it");
  train->add_option("--config", config_path, "Experiment JSON config")->required();
  train->add_option("--model", model_arg, "logreg | svm-sigmoid | svm-poly | svm-gaussian")->required();
  train->add_option("--resolution", resolution, "Square resolution of the prepared training file")->required();
  train->add_option("--out", out_path, "Model file to write")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a saved model on an FFDS file");
  eval->add_option("--model-file", model_file, "SVMM or LOGR model file")->required();
  eval->add_option("--data", data_file, "FFDS dataset")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*prepare)
      return run_prepare(config_path);
    if (*sweep)
      return run_sweep(config_path, prepare_flag);
    if (*report)
      return run_report(report_in, out_path);
    if (*train)
      return run_train(config_path, model_arg, resolution, out_path);
    if (*eval)
      return run_eval(model_file, data_file);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}
