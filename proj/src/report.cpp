#include "pyroclass/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pyroclass/svg.hpp"

namespace pyroclass {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& v) {
  if (v.is_null())
    return std::nullopt;
  return v.get<double>();
}

json curve_json(const RocCurve& c) {
  json arr = json::array();
  for (const auto& p : c.points)
    arr.push_back({p.fpr, p.tpr});
  return arr;
}

RocCurve curve_from(const json& arr) {
  RocCurve c;
  for (const auto& p : arr)
    c.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return c;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fixed6(const std::optional<double>& v) { return v ? fixed6(*v) : "n/a"; }

std::string file_safe(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out)
    throw DataError(path.string() + ": cannot write");
}

template <typename T>
std::vector<T> distinct_in_order(const std::vector<ReportRow>& rows, T ReportRow::*field) {
  std::vector<T> out;
  for (const auto& r : rows)
    if (std::find(out.begin(), out.end(), r.*field) == out.end())
      out.push_back(r.*field);
  return out;
}

std::vector<double> unit_ticks() {
  std::vector<double> t;
  for (int k = 0; k <= 10; ++k)
    t.push_back(k / 10.0);
  return t;
}

LineChart accuracy_chart(const SweepReport& report, const std::string& test_set) {
  LineChart chart;
  chart.title = "Accuracy vs resolution (" + test_set + ")";
  chart.x_label = "Resolution (pixels per side)";
  chart.y_label = "Accuracy";
  std::set<std::uint32_t> resolutions;
  for (const auto& r : report.rows)
    if (r.test_set == test_set)
      resolutions.insert(r.resolution);
  chart.x_min = *resolutions.begin();
  chart.x_max = *resolutions.rbegin();
  if (chart.x_max == chart.x_min) {
    chart.x_min -= 5;
    chart.x_max += 5;
  }
  for (auto r : resolutions)
    chart.x_ticks.push_back(r);
  chart.y_ticks = unit_ticks();
  const auto models = distinct_in_order(report.rows, &ReportRow::model);
  for (std::size_t m = 0; m < models.size(); ++m) {
    ChartSeries s;
    s.label = models[m];
    s.color = palette(m);
    for (const auto& r : report.rows)
      if (r.model == models[m] && r.test_set == test_set)
        s.points.emplace_back(r.resolution, r.accuracy);
    std::sort(s.points.begin(), s.points.end());
    if (!s.points.empty())
      chart.series.push_back(std::move(s));
  }
  return chart;
}

LineChart roc_chart(const SweepReport& report, const std::string& model, const std::string& test_set) {
  LineChart chart;
  chart.title = "ROC: " + model + " (" + test_set + ")";
  chart.x_label = "False Positive Rate";
  chart.y_label = "True Positive Rate";
  chart.x_ticks = unit_ticks();
  chart.y_ticks = unit_ticks();
  chart.diagonal = true;
  chart.width = 720;
  for (const auto& c : report.operating_curves) {
    if (c.model != model || c.test_set != test_set)
      continue;
    ChartSeries s;
    s.label = "operating points, AUC " + fixed6(c.auc);
    s.color = "#000000";
    s.stroke_width = 2.5;
    for (const auto& p : c.roc.points)
      s.points.emplace_back(p.fpr, p.tpr);
    chart.series.push_back(std::move(s));
  }
  std::size_t k = 0;
  for (const auto& r : report.rows) {
    if (r.model != model || r.test_set != test_set || r.roc.points.empty())
      continue;
    ChartSeries s;
    s.label = std::to_string(r.resolution) + "px, AUC " + fixed6(r.auc);
    s.color = palette(k++);
    s.stroke_width = 1.0;
    s.markers = false;
    for (const auto& p : r.roc.points)
      s.points.emplace_back(p.fpr, p.tpr);
    chart.series.push_back(std::move(s));
  }
  return chart;
}

} // namespace

void save_report(const SweepReport& report, const fs::path& path) {
  json j;
  const auto& p = report.provenance;
  j["provenance"] = {{"config_hash", p.config_hash}, {"seed", p.seed},       {"folds", p.folds},
                     {"stratified", p.stratified},   {"workers", p.workers}, {"started_at", p.started_at},
                     {"finished_at", p.finished_at}, {"version", p.version}};
  j["rows"] = json::array();
  for (const auto& r : report.rows)
    j["rows"].push_back({{"model", r.model},
                         {"test_set", r.test_set},
                         {"resolution", r.resolution},
                         {"best_params", r.best_params},
                         {"cv_mean", r.cv_mean},
                         {"confusion_matrix", {{r.cm.tp, r.cm.fp}, {r.cm.fn, r.cm.tn}}},
                         {"accuracy", r.accuracy},
                         {"tpr", optional_json(r.tpr)},
                         {"fpr", optional_json(r.fpr)},
                         {"f1", optional_json(r.f1)},
                         {"auc", optional_json(r.auc)},
                         {"roc", curve_json(r.roc)}});
  j["operating_curves"] = json::array();
  for (const auto& c : report.operating_curves)
    j["operating_curves"].push_back(
        {{"model", c.model}, {"test_set", c.test_set}, {"auc", c.auc}, {"roc", curve_json(c.roc)}});
  j["failures"] = json::array();
  for (const auto& f : report.failures)
    j["failures"].push_back(
        {{"model", f.model}, {"resolution", f.resolution}, {"test_set", f.test_set}, {"message", f.message}});
  write_text(path, j.dump(2) + "\n");
}

SweepReport load_report(const fs::path& path) {
  std::ifstream in(path);
  if (!in)
    throw DataError(path.string() + ": cannot read report");
  SweepReport report;
  try {
    const json j = json::parse(in);
    const json& p = j.at("provenance");
    report.provenance = {p.at("config_hash").get<std::string>(), p.at("seed").get<std::uint64_t>(),
                         p.at("folds").get<std::size_t>(),       p.at("stratified").get<bool>(),
                         p.at("workers").get<unsigned>(),        p.at("started_at").get<std::string>(),
                         p.at("finished_at").get<std::string>(), p.at("version").get<std::string>()};
    for (const auto& r : j.at("rows")) {
      ReportRow row;
      row.model = r.at("model").get<std::string>();
      row.test_set = r.at("test_set").get<std::string>();
      row.resolution = r.at("resolution").get<std::uint32_t>();
      row.best_params = r.at("best_params").get<std::string>();
      row.cv_mean = r.at("cv_mean").get<double>();
      const json& cm = r.at("confusion_matrix");
      row.cm = {cm.at(0).at(0).get<std::uint64_t>(), cm.at(0).at(1).get<std::uint64_t>(),
                cm.at(1).at(0).get<std::uint64_t>(), cm.at(1).at(1).get<std::uint64_t>()};
      row.accuracy = r.at("accuracy").get<double>();
      row.tpr = optional_from(r.at("tpr"));
      row.fpr = optional_from(r.at("fpr"));
      row.f1 = optional_from(r.at("f1"));
      row.auc = optional_from(r.at("auc"));
      row.roc = curve_from(r.at("roc"));
      report.rows.push_back(std::move(row));
    }
    for (const auto& c : j.at("operating_curves"))
      report.operating_curves.push_back({c.at("model").get<std::string>(), c.at("test_set").get<std::string>(),
                                         curve_from(c.at("roc")), c.at("auc").get<double>()});
    for (const auto& f : j.at("failures"))
      report.failures.push_back({f.at("model").get<std::string>(), f.at("resolution").get<std::uint32_t>(),
                                 f.at("test_set").get<std::string>(), f.at("message").get<std::string>()});
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": malformed report: " + e.what());
  }
  return report;
}

std::string results_csv(const SweepReport& report) {
  std::ostringstream os;
  os << "model,test_set,resolution,accuracy,tp,fp,fn,tn,tpr,fpr,f1,auc\n";
  for (const auto& r : report.rows)
    os << r.model << ',' << r.test_set << ',' << r.resolution << ',' << fixed6(r.accuracy) << ',' << r.cm.tp << ','
       << r.cm.fp << ',' << r.cm.fn << ',' << r.cm.tn << ',' << fixed6(r.tpr) << ',' << fixed6(r.fpr) << ','
       << fixed6(r.f1) << ',' << fixed6(r.auc) << '\n';
  return os.str();
}

std::vector<fs::path> cmd_report(const SweepReport& report, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw DataError(out_dir.string() + ": cannot create output directory");
  std::vector<fs::path> written;
  const auto csv = out_dir / "results.csv";
  write_text(csv, results_csv(report));
  written.push_back(csv);

  const auto test_sets = distinct_in_order(report.rows, &ReportRow::test_set);
  const auto models = distinct_in_order(report.rows, &ReportRow::model);
  for (const auto& t : test_sets) {
    const auto path = out_dir / ("accuracy_" + file_safe(t) + ".svg");
    write_text(path, render_svg(accuracy_chart(report, t)));
    written.push_back(path);
    for (const auto& m : models) {
      if (std::none_of(report.rows.begin(), report.rows.end(),
                       [&](const ReportRow& r) { return r.model == m && r.test_set == t; }))
        continue;
      const auto roc_path = out_dir / ("roc_" + file_safe(m) + "_" + file_safe(t) + ".svg");
      write_text(roc_path, render_svg(roc_chart(report, m, t)));
      written.push_back(roc_path);
    }
  }

  if (!report.failures.empty()) {
    std::ostringstream os;
    for (const auto& f : report.failures)
      os << f.model << ',' << f.resolution << ',' << f.test_set << ": " << f.message << '\n';
    const auto path = out_dir / "failures.log";
    write_text(path, os.str());
    written.push_back(path);
  }
  return written;
}

} // namespace pyroclass
