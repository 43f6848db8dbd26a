#include "pyroclass/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace pyroclass {

std::string ConfusionMatrix::to_string() const {
  return "[[" + std::to_string(tp) + ", " + std::to_string(fp) + "], [" + std::to_string(fn) + ", " +
         std::to_string(tn) + "]]";
}

ConfusionMatrix confusion(std::span<const Label> labels, std::span<const Label> predictions) {
  if (labels.size() != predictions.size())
    throw DimensionError("confusion: " + std::to_string(labels.size()) + " labels vs " +
                         std::to_string(predictions.size()) + " predictions");
  if (labels.empty())
    throw DimensionError("confusion: empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Label y = labels[i];
    const Label p = predictions[i];
    if ((y != 1 && y != -1) || (p != 1 && p != -1))
      throw DataError("confusion: label values must be +1 or -1");
    if (y > 0)
      ++(p > 0 ? cm.tp : cm.fn);
    else
      ++(p > 0 ? cm.fp : cm.tn);
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0)
    throw DataError("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0)
    return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

std::optional<double> tpr(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fn); }
std::optional<double> fpr(const ConfusionMatrix& cm) { return ratio(cm.fp, cm.fp + cm.tn); }
std::optional<double> f1(const ConfusionMatrix& cm) { return ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn); }

RocCurve roc_from_scores(std::span<const Label> labels, std::span<const double> scores) {
  if (labels.size() != scores.size())
    throw DimensionError("roc_from_scores: " + std::to_string(labels.size()) + " labels vs " +
                         std::to_string(scores.size()) + " scores");
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label{1}));
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0)
    throw SingleClassError("ROC needs at least one positive and one negative label");

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double s = scores[order[k]];
    for (; k < order.size() && scores[order[k]] == s; ++k)
      ++(labels[order[k]] > 0 ? tp : fp);
    curve.points.push_back(
        {static_cast<double>(fp) / static_cast<double>(negatives), static_cast<double>(tp) / static_cast<double>(positives)});
  }
  if (curve.points.back() != RocPoint{1.0, 1.0})
    curve.points.push_back({1.0, 1.0});
  return curve;
}

RocCurve roc_from_points(std::vector<RocPoint> points) {
  for (const auto& p : points)
    if (!(p.fpr >= 0.0 && p.fpr <= 1.0 && p.tpr >= 0.0 && p.tpr <= 1.0))
      throw DataError("ROC operating point outside [0,1]");
  std::sort(points.begin(), points.end(),
            [](const RocPoint& a, const RocPoint& b) { return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr; });
  RocCurve curve;
  curve.points.reserve(points.size() + 2);
  curve.points.push_back({0.0, 0.0});
  curve.points.insert(curve.points.end(), points.begin(), points.end());
  curve.points.push_back({1.0, 1.0});
  for (std::size_t k = 1; k < curve.points.size(); ++k)
    curve.points[k].tpr = std::max(curve.points[k].tpr, curve.points[k - 1].tpr);
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& a = curve.points[k - 1];
    const auto& b = curve.points[k];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return area;
}

} // namespace pyroclass
