#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pyroclass/image.hpp"

namespace pyroclass {

/// Counts laid out as [[TP, FP], [FN, TN]].
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  /// "[[TP, FP], [FN, TN]]"
  std::string to_string() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws DimensionError on length mismatch or empty input, DataError on labels outside {+1,-1}.
ConfusionMatrix confusion(std::span<const Label> labels, std::span<const Label> predictions);

/// (TP + TN) / total. Throws DataError for an empty matrix.
double accuracy(const ConfusionMatrix& cm);

// Rates return std::nullopt when their denominator is zero ("n/a" in reports).

/// TP / (TP + FN)
std::optional<double> tpr(const ConfusionMatrix& cm);
/// FP / (FP + TN)
std::optional<double> fpr(const ConfusionMatrix& cm);
/// 2TP / (2TP + FP + FN)
std::optional<double> f1(const ConfusionMatrix& cm);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// Points ordered with non-decreasing fpr and tpr, from (0,0) to (1,1).
struct RocCurve {
  std::vector<RocPoint> points;
  friend bool operator==(const RocCurve&, const RocCurve&) = default;
};

/// Threshold sweep: scores sorted descending, one point per group of equal scores.
/// Throws SingleClassError unless both labels occur.
RocCurve roc_from_scores(std::span<const Label> labels, std::span<const double> scores);

/// Curve through a set of operating points: sorted by (fpr, tpr), bracketed by (0,0) and (1,1),
/// tpr replaced by its running maximum. Throws DataError for values outside [0,1].
RocCurve roc_from_points(std::vector<RocPoint> points);

/// Trapezoidal area under the curve.
double auc(const RocCurve& curve);

} // namespace pyroclass
