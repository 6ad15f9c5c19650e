#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vigil/types.hpp"

namespace vigil {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

/// Multiclass classification report. confusion(true, predicted).
struct Report {
  Eigen::Matrix<std::int64_t, 3, 3> confusion = Eigen::Matrix<std::int64_t, 3, 3>::Zero();
  std::array<ClassMetrics, kNumClasses> per_class{};
  ClassMetrics macro;
  double accuracy = 0.0;
};

/// Precision, recall and F1 per class with 0/0 taken as 0; macro averages are
/// unweighted means. Throws ValidationError on length mismatch.
Report evaluate(const std::vector<Label>& predictions, const std::vector<Label>& truths);

/// Aligned text table, one row per class plus macro average.
std::string format_report(const Report& report);
std::string report_json(const Report& report);

}  // namespace vigil
