#include "vigil/report.hpp"

#include <cstdio>

#include "json_util.hpp"
#include "vigil/errors.hpp"

namespace vigil {

namespace {

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

Report evaluate(const std::vector<Label>& predictions, const std::vector<Label>& truths) {
  if (predictions.size() != truths.size()) {
    throw ValidationError("evaluate: " + std::to_string(predictions.size()) +
                          " predictions but " + std::to_string(truths.size()) + " truths");
  }
  Report r;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    r.confusion(static_cast<int>(truths[i]), static_cast<int>(predictions[i])) += 1;
  }
  for (int c = 0; c < 3; ++c) {
    const std::int64_t tp = r.confusion(c, c);
    const std::int64_t predicted = r.confusion.col(c).sum();
    const std::int64_t actual = r.confusion.row(c).sum();
    ClassMetrics& m = r.per_class[c];
    m.precision = ratio(tp, predicted);
    m.recall = ratio(tp, actual);
    m.f1 = (m.precision + m.recall) == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    m.support = actual;
    r.macro.precision += m.precision / 3.0;
    r.macro.recall += m.recall / 3.0;
    r.macro.f1 += m.f1 / 3.0;
    r.macro.support += actual;
  }
  r.accuracy = ratio(r.confusion.trace(), static_cast<std::int64_t>(truths.size()));
  return r;
}

std::string format_report(const Report& r) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %10s\n", "", "precision", "recall",
                "f1-score", "support");
  out += line;
  for (Label l : kAllLabels) {
    const ClassMetrics& m = r.per_class[static_cast<std::size_t>(l)];
    std::snprintf(line, sizeof line, "%-12s %10.2f %10.2f %10.2f %10lld\n",
                  std::string(to_string(l)).c_str(), m.precision, m.recall, m.f1,
                  static_cast<long long>(m.support));
    out += line;
  }
  out += "\n";
  std::snprintf(line, sizeof line, "%-12s %10s %10s %10.2f %10lld\n", "accuracy", "", "",
                r.accuracy, static_cast<long long>(r.macro.support));
  out += line;
  std::snprintf(line, sizeof line, "%-12s %10.2f %10.2f %10.2f %10lld\n", "macro avg",
                r.macro.precision, r.macro.recall, r.macro.f1,
                static_cast<long long>(r.macro.support));
  out += line;
  return out;
}

std::string report_json(const Report& r) {
  detail::ordered_json j;
  detail::ordered_json confusion = detail::ordered_json::array();
  for (int t = 0; t < 3; ++t) {
    confusion.push_back({r.confusion(t, 0), r.confusion(t, 1), r.confusion(t, 2)});
  }
  j["labels"] = {"neutral", "aggressor", "victim"};
  j["confusion"] = std::move(confusion);
  auto metrics = [](const ClassMetrics& m) {
    return detail::ordered_json{{"precision", m.precision},
                                {"recall", m.recall},
                                {"f1", m.f1},
                                {"support", m.support}};
  };
  for (Label l : kAllLabels) {
    j["classes"][std::string(to_string(l))] = metrics(r.per_class[static_cast<std::size_t>(l)]);
  }
  j["macro"] = metrics(r.macro);
  j["accuracy"] = r.accuracy;
  return j.dump();
}

}  // namespace vigil
