#include "iis/serialize.hpp"

#include <json.hpp>

namespace iis {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
  return nlohmann::json(value).dump();
}

std::string detection_json(const Detection& d) {
  ordered_json j;
  j["label"] = label_name(d.label);
  j["energy"] = d.energy;
  j["threshold"] = d.threshold_used;
  return j.dump();
}

std::string metrics_json(const MetricsReport& report, const ConfusionCounts& counts) {
  ordered_json j;
  j["accuracy"] = report.accuracy;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f1"] = report.f1;
  j["tp"] = counts.tp;
  j["fp"] = counts.fp;
  j["fn"] = counts.fn;
  j["tn"] = counts.tn;
  return j.dump();
}

std::string benchmark_json(const BenchmarkReport& report) {
  ordered_json j;
  j["frames_processed"] = report.frames_processed;
  j["total_ms"] = report.total_ms;
  j["ms_per_frame"] = report.ms_per_frame;
  j["budget_ms"] = report.budget_ms;
  j["within_budget"] = report.within_budget;
  return j.dump();
}

}  // namespace iis
