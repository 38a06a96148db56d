#pragma once

#include <string>

#include "iis/analysis.hpp"

namespace iis {

// Shared JSON emission so the CLI and the HTTP service produce identical
// payloads for identical results. Keys appear in a fixed order.

std::string detection_json(const Detection& d);
std::string metrics_json(const MetricsReport& report, const ConfusionCounts& counts);
std::string benchmark_json(const BenchmarkReport& report);

// Shortest round-trip decimal form of a double (JSON number grammar).
std::string format_double(double value);

}  // namespace iis
