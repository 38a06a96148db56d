#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iis/frame.hpp"
#include "iis/optical_flow.hpp"
#include "iis/sampling.hpp"

namespace iis {

enum class Label { nonviolent, violent };  // violent is the positive class

std::string_view label_name(Label label);
std::optional<Label> parse_label(std::string_view name);

struct Detection {
  Label label = Label::nonviolent;
  double energy = 0.0;  // mean motion magnitude, >= 0
  double threshold_used = 0.0;
};

struct ConfusionCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long tn = 0;

  long long total() const { return tp + fp + fn + tn; }
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ManifestEntry {
  std::string path;
  Label label = Label::nonviolent;
};

struct BenchmarkReport {
  long long frames_processed = 0;
  double total_ms = 0.0;
  double ms_per_frame = 0.0;
  double budget_ms = 2000.0;
  bool within_budget = false;
};

struct LabeledEnergy {
  double energy = 0.0;
  Label label = Label::nonviolent;
};

struct EvaluationResult {
  std::vector<Detection> detections;
  ConfusionCounts counts;
  MetricsReport report;
};

// Mean motion score over all n-1 adjacent transitions.
double clip_motion_energy(const Clip& clip, const FlowParams& params = {});

// label = violent iff energy >= threshold.
Detection detect(const Clip& clip, double threshold,
                 const FlowParams& params = {});

// Sweeps {0} + midpoints of consecutive distinct energies + {max+1} and
// returns the candidate with the best F1 (ties: smallest candidate).
double calibrate_threshold(std::span<const LabeledEnergy> items);

ConfusionCounts confusion(std::span<const Label> predictions,
                          std::span<const Label> truths);

// Harmonic mean, 0 when precision + recall == 0.
double f1_score(double precision, double recall);

MetricsReport metrics(const ConfusionCounts& c);

// Manifest: one "path,label" per line; '#' lines and blank lines ignored.
std::vector<ManifestEntry> parse_manifest(std::string_view text);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

// Lint checks; returns human-readable warnings, never fails.
std::vector<std::string> validate_manifest(std::span<const ManifestEntry> entries,
                                           std::span<const Clip> clips);

// Loads each entry's clip (relative paths resolve against base_dir) and
// computes its motion energy.
std::vector<LabeledEnergy> manifest_energies(
    std::span<const ManifestEntry> entries, const FlowParams& params = {},
    const std::filesystem::path& base_dir = ".");

EvaluationResult evaluate(std::span<const ManifestEntry> entries,
                          double threshold, const FlowParams& params = {},
                          const std::filesystem::path& base_dir = ".");

// Times the full sample -> super image -> detect pipeline, sequentially.
BenchmarkReport benchmark(const Clip& clip, const SamplerSpec& spec,
                          const FlowParams& params = {}, int repetitions = 1,
                          double budget_ms = 2000.0);

}  // namespace iis
