#include "iis/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "iis/error.hpp"
#include "iis/media_io.hpp"
#include "iis/super_image.hpp"

namespace iis {

std::string_view label_name(Label label) {
  return label == Label::violent ? "violent" : "nonviolent";
}

std::optional<Label> parse_label(std::string_view name) {
  if (name == "violent") return Label::violent;
  if (name == "nonviolent") return Label::nonviolent;
  return std::nullopt;
}

double clip_motion_energy(const Clip& clip, const FlowParams& params) {
  if (clip.frame_count() < 2) {
    throw Error(Errc::too_few_frames, "motion energy needs at least 2 frames");
  }
  double sum = 0.0;
  GrayFrame prev = to_grayscale(clip.frames.front());
  for (std::size_t i = 1; i < clip.frames.size(); ++i) {
    GrayFrame next = to_grayscale(clip.frames[i]);
    sum += motion_score(lk_flow(prev, next, params));
    prev = std::move(next);
  }
  return sum / static_cast<double>(clip.frames.size() - 1);
}

Detection detect(const Clip& clip, double threshold, const FlowParams& params) {
  Detection d;
  d.energy = clip_motion_energy(clip, params);
  d.threshold_used = threshold;
  d.label = d.energy >= threshold ? Label::violent : Label::nonviolent;
  return d;
}

namespace {

double f1_at_threshold(double threshold, std::span<const LabeledEnergy> items) {
  long long tp = 0, fp = 0, fn = 0;
  for (const LabeledEnergy& item : items) {
    bool predicted_violent = item.energy >= threshold;
    bool is_violent = item.label == Label::violent;
    if (predicted_violent && is_violent) ++tp;
    else if (predicted_violent && !is_violent) ++fp;
    else if (!predicted_violent && is_violent) ++fn;
  }
  double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
  double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
  return f1_score(precision, recall);
}

}  // namespace

double calibrate_threshold(std::span<const LabeledEnergy> items) {
  bool has_violent = false, has_nonviolent = false;
  for (const LabeledEnergy& item : items) {
    (item.label == Label::violent ? has_violent : has_nonviolent) = true;
  }
  if (!has_violent || !has_nonviolent) {
    throw Error(Errc::single_class, "need at least one item of each label");
  }

  std::vector<double> energies;
  energies.reserve(items.size());
  for (const LabeledEnergy& item : items) energies.push_back(item.energy);
  std::sort(energies.begin(), energies.end());
  energies.erase(std::unique(energies.begin(), energies.end()), energies.end());

  std::vector<double> candidates{0.0};
  for (std::size_t i = 0; i + 1 < energies.size(); ++i) {
    candidates.push_back((energies[i] + energies[i + 1]) / 2.0);
  }
  candidates.push_back(energies.back() + 1.0);

  double best = candidates.front();
  double best_f1 = -1.0;
  for (double t : candidates) {
    double f1 = f1_at_threshold(t, items);
    if (f1 > best_f1 || (f1 == best_f1 && t < best)) {
      best = t;
      best_f1 = f1;
    }
  }
  return best;
}

ConfusionCounts confusion(std::span<const Label> predictions,
                          std::span<const Label> truths) {
  if (predictions.size() != truths.size()) {
    throw Error(Errc::length_mismatch, "prediction and truth counts differ");
  }
  if (predictions.empty()) {
    throw Error(Errc::empty, "nothing to score");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    bool predicted = predictions[i] == Label::violent;
    bool actual = truths[i] == Label::violent;
    if (predicted && actual) ++c.tp;
    else if (predicted && !actual) ++c.fp;
    else if (!predicted && actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double f1_score(double precision, double recall) {
  double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

MetricsReport metrics(const ConfusionCounts& c) {
  if (c.total() < 1) {
    throw Error(Errc::empty, "confusion counts are all zero");
  }
  MetricsReport r;
  r.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  r.precision =
      c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  r.recall =
      c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw =
        eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::size_t comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw Error(Errc::bad_config,
                  "manifest line " + std::to_string(line_no) + ": expected path,label");
    }
    ManifestEntry entry;
    entry.path = trim(line.substr(0, comma));
    std::string label = trim(line.substr(comma + 1));
    auto parsed = parse_label(label);
    if (entry.path.empty() || !parsed) {
      throw Error(Errc::bad_config,
                  "manifest line " + std::to_string(line_no) +
                      ": label must be violent or nonviolent");
    }
    entry.label = *parsed;
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io_failure, "cannot open " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_manifest(text.str());
}

std::vector<std::string> validate_manifest(std::span<const ManifestEntry> entries,
                                           std::span<const Clip> clips) {
  std::vector<std::string> warnings;
  if (entries.size() > 500) {
    warnings.push_back("manifest lists " + std::to_string(entries.size()) +
                       " videos; expected at most 500");
  }
  for (std::size_t i = 0; i < clips.size() && i < entries.size(); ++i) {
    const Clip& clip = clips[i];
    double seconds = clip.duration_seconds();
    if (seconds < 5.0 || seconds > 10.0) {
      std::ostringstream msg;
      msg << entries[i].path << ": duration " << seconds
          << " s outside [5 s, 10 s]";
      warnings.push_back(msg.str());
    }
    if (clip.width() != 1280 || clip.height() != 720) {
      std::ostringstream msg;
      msg << entries[i].path << ": frame dimensions " << clip.width() << "x"
          << clip.height() << " are not 1280x720";
      warnings.push_back(msg.str());
    }
  }
  return warnings;
}

namespace {

Clip load_entry_clip(const ManifestEntry& entry,
                     const std::filesystem::path& base_dir) {
  std::filesystem::path path(entry.path);
  if (path.is_relative()) path = base_dir / path;
  try {
    return load_clip_file(path);
  } catch (const Error& e) {
    throw Error(Errc::load_failure,
                entry.path + " (" + e.code_name() + ")");
  }
}

}  // namespace

std::vector<LabeledEnergy> manifest_energies(
    std::span<const ManifestEntry> entries, const FlowParams& params,
    const std::filesystem::path& base_dir) {
  std::vector<LabeledEnergy> items;
  items.reserve(entries.size());
  for (const ManifestEntry& entry : entries) {
    Clip clip = load_entry_clip(entry, base_dir);
    items.push_back({clip_motion_energy(clip, params), entry.label});
  }
  return items;
}

EvaluationResult evaluate(std::span<const ManifestEntry> entries,
                          double threshold, const FlowParams& params,
                          const std::filesystem::path& base_dir) {
  if (entries.empty()) {
    throw Error(Errc::empty, "manifest has no entries");
  }
  EvaluationResult result;
  std::vector<Label> predictions, truths;
  for (const ManifestEntry& entry : entries) {
    Clip clip = load_entry_clip(entry, base_dir);
    Detection d = detect(clip, threshold, params);
    predictions.push_back(d.label);
    truths.push_back(entry.label);
    result.detections.push_back(d);
  }
  result.counts = confusion(predictions, truths);
  result.report = metrics(result.counts);
  return result;
}

BenchmarkReport benchmark(const Clip& clip, const SamplerSpec& spec,
                          const FlowParams& params, int repetitions,
                          double budget_ms) {
  if (repetitions < 1) {
    throw Error(Errc::bad_config, "repetitions must be at least 1");
  }
  using clock = std::chrono::steady_clock;
  BenchmarkReport report;
  report.budget_ms = budget_ms;

  auto begin = clock::now();
  for (int rep = 0; rep < repetitions; ++rep) {
    SampleResult sampled = sample(clip, spec, params);
    std::vector<Frame> cells;
    cells.reserve(sampled.indices.size());
    for (int idx : sampled.indices) {
      cells.push_back(clip.frames[static_cast<std::size_t>(idx)]);
    }
    GridLayout layout = choose_grid(static_cast<int>(cells.size()),
                                    clip.width(), clip.height());
    SuperImage si = compose(cells, layout);
    Detection d = detect(clip, /*threshold=*/0.5, params);
    static_cast<void>(si);
    static_cast<void>(d);
    report.frames_processed += clip.frame_count();
  }
  auto end = clock::now();

  report.total_ms =
      std::chrono::duration<double, std::milli>(end - begin).count();
  report.ms_per_frame =
      report.total_ms / static_cast<double>(report.frames_processed);
  report.within_budget = report.ms_per_frame <= report.budget_ms;
  return report;
}

}  // namespace iis
