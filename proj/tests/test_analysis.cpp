#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "iis/analysis.hpp"
#include "iis/error.hpp"
#include "iis/media_io.hpp"
#include "iis/serialize.hpp"
#include "support.hpp"

using namespace iis;
using namespace testsupport;

TEST_CASE("motion energy of a static textured clip is exactly zero") {
  CHECK(clip_motion_energy(static_clip(5, 32, 32, 11)) == 0.0);
}

TEST_CASE("motion energy of constant-intensity frames is zero") {
  Clip clip;
  clip.fps_milli = 30000;
  for (int i = 0; i < 4; ++i) {
    Frame f = solid_frame(32, 32, {static_cast<std::uint8_t>(50 + 40 * i), 0, 0});
    f.index = i;
    clip.frames.push_back(std::move(f));
  }
  CHECK(clip_motion_energy(clip) == 0.0);
}

TEST_CASE("motion energy of a steadily translating clip is near the shift") {
  Clip clip = translating_clip(5, 64, 64, 1.0);
  double energy = clip_motion_energy(clip);
  CHECK(energy > 0.8);
  CHECK(energy < 1.2);
}

TEST_CASE("motion energy rejects single-frame clips") {
  try {
    clip_motion_energy(static_clip(1, 32, 32, 1));
    FAIL("expected TooFewFrames");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::too_few_frames);
  }
}

TEST_CASE("detect applies the inclusive threshold") {
  Clip clip = static_clip(4, 32, 32, 9);
  Detection quiet = detect(clip, 0.1);
  CHECK(quiet.label == Label::nonviolent);
  CHECK(quiet.energy == 0.0);
  CHECK(quiet.threshold_used == 0.1);

  Detection boundary = detect(clip, 0.0);
  CHECK(boundary.label == Label::violent);  // 0 >= 0
}

TEST_CASE("detect flags a clip whose energy clears half its own value") {
  Clip clip = translating_clip(5, 64, 64, 1.0);
  double energy = clip_motion_energy(clip);
  Detection d = detect(clip, energy / 2.0);
  CHECK(d.label == Label::violent);
  CHECK(d.energy == energy);
}

TEST_CASE("detect is monotone in the threshold") {
  Clip clip = translating_clip(4, 64, 64, 0.5);
  double energy = clip_motion_energy(clip);
  bool was_violent = true;
  for (double t : {0.0, energy / 2, energy, energy * 1.5, energy * 3 + 1}) {
    bool violent = detect(clip, t).label == Label::violent;
    // raising the threshold can only turn violent into nonviolent
    CHECK((was_violent || !violent));
    was_violent = violent;
  }
}

TEST_CASE("calibrate finds the separating midpoint") {
  std::vector<LabeledEnergy> items{{0.8, Label::violent},
                                   {0.9, Label::violent},
                                   {0.1, Label::nonviolent},
                                   {0.2, Label::nonviolent}};
  CHECK(calibrate_threshold(items) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("calibrate on inseparable energies prefers the smallest candidate") {
  std::vector<LabeledEnergy> items{{1.0, Label::violent}, {1.0, Label::nonviolent}};
  // threshold 0 predicts all violent: F1 = 2/3 beats threshold 2.0's F1 = 0
  CHECK(calibrate_threshold(items) == 0.0);
}

TEST_CASE("calibrate requires both labels") {
  std::vector<LabeledEnergy> items{{0.5, Label::violent}, {0.7, Label::violent}};
  try {
    calibrate_threshold(items);
    FAIL("expected SingleClass");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::single_class);
  }
}

TEST_CASE("calibrated threshold beats every other candidate on F1") {
  SplitMix64 rng{404};
  auto f1_at = [](double threshold, const std::vector<LabeledEnergy>& items) {
    long tp = 0, fp = 0, fn = 0;
    for (const auto& item : items) {
      bool pred = item.energy >= threshold;
      bool truth = item.label == Label::violent;
      tp += pred && truth;
      fp += pred && !truth;
      fn += !pred && truth;
    }
    double p = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
    double r = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
    return p + r == 0.0 ? 0.0 : 2 * p * r / (p + r);
  };
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LabeledEnergy> items;
    int n = 2 + static_cast<int>(rng.next_below(10));
    items.push_back({0.1, Label::violent});
    items.push_back({0.2, Label::nonviolent});
    for (int i = 0; i < n; ++i) {
      items.push_back({static_cast<double>(rng.next_below(100)) / 50.0,
                       rng.next_below(2) ? Label::violent : Label::nonviolent});
    }
    double chosen = calibrate_threshold(items);
    double chosen_f1 = f1_at(chosen, items);

    std::vector<double> energies;
    for (const auto& item : items) energies.push_back(item.energy);
    std::sort(energies.begin(), energies.end());
    energies.erase(std::unique(energies.begin(), energies.end()), energies.end());
    std::vector<double> candidates{0.0, energies.back() + 1.0};
    for (std::size_t i = 0; i + 1 < energies.size(); ++i) {
      candidates.push_back((energies[i] + energies[i + 1]) / 2.0);
    }
    for (double t : candidates) {
      CHECK(chosen_f1 >= f1_at(t, items));
    }
  }
}

TEST_CASE("confusion counts with violent as the positive class") {
  std::vector<Label> v{Label::violent};
  std::vector<Label> n{Label::nonviolent};
  ConfusionCounts tp_only = confusion(v, v);
  CHECK(tp_only.tp == 1);
  CHECK(tp_only.fp + tp_only.fn + tp_only.tn == 0);

  ConfusionCounts fp_only = confusion(v, n);
  CHECK(fp_only.fp == 1);

  std::vector<Label> preds{Label::nonviolent, Label::violent, Label::violent,
                           Label::nonviolent};
  std::vector<Label> truths{Label::nonviolent, Label::violent, Label::nonviolent,
                            Label::violent};
  ConfusionCounts c = confusion(preds, truths);
  CHECK(c.tp == 1);
  CHECK(c.fp == 1);
  CHECK(c.fn == 1);
  CHECK(c.tn == 1);
}

TEST_CASE("confusion rejects mismatched or empty inputs") {
  std::vector<Label> one{Label::violent};
  std::vector<Label> two{Label::violent, Label::violent};
  try {
    confusion(one, two);
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::length_mismatch);
  }
  std::vector<Label> none;
  try {
    confusion(none, none);
    FAIL("expected Empty");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty);
  }
}

TEST_CASE("metrics on canonical counts") {
  MetricsReport perfect = metrics({1, 0, 0, 0});
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);

  MetricsReport half = metrics({1, 1, 1, 1});
  CHECK(half.accuracy == 0.5);
  CHECK(half.precision == 0.5);
  CHECK(half.recall == 0.5);
  CHECK(half.f1 == 0.5);

  MetricsReport all_negative = metrics({0, 0, 0, 4});
  CHECK(all_negative.accuracy == 1.0);
  CHECK(all_negative.precision == 0.0);  // 0/0 convention
  CHECK(all_negative.recall == 0.0);
  CHECK(all_negative.f1 == 0.0);
}

TEST_CASE("f1 at the reported operating point is the harmonic mean") {
  double f1 = f1_score(0.91, 0.74);
  // 2*0.91*0.74/1.65 = 3367/4125 = 0.8162424..., not 0.90
  CHECK(f1 == doctest::Approx(3367.0 / 4125.0).epsilon(1e-15));
  CHECK(std::abs(f1 - 0.90) > 0.08);
}

TEST_CASE("f1 is the harmonic mean across the whole grid") {
  for (int pi = 0; pi <= 100; ++pi) {
    for (int ri = 0; ri <= 100; ++ri) {
      double p = pi / 100.0;
      double r = ri / 100.0;
      double expected = p + r == 0.0 ? 0.0 : 2 * p * r / (p + r);
      CHECK(std::abs(f1_score(p, r) - expected) <= 1e-12);
    }
  }
}

TEST_CASE("metrics match brute-force recomputation exhaustively") {
  for (int total = 1; total <= 24; ++total) {
    for (int tp = 0; tp <= total; ++tp) {
      for (int fp = 0; fp + tp <= total; ++fp) {
        for (int fn = 0; fn + fp + tp <= total; ++fn) {
          int tn = total - tp - fp - fn;
          MetricsReport r = metrics({tp, fp, fn, tn});
          double acc = static_cast<double>(tp + tn) / total;
          double prec = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
          double rec = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
          double f1 = prec + rec == 0.0 ? 0.0 : 2 * prec * rec / (prec + rec);
          REQUIRE(r.accuracy == acc);
          REQUIRE(r.precision == prec);
          REQUIRE(r.recall == rec);
          REQUIRE(r.f1 == f1);
        }
      }
    }
  }
}

TEST_CASE("manifest parsing skips comments and validates labels") {
  auto entries = parse_manifest(
      "# fixtures\n"
      "a.iisv,violent\n"
      "\n"
      "  b.iisv , nonviolent \n");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].path == "a.iisv");
  CHECK(entries[0].label == Label::violent);
  CHECK(entries[1].path == "b.iisv");
  CHECK(entries[1].label == Label::nonviolent);

  CHECK_THROWS_AS(parse_manifest("a.iisv,maybe\n"), Error);
  CHECK_THROWS_AS(parse_manifest("no-comma-here\n"), Error);
}

TEST_CASE("manifest lint warns on count, duration, and dimensions") {
  std::vector<ManifestEntry> many(501, {"x.iisv", Label::violent});
  auto count_warnings = validate_manifest(many, {});
  REQUIRE(count_warnings.size() == 1);
  CHECK(count_warnings[0].find("500") != std::string::npos);

  // 7 s of 1280x720 at 30 fps: no warnings
  std::vector<ManifestEntry> entries{{"good.iisv", Label::nonviolent}};
  Clip good;
  good.fps_milli = 30000;
  Frame f = solid_frame(1280, 720, {0, 0, 0});
  for (int i = 0; i < 210; ++i) {
    f.index = i;
    good.frames.push_back(f);
  }
  std::vector<Clip> clips{good};
  CHECK(validate_manifest(entries, clips).empty());

  // 3 s of 640x480: duration and dimension warnings
  std::vector<ManifestEntry> bad_entries{{"bad.iisv", Label::nonviolent}};
  Clip bad;
  bad.fps_milli = 30000;
  Frame small = solid_frame(640, 480, {0, 0, 0});
  for (int i = 0; i < 90; ++i) {
    small.index = i;
    bad.frames.push_back(small);
  }
  std::vector<Clip> bad_clips{bad};
  auto warnings = validate_manifest(bad_entries, bad_clips);
  CHECK(warnings.size() == 2);
}

TEST_CASE("evaluate scores a manifest of static clips as all negative") {
  TempDir dir;
  save_clip_file(dir.path() / "calm1.iisv", static_clip(4, 32, 32, 1));
  save_clip_file(dir.path() / "calm2.iisv", static_clip(4, 32, 32, 2));
  std::vector<ManifestEntry> entries{{"calm1.iisv", Label::nonviolent},
                                     {"calm2.iisv", Label::nonviolent}};
  EvaluationResult result = evaluate(entries, 0.1, {}, dir.path());
  CHECK(result.counts.tn == 2);
  CHECK(result.counts.total() == 2);
  CHECK(result.report.accuracy == 1.0);
  REQUIRE(result.detections.size() == 2);
  CHECK(result.detections[0].label == Label::nonviolent);
}

TEST_CASE("calibrate + evaluate separates static from translating clips") {
  TempDir dir;
  std::vector<ManifestEntry> entries;
  for (int i = 0; i < 3; ++i) {
    std::string name = "static" + std::to_string(i) + ".iisv";
    save_clip_file(dir.path() / name, static_clip(5, 64, 64, 100 + i));
    entries.push_back({name, Label::nonviolent});
  }
  for (int i = 0; i < 3; ++i) {
    std::string name = "moving" + std::to_string(i) + ".iisv";
    save_clip_file(dir.path() / name, translating_clip(5, 64, 64, 1.0));
    entries.push_back({name, Label::violent});
  }
  auto items = manifest_energies(entries, {}, dir.path());
  double threshold = calibrate_threshold(items);
  EvaluationResult result = evaluate(entries, threshold, {}, dir.path());
  CHECK(result.report.f1 == 1.0);
  CHECK(result.counts.tp == 3);
  CHECK(result.counts.tn == 3);
}

TEST_CASE("evaluate reports the first unloadable clip") {
  TempDir dir;
  save_clip_file(dir.path() / "ok.iisv", static_clip(3, 16, 16, 5));
  std::vector<ManifestEntry> entries{{"ok.iisv", Label::nonviolent},
                                     {"missing.iisv", Label::violent}};
  try {
    evaluate(entries, 0.1, {}, dir.path());
    FAIL("expected LoadFailure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::load_failure);
    CHECK(std::string(e.what()).find("missing.iisv") != std::string::npos);
  }
}

TEST_CASE("benchmark accounts frames across repetitions") {
  Clip clip = static_clip(6, 32, 32, 50);
  BenchmarkReport report = benchmark(clip, {SamplerKind::uniform, 3}, {}, 4);
  CHECK(report.frames_processed == 6 * 4);
  CHECK(report.total_ms >= 0.0);
  CHECK(report.ms_per_frame ==
        doctest::Approx(report.total_ms / report.frames_processed));
  CHECK(report.budget_ms == 2000.0);
}

TEST_CASE("benchmark with an enormous budget is always within budget") {
  Clip clip = static_clip(4, 32, 32, 51);
  BenchmarkReport report = benchmark(clip, {SamplerKind::mad, 2}, {}, 1, 1e12);
  CHECK(report.within_budget);
}

TEST_CASE("label names round-trip") {
  CHECK(label_name(Label::violent) == "violent");
  CHECK(label_name(Label::nonviolent) == "nonviolent");
  CHECK(parse_label("violent") == Label::violent);
  CHECK(parse_label("nonviolent") == Label::nonviolent);
  CHECK(!parse_label("calm").has_value());
}

TEST_CASE("json serialization uses fixed key order") {
  Detection d{Label::nonviolent, 0.0, 0.1};
  CHECK(detection_json(d) ==
        R"({"label":"nonviolent","energy":0.0,"threshold":0.1})");

  MetricsReport r = metrics({1, 1, 1, 1});
  CHECK(metrics_json(r, {1, 1, 1, 1}) ==
        R"({"accuracy":0.5,"precision":0.5,"recall":0.5,"f1":0.5,"tp":1,"fp":1,"fn":1,"tn":1})");

  BenchmarkReport b{10, 5.0, 0.5, 2000.0, true};
  CHECK(benchmark_json(b) ==
        R"({"frames_processed":10,"total_ms":5.0,"ms_per_frame":0.5,"budget_ms":2000.0,"within_budget":true})");
}
