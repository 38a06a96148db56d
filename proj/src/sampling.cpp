#include "iis/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iis/error.hpp"
#include "iis/media_io.hpp"

namespace iis {

std::string_view sampler_kind_name(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::uniform: return "uniform";
    case SamplerKind::random: return "random";
    case SamplerKind::continuous: return "continuous";
    case SamplerKind::mad: return "mad";
    case SamplerKind::lucas_kanade: return "lk";
  }
  return "unknown";
}

std::optional<SamplerKind> parse_sampler_kind(std::string_view name) {
  if (name == "uniform") return SamplerKind::uniform;
  if (name == "random") return SamplerKind::random;
  if (name == "continuous") return SamplerKind::continuous;
  if (name == "mad") return SamplerKind::mad;
  if (name == "lk") return SamplerKind::lucas_kanade;
  return std::nullopt;
}

namespace {

void check_k(int n, int k) {
  if (k < 1) {
    throw Error(Errc::k_zero, "k must be at least 1");
  }
  if (k > n) {
    throw Error(Errc::k_too_large,
                "k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
  }
}

void check_transitions(const Clip& clip) {
  if (clip.frame_count() < 2) {
    throw Error(Errc::too_few_frames,
                "need at least 2 frames, got " +
                    std::to_string(clip.frame_count()));
  }
}

// Selects k indices by score with lower-index tie-breaking; `largest` flips
// the order. Output ascending.
std::vector<int> select_by_score(std::span<const double> scores, int k,
                                 bool largest) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) {
      return largest ? scores[a] > scores[b] : scores[a] < scores[b];
    }
    return a < b;
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<double> gather(std::span<const double> scores,
                           std::span<const int> indices) {
  std::vector<double> out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(scores[i]);
  return out;
}

}  // namespace

std::vector<int> sample_uniform(int n, int k) {
  check_k(n, k);
  int stride = n / k;
  std::vector<int> indices(k);
  for (int i = 0; i < k; ++i) indices[i] = i * stride;
  return indices;
}

std::vector<int> sample_continuous(int n, int k) {
  check_k(n, k);
  if (k == 1) {
    return {(n - 1) / 2};
  }
  std::vector<int> indices(k);
  double step = static_cast<double>(n - 1) / (k - 1);
  for (int i = 0; i < k; ++i) {
    // round half away from zero; arguments are nonnegative
    indices[i] = static_cast<int>(std::floor(i * step + 0.5));
  }
  return indices;
}

std::vector<int> sample_random(int n, int k, std::uint64_t seed) {
  check_k(n, k);
  SplitMix64 rng{seed};
  // Floyd's algorithm: each prefix stays a uniform k'-subset of [0, j].
  std::vector<int> picked;
  picked.reserve(k);
  for (int j = n - k; j < n; ++j) {
    int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(j) + 1));
    if (std::find(picked.begin(), picked.end(), t) != picked.end()) {
      picked.push_back(j);
    } else {
      picked.push_back(t);
    }
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<double> transition_scores_mad(const Clip& clip) {
  check_transitions(clip);
  std::vector<double> d;
  d.reserve(clip.frames.size() - 1);
  GrayFrame prev = to_grayscale(clip.frames.front());
  for (std::size_t i = 1; i < clip.frames.size(); ++i) {
    GrayFrame next = to_grayscale(clip.frames[i]);
    double sum = 0.0;
    for (std::size_t p = 0; p < prev.values.size(); ++p) {
      sum += std::abs(next.values[p] - prev.values[p]);
    }
    d.push_back(sum / static_cast<double>(prev.values.size()));
    prev = std::move(next);
  }
  return d;
}

std::vector<double> frame_scores_from_transitions(std::span<const double> d) {
  if (d.empty()) {
    throw Error(Errc::too_few_frames, "no transitions");
  }
  std::vector<double> scores(d.size() + 1);
  scores.front() = d.front();
  scores.back() = d.back();
  for (std::size_t i = 1; i + 1 < scores.size(); ++i) {
    scores[i] = (d[i - 1] + d[i]) / 2.0;
  }
  return scores;
}

SampleResult sample_mad(const Clip& clip, int k) {
  check_transitions(clip);
  check_k(clip.frame_count(), k);
  std::vector<double> scores =
      frame_scores_from_transitions(transition_scores_mad(clip));
  SampleResult result;
  result.indices = select_by_score(scores, k, /*largest=*/false);
  result.scores = gather(scores, result.indices);
  return result;
}

SampleResult sample_lucas_kanade(const Clip& clip, int k,
                                 const FlowParams& params) {
  check_transitions(clip);
  check_k(clip.frame_count(), k);
  std::vector<double> transitions;
  transitions.reserve(clip.frames.size() - 1);
  GrayFrame prev = to_grayscale(clip.frames.front());
  for (std::size_t i = 1; i < clip.frames.size(); ++i) {
    GrayFrame next = to_grayscale(clip.frames[i]);
    transitions.push_back(motion_score(lk_flow(prev, next, params)));
    prev = std::move(next);
  }
  std::vector<double> scores = frame_scores_from_transitions(transitions);
  SampleResult result;
  result.indices = select_by_score(scores, k, /*largest=*/true);
  result.scores = gather(scores, result.indices);
  return result;
}

void validate_sampler_spec(int n, const SamplerSpec& spec) {
  if (spec.kind == SamplerKind::random && !spec.seed) {
    throw Error(Errc::missing_seed, "random sampler requires a seed");
  }
  if ((spec.kind == SamplerKind::mad || spec.kind == SamplerKind::lucas_kanade) &&
      n < 2) {
    throw Error(Errc::too_few_frames,
                "need at least 2 frames, got " + std::to_string(n));
  }
  check_k(n, spec.k);
}

SampleResult sample(const Clip& clip, const SamplerSpec& spec,
                    const FlowParams& params) {
  int n = clip.frame_count();
  switch (spec.kind) {
    case SamplerKind::uniform:
      return {sample_uniform(n, spec.k), std::nullopt};
    case SamplerKind::continuous:
      return {sample_continuous(n, spec.k), std::nullopt};
    case SamplerKind::random:
      if (!spec.seed) {
        throw Error(Errc::missing_seed, "random sampler requires a seed");
      }
      return {sample_random(n, spec.k, *spec.seed), std::nullopt};
    case SamplerKind::mad:
      return sample_mad(clip, spec.k);
    case SamplerKind::lucas_kanade:
      return sample_lucas_kanade(clip, spec.k, params);
  }
  throw Error(Errc::bad_config, "unknown sampler kind");
}

}  // namespace iis
