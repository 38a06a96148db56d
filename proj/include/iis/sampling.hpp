#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "iis/frame.hpp"
#include "iis/optical_flow.hpp"

namespace iis {

// Deterministic 64-bit generator; identical output on every platform.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) without rejection: 64-bit multiply-shift range
  // reduction.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }
};

enum class SamplerKind { uniform, random, continuous, mad, lucas_kanade };

// Wire spellings: "uniform", "random", "continuous", "mad", "lk".
std::string_view sampler_kind_name(SamplerKind kind);
std::optional<SamplerKind> parse_sampler_kind(std::string_view name);

struct SamplerSpec {
  SamplerKind kind = SamplerKind::uniform;
  int k = 1;
  std::optional<std::uint64_t> seed;  // required iff kind == random
};

struct SampleResult {
  std::vector<int> indices;  // strictly ascending frame ordinals
  std::optional<std::vector<double>> scores;  // per selected frame (mad, lk)
};

// Stride-based: floor(n/k) spacing starting at frame 0.
std::vector<int> sample_uniform(int n, int k);

// Endpoint-inclusive even spread over [0, n-1]; k=1 picks the midpoint.
std::vector<int> sample_continuous(int n, int k);

// k distinct indices via SplitMix64 + Floyd's algorithm, sorted ascending.
std::vector<int> sample_random(int n, int k, std::uint64_t seed);

// d[i] = mean absolute grayscale difference between frames i and i+1.
std::vector<double> transition_scores_mad(const Clip& clip);

// Per-frame score from n-1 transition scores: edges take their single
// adjacent transition, interior frames the mean of both.
std::vector<double> frame_scores_from_transitions(std::span<const double> d);

// k frames with the smallest MAD frame score (ties: lower index).
SampleResult sample_mad(const Clip& clip, int k);

// k frames with the largest Lucas-Kanade motion score (ties: lower index).
SampleResult sample_lucas_kanade(const Clip& clip, int k,
                                 const FlowParams& params = {});

SampleResult sample(const Clip& clip, const SamplerSpec& spec,
                    const FlowParams& params = {});

// Throws exactly the errors sample() would for an n-frame clip, without
// computing any scores.
void validate_sampler_spec(int n, const SamplerSpec& spec);

}  // namespace iis
