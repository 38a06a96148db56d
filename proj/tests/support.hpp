#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "iis/frame.hpp"
#include "iis/sampling.hpp"

namespace testsupport {

// Self-deleting scratch directory.
class TempDir {
 public:
  TempDir() {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "iis_test_XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) {
      std::abort();
    }
    path_ = buf.data();
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline iis::Frame noise_frame(int w, int h, std::uint64_t seed) {
  iis::SplitMix64 rng{seed};
  iis::Frame f;
  f.width = w;
  f.height = h;
  f.pixels.resize(static_cast<std::size_t>(w) * h * 3);
  for (auto& byte : f.pixels) {
    byte = static_cast<std::uint8_t>(rng.next_below(256));
  }
  return f;
}

inline iis::Frame solid_frame(int w, int h, iis::Rgb color) {
  iis::Frame f;
  f.width = w;
  f.height = h;
  f.pixels.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < f.pixels.size(); i += 3) {
    f.pixels[i] = color.r;
    f.pixels[i + 1] = color.g;
    f.pixels[i + 2] = color.b;
  }
  return f;
}

inline iis::Clip noise_clip(int n, int w, int h, std::uint64_t seed,
                            std::uint32_t fps_milli = 30000) {
  iis::Clip clip;
  clip.fps_milli = fps_milli;
  for (int i = 0; i < n; ++i) {
    iis::Frame f = noise_frame(w, h, seed + static_cast<std::uint64_t>(i) * 977);
    f.index = i;
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

// n identical textured frames: motion energy is exactly zero.
inline iis::Clip static_clip(int n, int w, int h, std::uint64_t seed,
                             std::uint32_t fps_milli = 30000) {
  iis::Clip clip;
  clip.fps_milli = fps_milli;
  iis::Frame base = noise_frame(w, h, seed);
  for (int i = 0; i < n; ++i) {
    iis::Frame f = base;
    f.index = i;
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

// 1x1 gray frames (v,v,v) from a list of byte values.
inline iis::Clip gray_value_clip(const std::vector<std::uint8_t>& values,
                                 std::uint32_t fps_milli = 30000) {
  iis::Clip clip;
  clip.fps_milli = fps_milli;
  for (std::size_t i = 0; i < values.size(); ++i) {
    iis::Frame f = solid_frame(1, 1, {values[i], values[i], values[i]});
    f.index = static_cast<int>(i);
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

// Smooth 2-D sinusoid with period >= 16 px, amplitude 0.2 per axis, range
// well inside [0,1]. `shift_x`/`shift_y` translate the pattern content.
inline double sinusoid_value(double x, double y, double shift_x, double shift_y,
                             double period = 16.0) {
  constexpr double tau = 2.0 * std::numbers::pi;
  return 0.5 + 0.2 * std::sin(tau * (x - shift_x) / period) +
         0.2 * std::sin(tau * (y - shift_y) / period);
}

inline iis::GrayFrame sinusoid_gray(int w, int h, double shift_x,
                                    double shift_y, double period = 16.0) {
  iis::GrayFrame g;
  g.width = w;
  g.height = h;
  g.values.resize(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      g.values[static_cast<std::size_t>(y) * w + x] =
          sinusoid_value(x, y, shift_x, shift_y, period);
    }
  }
  return g;
}

inline iis::Frame sinusoid_frame(int w, int h, double shift_x, double shift_y,
                                 double period = 16.0) {
  iis::Frame f;
  f.width = w;
  f.height = h;
  f.pixels.resize(static_cast<std::size_t>(w) * h * 3);
  std::size_t i = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = sinusoid_value(x, y, shift_x, shift_y, period);
      auto byte = static_cast<std::uint8_t>(
          std::clamp(std::lround(v * 255.0), 0L, 255L));
      f.pixels[i++] = byte;
      f.pixels[i++] = byte;
      f.pixels[i++] = byte;
    }
  }
  return f;
}

// Pattern slides `px_per_frame` pixels to the right each frame.
inline iis::Clip translating_clip(int n, int w, int h, double px_per_frame,
                                  std::uint32_t fps_milli = 30000) {
  iis::Clip clip;
  clip.fps_milli = fps_milli;
  for (int i = 0; i < n; ++i) {
    iis::Frame f = sinusoid_frame(w, h, i * px_per_frame, 0.0);
    f.index = i;
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

// Brute-force selection oracle: score every frame, stable-sort (score,
// index) pairs by score alone, take the first k, report ascending.
inline std::vector<int> oracle_select(const std::vector<double>& scores, int k,
                                      bool largest) {
  std::vector<std::pair<double, int>> pairs;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    pairs.emplace_back(scores[i], static_cast<int>(i));
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [largest](const auto& a, const auto& b) {
                     return largest ? a.first > b.first : a.first < b.first;
                   });
  std::vector<int> out;
  for (int i = 0; i < k; ++i) out.push_back(pairs[static_cast<std::size_t>(i)].second);
  std::sort(out.begin(), out.end());
  return out;
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

// Runs a shell command, capturing stdout (append "2>&1" to also see stderr).
inline CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) {
    result.output.append(buf, n);
  }
  int status = pclose(pipe);
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  return result;
}

}  // namespace testsupport
