#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace iis {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

// One decoded video frame: RGB8, row-major, 3 bytes per pixel.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
  int index = 0;  // ordinal position in the source clip

  const std::uint8_t* at(int x, int y) const {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  std::uint8_t* at(int x, int y) {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }

  bool valid() const {
    return width >= 1 && height >= 1 &&
           pixels.size() == static_cast<std::size_t>(width) * height * 3;
  }

  // Image-content equality; `index` is clip bookkeeping, not content.
  friend bool operator==(const Frame& a, const Frame& b) {
    return a.width == b.width && a.height == b.height && a.pixels == b.pixels;
  }
};

// Normalized grayscale intensities in [0,1], row-major.
struct GrayFrame {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

// An ordered frame sequence with uniform dimensions.
struct Clip {
  std::vector<Frame> frames;
  std::uint32_t fps_milli = 30000;  // frames-per-second x 1000
  std::string source_id;

  int frame_count() const { return static_cast<int>(frames.size()); }
  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int height() const { return frames.empty() ? 0 : frames.front().height; }
  double duration_seconds() const {
    return fps_milli == 0 ? 0.0
                          : static_cast<double>(frames.size()) * 1000.0 / fps_milli;
  }

  // Content equality; `source_id` is provenance, not content.
  friend bool operator==(const Clip& a, const Clip& b) {
    return a.fps_milli == b.fps_milli && a.frames == b.frames;
  }
};

}  // namespace iis
