#include "iis/super_image.hpp"

#include <cmath>
#include <cstring>

#include "iis/error.hpp"
#include "iis/media_io.hpp"

namespace iis {

double grid_aspect_score(int rows, int cols, int cell_w, int cell_h) {
  // Evaluated as ln(max/min) so reciprocal aspects score bit-identically.
  double long_side = static_cast<double>(cols) * cell_w;
  double short_side = static_cast<double>(rows) * cell_h;
  if (long_side < short_side) std::swap(long_side, short_side);
  return std::log(long_side / short_side);
}

GridLayout choose_grid(int k, int cell_w, int cell_h) {
  if (k < 1) {
    throw Error(Errc::k_zero, "k must be at least 1");
  }
  if (cell_w < 1 || cell_h < 1) {
    throw Error(Errc::zero_dimension, "cell dimensions must be positive");
  }
  GridLayout best;
  double best_score = 0.0;
  bool have_best = false;
  for (int rows = 1; rows <= k; ++rows) {
    int cols = (k + rows - 1) / rows;
    int pad = rows * cols - k;
    if (pad >= cols) continue;  // would leave a fully empty row
    double score = grid_aspect_score(rows, cols, cell_w, cell_h);
    bool better =
        !have_best || score < best_score ||
        (score == best_score &&
         (rows * cols < best.rows * best.cols ||
          (rows * cols == best.rows * best.cols && rows < best.rows)));
    if (better) {
      best = {rows, cols, pad};
      best_score = score;
      have_best = true;
    }
  }
  return best;  // rows=k, cols=1 is always feasible, so have_best holds
}

SuperImage compose(std::span<const Frame> frames, const GridLayout& layout,
                   Rgb fill) {
  if (frames.empty()) {
    throw Error(Errc::empty, "no frames to compose");
  }
  int k = static_cast<int>(frames.size());
  if (layout.rows < 1 || layout.cols < 1 || layout.rows * layout.cols < k) {
    throw Error(Errc::layout_too_small,
                std::to_string(layout.rows) + "x" + std::to_string(layout.cols) +
                    " grid cannot hold " + std::to_string(k) + " frames");
  }
  int cell_w = frames.front().width;
  int cell_h = frames.front().height;
  for (const Frame& f : frames) {
    if (f.width != cell_w || f.height != cell_h) {
      throw Error(Errc::mixed_dimensions, "cell frames differ in size");
    }
  }

  SuperImage out;
  out.layout = layout;
  out.cell_w = cell_w;
  out.cell_h = cell_h;
  out.image.width = layout.cols * cell_w;
  out.image.height = layout.rows * cell_h;
  out.image.pixels.resize(
      static_cast<std::size_t>(out.image.width) * out.image.height * 3);

  // Fill everything first; occupied cells overwrite their region.
  std::uint8_t* p = out.image.pixels.data();
  for (std::size_t i = 0; i < out.image.pixels.size(); i += 3) {
    p[i] = fill.r;
    p[i + 1] = fill.g;
    p[i + 2] = fill.b;
  }

  for (int t = 0; t < k; ++t) {
    int row = t / layout.cols;
    int col = t % layout.cols;
    const Frame& f = frames[t];
    for (int y = 0; y < cell_h; ++y) {
      std::uint8_t* dst = out.image.at(col * cell_w, row * cell_h + y);
      std::memcpy(dst, f.at(0, y), static_cast<std::size_t>(cell_w) * 3);
    }
    out.source_indices.push_back(f.index);
  }
  return out;
}

SuperImage build_super_image(const Clip& clip, const SamplerSpec& spec,
                             std::optional<CellScale> cell_scale,
                             const FlowParams& flow) {
  SampleResult sampled = sample(clip, spec, flow);
  std::vector<Frame> cells;
  cells.reserve(sampled.indices.size());
  for (int idx : sampled.indices) {
    Frame f = clip.frames[static_cast<std::size_t>(idx)];
    f.index = idx;
    if (cell_scale) {
      f = resize_bilinear(f, cell_scale->width, cell_scale->height);
    }
    cells.push_back(std::move(f));
  }
  GridLayout layout = choose_grid(static_cast<int>(cells.size()),
                                  cells.front().width, cells.front().height);
  return compose(cells, layout);
}

}  // namespace iis
