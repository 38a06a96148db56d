#pragma once

#include <optional>
#include <span>
#include <vector>

#include "iis/frame.hpp"
#include "iis/sampling.hpp"

namespace iis {

struct GridLayout {
  int rows = 1;
  int cols = 1;
  int pad_cells = 0;  // rows*cols - k
};

struct SuperImage {
  Frame image;  // dims exactly (cols*cell_w, rows*cell_h)
  GridLayout layout;
  std::vector<int> source_indices;  // sampled frame ordinals, temporal order
  int cell_w = 0;
  int cell_h = 0;
};

struct CellScale {
  int width = 1;
  int height = 1;
};

// Picks (rows, cols) with cols = ceil(k/rows), no fully empty trailing row,
// minimizing |ln(composed aspect ratio)|; ties go to fewer cells, then fewer
// rows.
GridLayout choose_grid(int k, int cell_w, int cell_h);

// The |ln((cols*cell_w)/(rows*cell_h))| squareness score of one layout.
double grid_aspect_score(int rows, int cols, int cell_w, int cell_h);

// Row-major placement of frames into the grid; unused cells take `fill`.
// source_indices are taken from each frame's `index`.
SuperImage compose(std::span<const Frame> frames, const GridLayout& layout,
                   Rgb fill = {0, 0, 0});

// sample -> optional per-frame resize -> choose_grid -> compose.
SuperImage build_super_image(const Clip& clip, const SamplerSpec& spec,
                             std::optional<CellScale> cell_scale = std::nullopt,
                             const FlowParams& flow = {});

}  // namespace iis
