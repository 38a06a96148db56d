#pragma once

#include <vector>

#include "iis/frame.hpp"

namespace iis {

struct FlowParams {
  int window_radius = 2;       // 5x5 window
  int grid_stride = 8;
  double min_eigenvalue = 1e-3;
  int border_margin = 0;  // 0 = auto (window_radius + 1)

  int margin() const { return border_margin > 0 ? border_margin : window_radius + 1; }
};

struct GridPoint {
  int x = 0;
  int y = 0;
};

struct FlowVector {
  double dx = 0.0;
  double dy = 0.0;
};

struct FlowField {
  std::vector<GridPoint> points;
  std::vector<FlowVector> vectors;  // pixels per frame; (0,0) when invalid
  std::vector<std::uint8_t> valid;
  int frame_width = 0;
  int frame_height = 0;

  std::size_t valid_count() const;
};

struct Gradients {
  int width = 0;
  int height = 0;
  std::vector<double> ix;
  std::vector<double> iy;
};

// Central differences with replicate-clamped borders. Requires dims >= 3.
Gradients spatial_gradients(const GrayFrame& g);

// Single-level Lucas-Kanade on a regular grid of points. Gradients come from
// `prev`, It = next - prev; a point is valid when the structure tensor's
// smaller eigenvalue reaches params.min_eigenvalue.
FlowField lk_flow(const GrayFrame& prev, const GrayFrame& next,
                  const FlowParams& params = {});

// Mean flow magnitude over valid points; 0 when none are valid.
double motion_score(const FlowField& field);

}  // namespace iis
