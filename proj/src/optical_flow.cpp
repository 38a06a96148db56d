#include "iis/optical_flow.hpp"

#include <algorithm>
#include <cmath>

#include "iis/error.hpp"

namespace iis {

std::size_t FlowField::valid_count() const {
  return static_cast<std::size_t>(
      std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

Gradients spatial_gradients(const GrayFrame& g) {
  if (g.width < 3 || g.height < 3) {
    throw Error(Errc::frame_too_small, "gradients need at least 3x3");
  }
  Gradients out;
  out.width = g.width;
  out.height = g.height;
  out.ix.resize(g.values.size());
  out.iy.resize(g.values.size());
  for (int y = 0; y < g.height; ++y) {
    int ym = std::max(y - 1, 0);
    int yp = std::min(y + 1, g.height - 1);
    for (int x = 0; x < g.width; ++x) {
      int xm = std::max(x - 1, 0);
      int xp = std::min(x + 1, g.width - 1);
      std::size_t i = static_cast<std::size_t>(y) * g.width + x;
      out.ix[i] = (g.at(xp, y) - g.at(xm, y)) / 2.0;
      out.iy[i] = (g.at(x, yp) - g.at(x, ym)) / 2.0;
    }
  }
  return out;
}

FlowField lk_flow(const GrayFrame& prev, const GrayFrame& next,
                  const FlowParams& params) {
  if (prev.width != next.width || prev.height != next.height) {
    throw Error(Errc::dimension_mismatch, "frame sizes differ");
  }
  int margin = params.margin();
  if (prev.width < 2 * margin + 1 || prev.height < 2 * margin + 1) {
    throw Error(Errc::frame_too_small, "no grid points fit inside the margin");
  }

  Gradients grad = spatial_gradients(prev);
  int w = prev.width;
  int h = prev.height;
  int radius = params.window_radius;

  FlowField field;
  field.frame_width = w;
  field.frame_height = h;
  for (int py = margin; py < h - margin; py += params.grid_stride) {
    for (int px = margin; px < w - margin; px += params.grid_stride) {
      double gxx = 0.0, gxy = 0.0, gyy = 0.0;
      double bx = 0.0, by = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        int y = std::clamp(py + dy, 0, h - 1);
        for (int dx = -radius; dx <= radius; ++dx) {
          int x = std::clamp(px + dx, 0, w - 1);
          std::size_t i = static_cast<std::size_t>(y) * w + x;
          double ix = grad.ix[i];
          double iy = grad.iy[i];
          double it = next.values[i] - prev.values[i];
          gxx += ix * ix;
          gxy += ix * iy;
          gyy += iy * iy;
          bx -= ix * it;
          by -= iy * it;
        }
      }
      double trace = gxx + gyy;
      double disc = std::sqrt((gxx - gyy) * (gxx - gyy) + 4.0 * gxy * gxy);
      double min_eig = (trace - disc) / 2.0;

      field.points.push_back({px, py});
      if (min_eig >= params.min_eigenvalue) {
        double det = gxx * gyy - gxy * gxy;
        field.vectors.push_back(
            {(gyy * bx - gxy * by) / det, (gxx * by - gxy * bx) / det});
        field.valid.push_back(1);
      } else {
        field.vectors.push_back({0.0, 0.0});
        field.valid.push_back(0);
      }
    }
  }
  return field;
}

double motion_score(const FlowField& field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < field.vectors.size(); ++i) {
    if (field.valid[i]) {
      sum += std::hypot(field.vectors[i].dx, field.vectors[i].dy);
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace iis
