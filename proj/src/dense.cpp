#include <cmath>
#include "densefeat/dense.hpp"

#include <algorithm>
#include <stdexcept>

#include "densefeat/descriptor.hpp"
#include "densefeat/extrema.hpp"
#include "densefeat/interest.hpp"
#include "densefeat/scale_stack.hpp"

namespace densefeat {

std::vector<Keypoint> detect_dense_grid(const GrayImage& img, const DenseParams& p) {
  if (p.delta_xy < 1 || p.n_scales < 1) throw std::invalid_argument("dense: invalid parameters");
  const ScaleStack stack = build_scale_stack(img, p.n_scales);
  const int offset = p.delta_xy / 2;
  std::vector<Keypoint> out;
  for (int level = 0; level < stack.n_sigma(); ++level) {
    const GrayImage& l = stack.levels[level];
    for (int y = offset; y < l.height(); y += p.delta_xy) {
      for (int x = offset; x < l.width(); x += p.delta_xy) {
        out.push_back({stack.to_base_x(level, x), stack.to_base_y(level, y),
                       stack.level_scale[level], 0.0, level, DetectorId::Dense, Polarity::None,
                       0});
      }
    }
  }
  return out;
}

std::vector<Keypoint> detect_dense_ip(const GrayImage& img, const DenseIpParams& p) {
  if (p.cell < 2 || p.search_scales < 1) throw std::invalid_argument("dense_ip: invalid parameters");
  const ScaleStack stack = build_scale_stack(img, p.search_scales);
  HarrisParams hp;
  hp.use_frobenius = p.response_kind == DenseResponse::Frobenius;

  const int cells_x = (img.width() + p.cell - 1) / p.cell;
  const int cells_y = (img.height() + p.cell - 1) / p.cell;
  struct Best {
    bool set = false;
    double response = 0.0;
    int level = 0;
    int x = 0;
    int y = 0;
  };
  std::vector<Best> best(static_cast<std::size_t>(cells_x) * cells_y);

  for (int level = 0; level < stack.n_sigma(); ++level) {
    const auto resp = harris_matrix_response(stack.levels[level], hp);
    for (int y = 0; y < resp.height(); ++y) {
      const double by = stack.to_base_y(level, y);
      const int cy = std::clamp(static_cast<int>(std::floor(by / p.cell)), 0, cells_y - 1);
      for (int x = 0; x < resp.width(); ++x) {
        const double bx = stack.to_base_x(level, x);
        const int cx = std::clamp(static_cast<int>(std::floor(bx / p.cell)), 0, cells_x - 1);
        Best& b = best[static_cast<std::size_t>(cy) * cells_x + cx];
        // Levels and pixels are visited in tie-break order, so only a
        // strictly larger response replaces the current winner.
        if (!b.set || resp(x, y) > b.response) b = {true, resp(x, y), level, x, y};
      }
    }
  }
  std::vector<Keypoint> out;
  for (const Best& b : best) {
    if (!b.set) continue;
    out.push_back({stack.to_base_x(b.level, b.x), stack.to_base_y(b.level, b.y),
                   stack.level_scale[b.level], b.response, b.level, DetectorId::DenseIp,
                   Polarity::Max, 0});
  }
  std::stable_sort(out.begin(), out.end(), keypoint_scan_less);
  return out;
}

std::vector<Keypoint> detect_dense_l2norm(const GrayImage& img, const L2NormParams& p,
                                          const NormMapFn& describer) {
  if (!(p.tau >= 0.0) || p.n_scales < 1 || p.stride < 1 || p.patch_side < 8) {
    throw std::invalid_argument("dense_l2norm: invalid parameters");
  }
  const NormMapFn norm_map = describer ? describer : NormMapFn(dense_sift_norm_map);
  const ScaleStack stack = build_scale_stack(img, p.n_scales);
  std::vector<Keypoint> out;
  for (int level = 0; level < stack.n_sigma(); ++level) {
    const ResponseMap resp = norm_map(stack.levels[level], p.patch_side, p.stride);
    for (const auto& e :
         local_extrema(resp, NeighborhoodKind::Strict3x3, p.tau, ExtremumPolarity::Maxima)) {
      const int lx = e.x * p.stride;
      const int ly = e.y * p.stride;
      out.push_back({stack.to_base_x(level, lx), stack.to_base_y(level, ly),
                     stack.level_scale[level], e.response, level, DetectorId::DenseL2Norm,
                     Polarity::Max, 0});
    }
  }
  return out;
}

}  // namespace densefeat
