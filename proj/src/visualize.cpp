#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "densefeat/descriptor.hpp"
#include "densefeat/visualize.hpp"

namespace densefeat {

namespace {

cv::Mat as_mat(RgbImage& img) { return cv::Mat(img.height, img.width, CV_8UC3, img.rgb.data()); }

// Fixed-point drawing keeps sub-pixel centers without antialiasing, which
// would make output depend on OpenCV's blending.
constexpr int kShift = 4;
cv::Point fixed(double x, double y) {
  return {static_cast<int>(std::lround(x * (1 << kShift))), static_cast<int>(std::lround(y * (1 << kShift)))};
}

}  // namespace

Overlay visualize_keypoints(const RgbImage& base, const std::vector<Keypoint>& kps,
                            bool first_scale_only) {
  Overlay out{base, 0};
  if (out.image.rgb.size() != static_cast<std::size_t>(base.width) * base.height * 3) {
    throw std::invalid_argument("overlay base has inconsistent size");
  }
  cv::Mat m = as_mat(out.image);
  const cv::Scalar circle_color(255, 40, 40);
  const cv::Scalar square_color(40, 220, 40);
  for (const auto& kp : kps) {
    if (first_scale_only && kp.scale_index != 0) continue;
    ++out.markers;
    if (selects_scale(kp.detector)) {
      const int r = static_cast<int>(std::lround(kp.sigma * (1 << kShift)));
      cv::circle(m, fixed(kp.x, kp.y), std::max(r, 1 << kShift), circle_color, 1, cv::LINE_8, kShift);
    } else {
      const double half = std::max(1.0, detection_radius(kp, family_of(kp.detector)));
      cv::rectangle(m, fixed(kp.x - half, kp.y - half), fixed(kp.x + half, kp.y + half), square_color, 1,
                    cv::LINE_8, kShift);
    }
  }
  return out;
}

RgbImage plot_line(const std::vector<double>& xs, const std::vector<double>& ys, int width, int height) {
  if (xs.size() != ys.size()) throw std::invalid_argument("plot_line: x and y differ in length");
  if (width < 100 || height < 100) throw std::invalid_argument("plot_line: canvas too small");
  RgbImage img{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height * 3, 255)};
  cv::Mat m = as_mat(img);
  const int left = 60, right = 20, top = 20, bottom = 50;
  const cv::Scalar axis(0, 0, 0);
  cv::line(m, {left, top}, {left, height - bottom}, axis);
  cv::line(m, {left, height - bottom}, {width - right, height - bottom}, axis);

  std::vector<cv::Point> pts;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
    x0 = std::min(x0, xs[i]);
    x1 = std::max(x1, xs[i]);
    y0 = std::min(y0, ys[i]);
    y1 = std::max(y1, ys[i]);
  }
  if (!(x0 <= x1)) return img;
  if (x1 - x0 < 1e-12) {
    x0 -= 1.0;
    x1 += 1.0;
  }
  if (y1 - y0 < 1e-12) {
    y0 -= 0.05;
    y1 += 0.05;
  }
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
    pts.emplace_back(left + static_cast<int>(std::lround((xs[i] - x0) / (x1 - x0) * pw)),
                     height - bottom - static_cast<int>(std::lround((ys[i] - y0) / (y1 - y0) * ph)));
  }
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return pts[a].x < pts[b].x; });
  const cv::Scalar ink(30, 60, 200);
  for (std::size_t i = 0; i + 1 < order.size(); ++i) cv::line(m, pts[order[i]], pts[order[i + 1]], ink, 2);
  for (const auto& p : pts) cv::circle(m, p, 4, ink, cv::FILLED);

  auto label = [&](const std::string& s, cv::Point at) {
    cv::putText(m, s, at, cv::FONT_HERSHEY_PLAIN, 1.0, axis, 1, cv::LINE_8);
  };
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f", x0);
  label(buf, {left, height - bottom + 18});
  std::snprintf(buf, sizeof buf, "%.0f", x1);
  label(buf, {width - right - 50, height - bottom + 18});
  std::snprintf(buf, sizeof buf, "%.3f", y0);
  label(buf, {4, height - bottom});
  std::snprintf(buf, sizeof buf, "%.3f", y1);
  label(buf, {4, top + 10});
  label("N", {left + static_cast<int>(pw / 2), height - 12});
  label("mAP", {4, top + static_cast<int>(ph / 2)});
  return img;
}

}  // namespace densefeat
