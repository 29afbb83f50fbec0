#include "densefeat/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace densefeat {

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("gaussian sigma must be positive and finite");
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[i + radius] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

namespace {

void filter_rows(const Raster& src, const std::vector<double>& k, Raster& dst) {
  const int w = src.width();
  const int h = src.height();
  const int r = static_cast<int>(k.size() / 2);
  std::vector<double> line(static_cast<std::size_t>(w + 2 * r));
  for (int y = 0; y < h; ++y) {
    for (int i = -r; i < w + r; ++i) line[i + r] = src(reflect_index(i, w), y);
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      const double* p = &line[x];
      for (std::size_t j = 0; j < k.size(); ++j) acc += k[j] * p[j];
      dst(x, y) = acc;
    }
  }
}

void filter_cols(const Raster& src, const std::vector<double>& k, Raster& dst) {
  const int w = src.width();
  const int h = src.height();
  const int r = static_cast<int>(k.size() / 2);
  std::vector<double> acc(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int j = -r; j <= r; ++j) {
      const int yy = reflect_index(y + j, h);
      const double kv = k[j + r];
      for (int x = 0; x < w; ++x) acc[x] += kv * src(x, yy);
    }
    for (int x = 0; x < w; ++x) dst(x, y) = acc[x];
  }
}

ResponseMap central_dx(const Raster& s) {
  ResponseMap out(s.width(), s.height());
  for (int y = 0; y < s.height(); ++y) {
    for (int x = 0; x < s.width(); ++x) {
      out(x, y) = 0.5 * (s.at_reflect(x + 1, y) - s.at_reflect(x - 1, y));
    }
  }
  return out;
}

ResponseMap central_dy(const Raster& s) {
  ResponseMap out(s.width(), s.height());
  for (int y = 0; y < s.height(); ++y) {
    for (int x = 0; x < s.width(); ++x) {
      out(x, y) = 0.5 * (s.at_reflect(x, y + 1) - s.at_reflect(x, y - 1));
    }
  }
  return out;
}

}  // namespace

Raster separable_filter(const Raster& src, const std::vector<double>& kx,
                        const std::vector<double>& ky) {
  if (kx.size() % 2 == 0 || ky.size() % 2 == 0) {
    throw std::invalid_argument("separable kernels must have odd length");
  }
  Raster tmp(src.width(), src.height());
  Raster out(src.width(), src.height());
  if (src.empty()) return out;
  filter_rows(src, kx, tmp);
  filter_cols(tmp, ky, out);
  return out;
}

Raster gaussian_blur(const Raster& src, double sigma, Diagnostics* diag) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    if (diag) diag->warnings.push_back("gaussian_blur: non-positive sigma, image left unchanged");
    return src;
  }
  const auto k = gaussian_kernel(sigma);
  return separable_filter(src, k, k);
}

Gradients gradients(const GrayImage& img, double sigma_d) {
  const Raster s = gaussian_blur(static_cast<const Raster&>(img), sigma_d);
  return {central_dx(s), central_dy(s)};
}

SecondDerivatives second_derivatives(const GrayImage& img, double sigma) {
  const Raster s = gaussian_blur(static_cast<const Raster&>(img), sigma);
  const int w = s.width();
  const int h = s.height();
  SecondDerivatives d{ResponseMap(w, h), ResponseMap(w, h), ResponseMap(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = s(x, y);
      d.lxx(x, y) = s.at_reflect(x + 1, y) - 2.0 * c + s.at_reflect(x - 1, y);
      d.lyy(x, y) = s.at_reflect(x, y + 1) - 2.0 * c + s.at_reflect(x, y - 1);
      d.lxy(x, y) = 0.25 * (s.at_reflect(x + 1, y + 1) - s.at_reflect(x - 1, y + 1) -
                            s.at_reflect(x + 1, y - 1) + s.at_reflect(x - 1, y - 1));
    }
  }
  return d;
}

Raster resize_bilinear(const Raster& src, int width, int height) {
  if (width < 1 || height < 1) throw std::invalid_argument("resize target must be non-empty");
  Raster out(width, height);
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < width; ++x) {
      out(x, y) = src.sample((x + 0.5) * sx - 0.5, fy);
    }
  }
  return out;
}

GrayImage downsample_to_area(const GrayImage& img, double target_area) {
  const double area = static_cast<double>(img.width()) * img.height();
  if (area <= target_area) return img;
  const double f = std::sqrt(target_area / area);
  const int w = std::max(1, static_cast<int>(std::lround(img.width() * f)));
  const int h = std::max(1, static_cast<int>(std::lround(img.height() * f)));
  return GrayImage(resize_bilinear(img, w, h));
}

}  // namespace densefeat
