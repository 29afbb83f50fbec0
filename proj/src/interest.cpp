#include "densefeat/interest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "densefeat/extrema.hpp"
#include "densefeat/filters.hpp"

namespace densefeat {

double ScaleLadder::sigma(double base, int k) const { return base * std::pow(ratio, k); }

void validate(const HarrisParams& p) {
  if (!(p.sigma_d > 0.0) || !(p.sigma_i > p.sigma_d)) {
    throw std::invalid_argument("harris: need sigma_i > sigma_d > 0");
  }
  if (!(p.tau >= 0.0)) throw std::invalid_argument("harris: tau must be >= 0");
}

DetectorId harris_variant(const HarrisParams& p) {
  if (p.use_frobenius) return p.relaxed ? DetectorId::RelaxedFrobenius : DetectorId::Frobenius;
  return p.relaxed ? DetectorId::RelaxedHarris : DetectorId::Harris;
}

ResponseMap harris_matrix_response(const GrayImage& img, const HarrisParams& p) {
  validate(p);
  const auto g = gradients(img, p.sigma_d);
  const int w = img.width();
  const int h = img.height();
  Raster xx(w, h), xy(w, h), yy(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double lx = g.lx.values()[i];
    const double ly = g.ly.values()[i];
    xx.values()[i] = lx * lx;
    xy.values()[i] = lx * ly;
    yy.values()[i] = ly * ly;
  }
  const Raster m11 = gaussian_blur(xx, p.sigma_i);
  const Raster m12 = gaussian_blur(xy, p.sigma_i);
  const Raster m22 = gaussian_blur(yy, p.sigma_i);
  const double s2 = p.sigma_d * p.sigma_d;
  ResponseMap out(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double a = s2 * m11.values()[i];
    const double b = s2 * m12.values()[i];
    const double c = s2 * m22.values()[i];
    if (p.use_frobenius) {
      out.values()[i] = std::sqrt(a * a + 2.0 * b * b + c * c);
    } else {
      const double tr = a + c;
      out.values()[i] = (a * c - b * b) - p.alpha * tr * tr;
    }
  }
  return out;
}

ResponseMap normalized_log(const GrayImage& img, double sigma) {
  const auto d = second_derivatives(img, sigma);
  ResponseMap out(img.width(), img.height());
  const double s2 = sigma * sigma;
  for (std::size_t i = 0; i < img.size(); ++i) {
    out.values()[i] = s2 * std::abs(d.lxx.values()[i] + d.lyy.values()[i]);
  }
  return out;
}

namespace {

bool peaks_in_scale(const std::vector<ResponseMap>& log, int k, int x, int y) {
  const double v = log[k](x, y);
  return v > log[k - 1](x, y) && v > log[k + 1](x, y);
}

}  // namespace

std::vector<Keypoint> detect_harris_laplace(const GrayImage& img, const HarrisParams& p,
                                            const ScaleLadder& ladder) {
  validate(p);
  const double ratio_i = p.sigma_i / p.sigma_d;
  std::vector<ResponseMap> log;
  log.reserve(ladder.levels);
  for (int k = 0; k < ladder.levels; ++k) {
    log.push_back(normalized_log(img, ladder.sigma(p.sigma_d, k) * ratio_i));
  }
  const auto kind = p.relaxed ? NeighborhoodKind::Relaxed2Dir : NeighborhoodKind::Strict3x3;
  std::vector<Keypoint> out;
  for (int k = 1; k + 1 < ladder.levels; ++k) {
    HarrisParams level = p;
    level.sigma_d = ladder.sigma(p.sigma_d, k);
    level.sigma_i = level.sigma_d * ratio_i;
    const auto resp = harris_matrix_response(img, level);
    for (const auto& e : local_extrema(resp, kind, p.tau, ExtremumPolarity::Maxima)) {
      if (!peaks_in_scale(log, k, e.x, e.y)) continue;
      out.push_back({static_cast<double>(e.x), static_cast<double>(e.y), level.sigma_i,
                     e.response, k - 1, harris_variant(p), Polarity::Max, 0});
    }
  }
  return out;
}

std::vector<Keypoint> detect_hessian(const GrayImage& img, const HessianParams& p,
                                     const ScaleLadder& ladder) {
  if (!(p.sigma_d > 0.0) || !(p.tau >= 0.0)) {
    throw std::invalid_argument("hessian: need sigma_d > 0 and tau >= 0");
  }
  std::vector<ResponseMap> det, log;
  for (int k = 0; k < ladder.levels; ++k) {
    const double s = ladder.sigma(p.sigma_d, k);
    const auto d = second_derivatives(img, s);
    ResponseMap dh(img.width(), img.height()), lg(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
      const double a = d.lxx.values()[i];
      const double b = d.lxy.values()[i];
      const double c = d.lyy.values()[i];
      dh.values()[i] = a * c - b * b;
      lg.values()[i] = s * s * std::abs(a + c);
    }
    det.push_back(std::move(dh));
    log.push_back(std::move(lg));
  }
  std::vector<Keypoint> out;
  for (int k = 1; k + 1 < ladder.levels; ++k) {
    const double s = ladder.sigma(p.sigma_d, k);
    for (const auto& e :
         local_extrema(det[k], NeighborhoodKind::Strict3x3, p.tau, ExtremumPolarity::Maxima)) {
      if (!peaks_in_scale(log, k, e.x, e.y)) continue;
      out.push_back({static_cast<double>(e.x), static_cast<double>(e.y), s, e.response, k - 1,
                     DetectorId::Hessian, Polarity::Max, 0});
    }
  }
  return out;
}

namespace {

bool dog_extremum(const std::vector<Raster>& d, int j, int x, int y, bool maximum) {
  const double v = d[j](x, y);
  for (int dj = -1; dj <= 1; ++dj) {
    const Raster& layer = d[j + dj];
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dj && !dx && !dy) continue;
        const double u = layer(x + dx, y + dy);
        if (maximum ? !(v > u) : !(v < u)) return false;
      }
    }
  }
  return true;
}

Raster decimate(const Raster& src) {
  Raster out((src.width() + 1) / 2, (src.height() + 1) / 2);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) out(x, y) = src(2 * x, 2 * y);
  return out;
}

}  // namespace

std::vector<Keypoint> detect_dog(const GrayImage& img, const DogParams& p) {
  if (p.scales_per_octave < 1 || p.n_octaves < 1 || !(p.tau >= 0.0) || !(p.sigma0 > 0.5)) {
    throw std::invalid_argument("dog: invalid parameters");
  }
  const int s = p.scales_per_octave;
  const double k = std::pow(2.0, 1.0 / s);
  // Input assumed to carry a blur of 0.5 pixels.
  Raster base = gaussian_blur(static_cast<const Raster&>(img),
                              std::sqrt(p.sigma0 * p.sigma0 - 0.25));
  std::vector<Keypoint> out;
  for (int o = 0; o < p.n_octaves; ++o) {
    if (base.width() < 3 || base.height() < 3) break;
    std::vector<Raster> gauss{base};
    for (int j = 1; j < s + 3; ++j) {
      const double prev = p.sigma0 * std::pow(k, j - 1);
      const double cur = prev * k;
      gauss.push_back(gaussian_blur(gauss.back(), std::sqrt(cur * cur - prev * prev)));
    }
    std::vector<Raster> dog;
    for (int j = 0; j + 1 < static_cast<int>(gauss.size()); ++j) {
      Raster d(base.width(), base.height());
      for (std::size_t i = 0; i < d.size(); ++i) {
        d.values()[i] = gauss[j].values()[i] - gauss[j + 1].values()[i];
      }
      dog.push_back(std::move(d));
    }
    const double step = std::pow(2.0, o);
    for (int j = 1; j <= s; ++j) {
      const double sigma = p.sigma0 * std::pow(k, j) * step;
      for (int y = 1; y + 1 < base.height(); ++y) {
        for (int x = 1; x + 1 < base.width(); ++x) {
          const double v = dog[j](x, y);
          Polarity pol = Polarity::None;
          if (v >= p.tau && dog_extremum(dog, j, x, y, true)) pol = Polarity::Max;
          else if (v <= -p.tau && dog_extremum(dog, j, x, y, false)) pol = Polarity::Min;
          if (pol == Polarity::None) continue;
          out.push_back({x * step, y * step, sigma, v, o * s + (j - 1), DetectorId::Dog, pol, 0});
        }
      }
    }
    base = decimate(gauss[s]);
  }
  std::stable_sort(out.begin(), out.end(), keypoint_scan_less);
  return out;
}

}  // namespace densefeat
