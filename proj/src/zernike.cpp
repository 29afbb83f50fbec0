#include <tuple>
#include "densefeat/zernike.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "densefeat/extrema.hpp"
#include "densefeat/raster_io.hpp"
#include "densefeat/scale_stack.hpp"

namespace densefeat {

namespace {

constexpr int kMaxRadialOrder = 8;

// 0! .. 17!, exact in double.
const std::array<double, 2 * kMaxRadialOrder + 2>& factorials() {
  static const auto table = [] {
    std::array<double, 2 * kMaxRadialOrder + 2> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table;
}

}  // namespace

double radial_poly(int n, int l, double r) {
  const int al = std::abs(l);
  if (n < 0 || n > kMaxRadialOrder || al > n) {
    throw std::domain_error("radial_poly: need 0 <= |l| <= n <= 8");
  }
  const auto& f = factorials();
  double sum = 0.0;
  for (int s = 0; s <= n - al; ++s) {
    const double coef = f[2 * n + 1 - s] / (f[s] * f[n - al - s] * f[n + al + 1 - s]);
    sum += ((s % 2) ? -coef : coef) * std::pow(r, n - s);
  }
  return sum;
}

std::vector<double> sample_zernike(int n, int l, int size) {
  std::vector<double> k(static_cast<std::size_t>(size) * size, 0.0);
  const double c = (size - 1) / 2.0;
  const double half = size / 2.0;
  const int al = std::abs(l);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = x - c;
      const double dy = y - c;
      const double r = std::hypot(dx, dy) / half;
      if (r > 1.0) continue;
      const double theta = std::atan2(dy, dx);
      const double angular = l >= 0 ? std::cos(al * theta) : std::sin(al * theta);
      k[static_cast<std::size_t>(y) * size + x] = radial_poly(n, al, r) * angular;
    }
  }
  return k;
}

FilterBank build_filter_bank(int max_order, int filter_size) {
  if (max_order < 1 || max_order > 6) throw std::invalid_argument("max_order must be in [1,6]");
  if (filter_size < 5 || filter_size % 2 == 0) {
    throw std::invalid_argument("filter_size must be odd and >= 5");
  }
  FilterBank bank;
  bank.max_order = max_order;
  bank.filter_size = filter_size;
  const double c = (filter_size - 1) / 2.0;
  const double half = filter_size / 2.0;
  std::vector<bool> in_disc(static_cast<std::size_t>(filter_size) * filter_size);
  for (int y = 0; y < filter_size; ++y)
    for (int x = 0; x < filter_size; ++x)
      in_disc[static_cast<std::size_t>(y) * filter_size + x] = std::hypot(x - c, y - c) / half <= 1.0;
  const double disc_count = static_cast<double>(std::count(in_disc.begin(), in_disc.end(), true));

  for (int n = 1; n <= max_order; ++n) {
    for (int l = -n; l <= n; ++l) {
      ZernikeFilter f{n, l, filter_size, sample_zernike(n, l, filter_size)};
      // Mean removed over the disc only, so the outside stays exactly zero.
      double mean = 0.0;
      for (std::size_t i = 0; i < f.kernel.size(); ++i)
        if (in_disc[i]) mean += f.kernel[i];
      mean /= disc_count;
      double norm = 0.0;
      for (std::size_t i = 0; i < f.kernel.size(); ++i) {
        if (in_disc[i]) f.kernel[i] -= mean;
        norm += f.kernel[i] * f.kernel[i];
      }
      norm = std::sqrt(norm);
      for (double& v : f.kernel) v /= norm;
      bank.filters.push_back(std::move(f));
    }
  }
  return bank;
}

long long CapacityTable::sum() const {
  long long per_cell = std::accumulate(per_scale.begin(), per_scale.end(), 0LL);
  return per_cell * 2LL * n_filters;
}

CapacityTable allocate_capacity(int n_z, int n_filters, int n_scales) {
  if (n_z < 1 || n_filters < 1 || n_scales < 1 || n_scales > 30) {
    throw std::invalid_argument("allocate_capacity: inputs must be >= 1");
  }
  CapacityTable t;
  t.n_filters = n_filters;
  t.n_scales = n_scales;
  t.total = n_z;
  t.per_filter = n_z / n_filters;
  t.per_polarity = t.per_filter / 2;
  std::vector<long long> weight(n_scales);
  long long weight_sum = 0;
  for (int i = 0; i < n_scales; ++i) {
    weight[i] = 1LL << (n_scales - 1 - i);
    weight_sum += weight[i];
  }
  t.per_scale.assign(n_scales, 0);
  long long assigned = 0;
  for (int i = 0; i < n_scales; ++i) {
    t.per_scale[i] = static_cast<int>(t.per_polarity * weight[i] / weight_sum);
    assigned += t.per_scale[i];
  }
  // Remaining units (fewer than n_scales) go to the smallest next quotient.
  // Ties go to the coarser scale; finer-first could leave s_k = 2 s_k+1 + 2.
  for (long long left = t.per_polarity - assigned; left > 0; --left) {
    int best = 0;
    for (int i = 1; i < n_scales; ++i) {
      // (b_i + 1) / w_i <= (b_best + 1) / w_best
      if ((t.per_scale[i] + 1LL) * weight[best] <= (t.per_scale[best] + 1LL) * weight[i]) best = i;
    }
    ++t.per_scale[best];
  }
  return t;
}

ResponseMap filter_response(const GrayImage& img, const ZernikeFilter& filter) {
  const int w = img.width();
  const int h = img.height();
  const int k = filter.size;
  const int r = k / 2;
  const int pw = w + 2 * r;
  std::vector<double> padded(static_cast<std::size_t>(pw) * (h + 2 * r));
  for (int y = -r; y < h + r; ++y)
    for (int x = -r; x < w + r; ++x)
      padded[static_cast<std::size_t>(y + r) * pw + (x + r)] = img.at_reflect(x, y);
  ResponseMap out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int v = 0; v < k; ++v) {
        const double* row = &padded[static_cast<std::size_t>(y + v) * pw + x];
        const double* kr = &filter.kernel[static_cast<std::size_t>(v) * k];
        for (int u = 0; u < k; ++u) acc += kr[u] * row[u];
      }
      out(x, y) = acc;
    }
  }
  return out;
}

std::vector<Keypoint> detect_zernike(const GrayImage& img, const FilterBank& bank, int n_z,
                                     int n_scales) {
  const ScaleStack stack = build_scale_stack(img, n_scales);
  const int n_filters = static_cast<int>(bank.filters.size());
  const CapacityTable cap = allocate_capacity(n_z, n_filters, stack.n_sigma());
  std::vector<Keypoint> out;
  for (int level = 0; level < stack.n_sigma(); ++level) {
    const int budget = cap.per_scale[level];
    if (budget == 0) continue;
    for (int f = 0; f < n_filters; ++f) {
      const auto resp = filter_response(stack.levels[level], bank.filters[f]);
      auto ext = local_extrema(resp, NeighborhoodKind::Strict3x3, 0.0, ExtremumPolarity::Both);
      std::vector<Extremum> maxima, minima;
      for (const auto& e : ext) (e.is_max ? maxima : minima).push_back(e);
      // Extrema arrive in row-major order; stable sorting keeps that as tie-break.
      std::stable_sort(maxima.begin(), maxima.end(),
                       [](const Extremum& a, const Extremum& b) { return a.response > b.response; });
      std::stable_sort(minima.begin(), minima.end(),
                       [](const Extremum& a, const Extremum& b) { return a.response < b.response; });
      auto emit = [&](const std::vector<Extremum>& list, Polarity pol) {
        const std::size_t n = std::min<std::size_t>(list.size(), static_cast<std::size_t>(budget));
        for (std::size_t i = 0; i < n; ++i) {
          out.push_back({stack.to_base_x(level, list[i].x), stack.to_base_y(level, list[i].y),
                         stack.level_scale[level], list[i].response, level, DetectorId::Zernike,
                         pol, f});
        }
      };
      emit(maxima, Polarity::Max);
      emit(minima, Polarity::Min);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Keypoint& a, const Keypoint& b) {
    return std::tie(a.scale_index, a.y, a.x, a.channel, a.polarity) <
           std::tie(b.scale_index, b.y, b.x, b.channel, b.polarity);
  });
  return out;
}

void export_filter_bank(const FilterBank& bank, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream index(dir / "index.txt", std::ios::trunc);
  if (!index) throw std::runtime_error("cannot write " + (dir / "index.txt").string());
  for (const auto& f : bank.filters) {
    const std::string name = "zernike_n" + std::to_string(f.order) + "_l" +
                             (f.repetition < 0 ? "m" : "p") + std::to_string(std::abs(f.repetition)) +
                             ".rmap";
    write_rmap(dir / name, Raster(f.size, f.size, f.kernel));
    index << f.order << ' ' << f.repetition << ' ' << name << '\n';
  }
}

}  // namespace densefeat
