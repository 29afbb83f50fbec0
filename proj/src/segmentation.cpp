#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "densefeat/region.hpp"

namespace densefeat {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), size_(n, 1), internal_(n, 0.0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  int join(int a, int b, double weight) {
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    internal_[a] = weight;
    return a;
  }

  int size(int x) const { return size_[x]; }
  double internal(int x) const { return internal_[x]; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<double> internal_;
};

struct GraphEdge {
  int a;
  int b;
  double w;
};

}  // namespace

std::vector<int> segment_graph(const GrayImage& img, const SegParams& p) {
  if (!(p.k > 0.0) || p.min_size < 0) throw std::invalid_argument("segment_graph: invalid parameters");
  const int w = img.width();
  const int h = img.height();
  const int n = w * h;
  std::vector<GraphEdge> edges;
  edges.reserve(static_cast<std::size_t>(n) * 4);
  auto add = [&](int x0, int y0, int x1, int y1) {
    if (x1 < 0 || y1 < 0 || x1 >= w || y1 >= h) return;
    edges.push_back({y0 * w + x0, y1 * w + x1, 255.0 * std::abs(img(x0, y0) - img(x1, y1))});
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      add(x, y, x + 1, y);
      add(x, y, x, y + 1);
      add(x, y, x + 1, y + 1);
      add(x, y, x + 1, y - 1);
    }
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const GraphEdge& a, const GraphEdge& b) { return a.w < b.w; });

  DisjointSets sets(n);
  for (const auto& e : edges) {
    const int a = sets.find(e.a);
    const int b = sets.find(e.b);
    if (a == b) continue;
    const double ta = sets.internal(a) + p.k / sets.size(a);
    const double tb = sets.internal(b) + p.k / sets.size(b);
    if (e.w <= std::min(ta, tb)) sets.join(a, b, e.w);
  }
  for (const auto& e : edges) {
    const int a = sets.find(e.a);
    const int b = sets.find(e.b);
    if (a != b && (sets.size(a) < p.min_size || sets.size(b) < p.min_size)) {
      sets.join(a, b, std::max(sets.internal(a), sets.internal(b)));
    }
  }

  std::vector<int> labels(n);
  std::vector<int> relabel(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int r = sets.find(i);
    if (relabel[r] < 0) relabel[r] = next++;
    labels[i] = relabel[r];
  }
  return labels;
}

int count_labels(const std::vector<int>& labels) {
  if (labels.empty()) return 0;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

std::vector<Region> labels_to_regions(const std::vector<int>& labels, int width, int height) {
  std::vector<Region> regions(static_cast<std::size_t>(count_labels(labels)));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      regions[labels[static_cast<std::size_t>(y) * width + x]].pixels.push_back({x, y});
    }
  }
  return regions;
}

}  // namespace densefeat
