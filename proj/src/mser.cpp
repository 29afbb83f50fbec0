#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "densefeat/region.hpp"

namespace densefeat {

namespace {

constexpr int kLevels = 256;

struct Node {
  int level = 0;
  int size = 0;
  int min_pixel = 0;
  int parent = -1;
  int main_child = -1;
  std::vector<int> children;
  std::vector<int> own_pixels;
};

// Component tree of the sets {level <= t}; one node per distinct set.
class ComponentTree {
 public:
  ComponentTree(const std::vector<int>& levels, int width, int height);

  const Node& node(int i) const { return nodes_[i]; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int death(int i) const {
    return nodes_[i].parent >= 0 ? nodes_[nodes_[i].parent].level - 1 : kLevels - 1;
  }
  std::vector<int> pixels(int i) const;

 private:
  int find(int p) {
    while (uf_parent_[p] != p) {
      uf_parent_[p] = uf_parent_[uf_parent_[p]];
      p = uf_parent_[p];
    }
    return p;
  }

  std::vector<Node> nodes_;
  std::vector<int> uf_parent_;
};

ComponentTree::ComponentTree(const std::vector<int>& levels, int width, int height) {
  const int n = width * height;
  uf_parent_.resize(n);
  std::vector<int> uf_size(n, 1), uf_min(n), node_of(n, -1), touched(n, -1), created(n, -1);
  std::vector<std::vector<int>> pending(n), own(n);
  std::vector<char> processed(n, 0);

  std::vector<std::vector<int>> by_level(kLevels);
  for (int p = 0; p < n; ++p) {
    if (levels[p] < 0 || levels[p] >= kLevels) throw std::invalid_argument("level out of range");
    by_level[levels[p]].push_back(p);
  }

  auto touch = [&](int r, int t) {
    if (touched[r] == t) return;
    touched[r] = t;
    pending[r].clear();
    own[r].clear();
    if (node_of[r] >= 0) pending[r].push_back(node_of[r]);
  };

  for (int t = 0; t < kLevels; ++t) {
    std::vector<int> roots;
    for (int p : by_level[t]) {
      processed[p] = 1;
      uf_parent_[p] = p;
      uf_min[p] = p;
      touch(p, t);
      own[p].push_back(p);
      roots.push_back(p);
      const int x = p % width;
      const int y = p / width;
      const int nbr[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& q : nbr) {
        if (q[0] < 0 || q[1] < 0 || q[0] >= width || q[1] >= height) continue;
        const int qi = q[1] * width + q[0];
        if (!processed[qi]) continue;
        int a = find(p);
        int b = find(qi);
        if (a == b) continue;
        touch(b, t);
        if (uf_size[a] < uf_size[b] || (uf_size[a] == uf_size[b] && b < a)) std::swap(a, b);
        uf_parent_[b] = a;
        uf_size[a] += uf_size[b];
        uf_min[a] = std::min(uf_min[a], uf_min[b]);
        pending[a].insert(pending[a].end(), pending[b].begin(), pending[b].end());
        own[a].insert(own[a].end(), own[b].begin(), own[b].end());
        pending[b].clear();
        own[b].clear();
        roots.push_back(a);
      }
    }
    for (int r : roots) {
      if (find(r) != r || created[r] == t) continue;
      created[r] = t;
      Node nd;
      nd.level = t;
      nd.size = uf_size[r];
      nd.min_pixel = uf_min[r];
      nd.children = std::move(pending[r]);
      nd.own_pixels = std::move(own[r]);
      pending[r].clear();
      own[r].clear();
      const int id = static_cast<int>(nodes_.size());
      for (int c : nd.children) nodes_[c].parent = id;
      nodes_.push_back(std::move(nd));
      node_of[r] = id;
    }
  }

  for (auto& nd : nodes_) {
    for (int c : nd.children) {
      const Node& cn = nodes_[c];
      if (nd.main_child < 0) {
        nd.main_child = c;
        continue;
      }
      const Node& best = nodes_[nd.main_child];
      if (cn.size > best.size || (cn.size == best.size && cn.min_pixel < best.min_pixel)) {
        nd.main_child = c;
      }
    }
  }
}

std::vector<int> ComponentTree::pixels(int i) const {
  std::vector<int> out;
  std::vector<int> stack{i};
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    out.insert(out.end(), nodes_[k].own_pixels.begin(), nodes_[k].own_pixels.end());
    stack.insert(stack.end(), nodes_[k].children.begin(), nodes_[k].children.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// A component at one specific threshold.
struct LevelNode {
  int level;
  int node;
};

class StabilityEvaluator {
 public:
  StabilityEvaluator(const ComponentTree& tree, int delta) : tree_(tree), delta_(delta) {}

  double variation(LevelNode ln) const {
    const int up_level = std::min(ln.level + delta_, kLevels - 1);
    int up = ln.node;
    while (tree_.death(up) < up_level) up = tree_.node(up).parent;
    int down_size = 0;
    const int down_level = ln.level - delta_;
    if (down_level >= 0) {
      int d = ln.node;
      while (d >= 0 && down_level < tree_.node(d).level) d = tree_.node(d).main_child;
      if (d >= 0) down_size = tree_.node(d).size;
    }
    return static_cast<double>(tree_.node(up).size - down_size) / tree_.node(ln.node).size;
  }

  std::optional<LevelNode> above(LevelNode ln) const {
    if (ln.level + 1 <= tree_.death(ln.node)) return LevelNode{ln.level + 1, ln.node};
    const int parent = tree_.node(ln.node).parent;
    if (parent < 0) return std::nullopt;
    return LevelNode{ln.level + 1, parent};
  }

  std::optional<LevelNode> below(LevelNode ln) const {
    if (ln.level - 1 >= tree_.node(ln.node).level) return LevelNode{ln.level - 1, ln.node};
    const int child = tree_.node(ln.node).main_child;
    if (child < 0) return std::nullopt;
    return LevelNode{ln.level - 1, child};
  }

  /// Bottom of a run of equal variation bounded by strictly larger values.
  bool selected(LevelNode ln, double q) const {
    if (const auto b = below(ln)) {
      if (!(variation(*b) > q)) return false;
    }
    std::optional<LevelNode> cur = ln;
    while ((cur = above(*cur))) {
      const double qu = variation(*cur);
      if (qu != q) return qu > q;
    }
    return true;
  }

 private:
  const ComponentTree& tree_;
  int delta_;
};

}  // namespace

std::vector<int> quantize_levels(const GrayImage& img) {
  std::vector<int> out(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    out[i] = static_cast<int>(std::lround(std::clamp(img.values()[i], 0.0, 1.0) * 255.0));
  }
  return out;
}

std::vector<Region> detect_mser_levels(const std::vector<int>& levels, int width, int height,
                                       const MserParams& p, RegionPolarity polarity) {
  if (p.delta < 1) throw std::invalid_argument("mser: delta must be >= 1");
  if (static_cast<int>(levels.size()) != width * height) {
    throw std::invalid_argument("mser: level data does not match dimensions");
  }
  if (levels.empty()) return {};
  std::vector<int> ordered = levels;
  if (polarity == RegionPolarity::BrightOnDark) {
    for (int& v : ordered) v = kLevels - 1 - v;
  }
  const int max_area = p.max_area.value_or(width * height / 4);
  const ComponentTree tree(ordered, width, height);
  const StabilityEvaluator eval(tree, p.delta);

  std::vector<Region> out;
  for (int i = 0; i < tree.size(); ++i) {
    const Node& nd = tree.node(i);
    if (nd.size < p.min_area || nd.size > max_area) continue;
    for (int t = nd.level; t <= tree.death(i); ++t) {
      const double q = eval.variation({t, i});
      if (!eval.selected({t, i}, q)) continue;
      // Lowest selecting level only; one region per pixel set.
      if (q <= p.max_variation) {
        Region r;
        r.polarity = polarity;
        r.stability = q;
        r.level = t;
        for (int px : tree.pixels(i)) r.pixels.push_back({px % width, px / width});
        out.push_back(std::move(r));
      }
      break;
    }
  }
  return out;
}

std::vector<Region> detect_mser(const GrayImage& img, const MserParams& p) {
  const auto levels = quantize_levels(img);
  auto dark = detect_mser_levels(levels, img.width(), img.height(), p, RegionPolarity::DarkOnBright);
  auto bright =
      detect_mser_levels(levels, img.width(), img.height(), p, RegionPolarity::BrightOnDark);
  dark.insert(dark.end(), std::make_move_iterator(bright.begin()),
              std::make_move_iterator(bright.end()));
  auto key = [w = img.width()](const Region& r) {
    const Pixel& f = r.pixels.front();
    return std::make_tuple(r.level, r.pixels.size(), f.y * w + f.x, static_cast<int>(r.polarity));
  };
  std::stable_sort(dark.begin(), dark.end(),
                   [&](const Region& a, const Region& b) { return key(a) < key(b); });
  return dark;
}

}  // namespace densefeat
