#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "doctest.h"
#include "densefeat/dense.hpp"
#include "densefeat/descriptor.hpp"
#include "densefeat/scale_stack.hpp"
#include "synth.hpp"

using namespace densefeat;

TEST_CASE("dense grid") {
  const auto one = detect_dense_grid(synth::constant(64, 64, 0.5), {16, 1});
  REQUIRE(one.size() == 16);
  CHECK(one[0].x == 8.0);
  CHECK(one[0].y == 8.0);
  for (const auto& k : one) {
    CHECK(k.response == 0.0);
    CHECK(k.polarity == Polarity::None);
  }
  CHECK(detect_dense_grid(synth::constant(10, 10, 0.5), {24, 1}).empty());

  const auto img = synth::texture(120, 90, 1);
  std::size_t prev = SIZE_MAX;
  for (int d : {4, 8, 12, 16}) {
    const auto n = detect_dense_grid(img, {d, 5}).size();
    CHECK(n < prev);
    prev = n;
  }
  CHECK(detect_dense_grid(img, {8, 5}) == detect_dense_grid(img, {8, 5}));
  for (const auto& k : detect_dense_grid(img, {8, 5})) {
    CHECK(k.sigma == doctest::Approx(std::pow(std::sqrt(2.0), k.scale_index)).epsilon(1e-12));
  }
}

TEST_CASE("dense interest points") {
  SUBCASE("one point per cell") {
    for (auto [w, h, cell] : {std::tuple{64, 48, 8}, std::tuple{70, 45, 16}, std::tuple{33, 33, 5}}) {
      DenseIpParams p;
      p.cell = cell;
      const auto cells = static_cast<std::size_t>((w + cell - 1) / cell) * ((h + cell - 1) / cell);
      CHECK(detect_dense_ip(synth::texture(w, h, 3), p).size() == cells);
      const auto flat = detect_dense_ip(synth::constant(w, h, 0.5), p);
      CHECK(flat.size() == cells);
      for (const auto& k : flat) {
        CHECK(k.response == 0.0);
        CHECK(k.scale_index == 0);
      }
    }
  }
  SUBCASE("corner attracts its cell") {
    DenseIpParams p;
    p.cell = 16;
    p.search_scales = 1;
    for (auto kind : {DenseResponse::Frobenius, DenseResponse::Harris}) {
      p.response_kind = kind;
      const auto kps = detect_dense_ip(synth::corner(64, 64, 40, 40), p);
      bool near = false;
      for (const auto& k : kps) {
        if (k.x < 32 || k.x >= 48 || k.y < 32 || k.y >= 48) continue;
        if (kind == DenseResponse::Harris) {
          near = std::abs(k.x - 39.5) <= 2.0 && std::abs(k.y - 39.5) <= 2.0;
        } else {
          // The Frobenius norm is larger along a straight edge than at the corner.
          near = (k.x >= 38 && std::abs(k.y - 39.5) <= 2.0) || (k.y >= 38 && std::abs(k.x - 39.5) <= 2.0);
        }
      }
      CHECK(near);
    }
  }
}

TEST_CASE("dense l2 norm detector") {
  CHECK(detect_dense_l2norm(synth::constant(64, 64, 0.5), {}).empty());

  const auto img = synth::texture(80, 72, 17);
  L2NormParams lo, hi;
  lo.n_scales = hi.n_scales = 2;
  hi.tau = 200.0;
  const auto a = detect_dense_l2norm(img, lo);
  const auto b = detect_dense_l2norm(img, hi);
  using Key = std::tuple<int, double, double>;
  std::set<Key> ka, kb;
  for (const auto& k : a) ka.insert({k.scale_index, k.y, k.x});
  for (const auto& k : b) {
    kb.insert({k.scale_index, k.y, k.x});
    CHECK(k.response >= 200.0);
  }
  CHECK(std::includes(ka.begin(), ka.end(), kb.begin(), kb.end()));

  SUBCASE("responses are descriptor norms") {
    L2NormParams p;
    p.n_scales = 1;
    for (const auto& k : detect_dense_l2norm(img, p)) {
      const auto patch = window_patch(img, static_cast<int>(k.x), static_cast<int>(k.y), p.patch_side);
      REQUIRE(patch.has_value());
      CHECK(std::abs(std::sqrt(sift(*patch).squared_norm()) - k.response) <= 1e-6);
      CHECK(k.polarity == Polarity::Max);
    }
    const auto map = dense_sift_norm_map(img, p.patch_side, 1);
    for (int y = 0; y < img.height(); y += 7) {
      for (int x = 0; x < img.width(); x += 5) {
        const auto patch = window_patch(img, x, y, p.patch_side);
        const double expect = patch ? std::sqrt(sift(*patch).squared_norm()) : 0.0;
        CHECK(std::abs(map(x, y) - expect) <= 1e-6);
      }
    }
    const auto strided = dense_sift_norm_map(img, p.patch_side, 3);
    CHECK(strided.width() == 27);
    CHECK(strided.height() == 24);
    CHECK(strided(10, 12) == doctest::Approx(map(30, 36)).epsilon(1e-9));
  }

  SUBCASE("step edge") {
    // Contrast varies along the edge so the norm map is not flat in y.
    GrayImage step(100, 100, 0.2);
    for (int y = 0; y < 100; ++y)
      for (int x = 50; x < 100; ++x) step(x, y) = 0.5 + 0.4 * std::exp(-(y - 50.0) * (y - 50.0) / 400.0);
    L2NormParams p;
    p.n_scales = 1;
    const auto kps = detect_dense_l2norm(step, p);
    REQUIRE(!kps.empty());
    for (const auto& k : kps) CHECK(std::abs(k.x - 49.5) <= 21.0);
  }
}
