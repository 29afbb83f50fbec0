#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "densefeat/extrema.hpp"
#include "densefeat/filters.hpp"
#include "densefeat/image.hpp"
#include "densefeat/raster_io.hpp"
#include "densefeat/scale_stack.hpp"
#include "synth.hpp"

using namespace densefeat;

TEST_CASE("to_grayscale luma") {
  ColorImage c{2, 1, 3, {0.4, 0.4, 0.4, 1.0, 0.0, 0.0}};
  const GrayImage g = to_grayscale(c);
  CHECK(g(0, 0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(g(1, 0) == doctest::Approx(0.299).epsilon(1e-12));

  ColorImage gray{3, 1, 1, {0.1, 0.5, 0.9}};
  const GrayImage same = to_grayscale(gray);
  CHECK(same(0, 0) == 0.1);
  CHECK(same(2, 0) == 0.9);

  CHECK_THROWS_AS(to_grayscale(ColorImage{0, 0, 3, {}}), std::invalid_argument);
}

TEST_CASE("downsample_to_area sizes") {
  const auto big = downsample_to_area(GrayImage(800, 600, 0.5));
  CHECK(big.width() == 447);
  CHECK(big.height() == 335);
  CHECK(downsample_to_area(GrayImage(300, 400)).width() == 300);
  const auto edge = downsample_to_area(GrayImage(500, 300));
  CHECK(edge.width() == 500);
  CHECK(edge.height() == 300);
}

TEST_CASE("gaussian blur") {
  SUBCASE("constant stays constant") {
    const auto out = gaussian_blur(synth::constant(17, 13, 0.37), 2.0);
    for (double v : out.values()) CHECK(v == doctest::Approx(0.37).epsilon(1e-12));
  }
  SUBCASE("impulse gives the normalized kernel") {
    GrayImage img(21, 21);
    img(10, 10) = 1.0;
    const auto out = gaussian_blur(img, 1.0);
    const auto k = gaussian_kernel(1.0);
    REQUIRE(k.size() == 7);
    double sum = 0.0;
    for (double v : k) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    const double z = 1.0 + 2.0 * (std::exp(-0.5) + std::exp(-2.0) + std::exp(-4.5));
    CHECK(k[3] == doctest::Approx(1.0 / z).epsilon(1e-12));
    for (int dy = -3; dy <= 3; ++dy)
      for (int dx = -3; dx <= 3; ++dx) CHECK(out(10 + dx, 10 + dy) == doctest::Approx(k[dx + 3] * k[dy + 3]));
    CHECK(out(0, 0) == 0.0);
  }
  SUBCASE("semigroup") {
    const auto img = synth::noise(48, 40, 7);
    const auto twice = gaussian_blur(gaussian_blur(img, 1.5), 1.5);
    const auto once = gaussian_blur(img, 1.5 * std::sqrt(2.0));
    double worst = 0.0;
    for (int y = 8; y < 32; ++y)
      for (int x = 8; x < 40; ++x) worst = std::max(worst, std::abs(twice(x, y) - once(x, y)));
    CHECK(worst < 1e-3);
  }
  SUBCASE("non-positive sigma is a recorded no-op") {
    const auto img = synth::noise(9, 9, 1);
    Diagnostics diag;
    const auto out = gaussian_blur(img, 0.0, &diag);
    CHECK(out.values()[40] == img.values()[40]);
    CHECK(diag.warnings.size() == 1);
  }
}

TEST_CASE("gradients") {
  const auto flat = gradients(synth::constant(20, 20, 0.5), 1.0);
  for (double v : flat.lx.values()) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));

  GrayImage ramp(64, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 64; ++x) ramp(x, y) = static_cast<double>(x) / 64.0;
  const auto g = gradients(ramp, 1.0);
  for (int y = 5; y < 27; ++y) {
    for (int x = 5; x < 59; ++x) {
      CHECK(g.lx(x, y) == doctest::Approx(1.0 / 64.0).epsilon(1e-9));
      CHECK(std::abs(g.ly(x, y)) < 1e-12);
    }
  }

  const auto img = synth::noise(23, 17, 3);
  GrayImage t(17, 23);
  for (int y = 0; y < 17; ++y)
    for (int x = 0; x < 23; ++x) t(y, x) = img(x, y);
  const auto a = gradients(img, 1.2);
  const auto b = gradients(t, 1.2);
  for (int y = 0; y < 17; ++y) {
    for (int x = 0; x < 23; ++x) {
      CHECK(a.lx(x, y) == doctest::Approx(b.ly(y, x)).epsilon(1e-12));
      CHECK(a.ly(x, y) == doctest::Approx(b.lx(y, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("scale stack") {
  const auto stack = build_scale_stack(GrayImage(400, 375, 0.5));
  REQUIRE(stack.n_sigma() == 5);
  const double expected[] = {150000, 75000, 37500, 18750, 9375};
  for (int i = 0; i < 5; ++i) {
    const double area = static_cast<double>(stack.levels[i].width()) * stack.levels[i].height();
    CHECK(area == doctest::Approx(expected[i]).epsilon(0.02));
    if (i > 0) {
      const double prev = static_cast<double>(stack.levels[i - 1].width()) * stack.levels[i - 1].height();
      CHECK(prev / area >= 1.9);
      CHECK(prev / area <= 2.1);
    }
  }
  CHECK(build_scale_stack(GrayImage(50, 50), 1).n_sigma() == 1);
  CHECK(build_scale_stack(GrayImage(16, 16)).n_sigma() < 5);
  CHECK(stack.to_level_x(3, stack.to_base_x(3, 12.0)) == doctest::Approx(12.0));
}

TEST_CASE("local extrema") {
  SUBCASE("single peak") {
    ResponseMap r(9, 9);
    r(4, 5) = 1.0;
    for (auto kind : {NeighborhoodKind::Strict3x3, NeighborhoodKind::Relaxed2Dir}) {
      const auto e = local_extrema(r, kind, 0.0);
      REQUIRE(e.size() == 1);
      CHECK(e[0].x == 4);
      CHECK(e[0].y == 5);
    }
  }
  SUBCASE("horizontal ridge") {
    ResponseMap r(12, 9);
    for (int x = 0; x < 12; ++x) r(x, 4) = 1.0;
    CHECK(local_extrema(r, NeighborhoodKind::Strict3x3, 0.0).empty());
    const auto e = local_extrema(r, NeighborhoodKind::Relaxed2Dir, 0.0);
    CHECK(e.size() == 10);
    for (const auto& p : e) CHECK(p.y == 4);
  }
  SUBCASE("relaxed is a superset on random maps") {
    for (int t = 0; t < 100; ++t) {
      const auto img = synth::noise(32, 32, 100 + t);
      ResponseMap r{Raster(img)};
      for (double& v : r.values()) v -= 0.5;
      for (auto pol : {ExtremumPolarity::Maxima, ExtremumPolarity::Minima}) {
        const auto strict = local_extrema(r, NeighborhoodKind::Strict3x3, 0.1, pol);
        const auto relaxed = local_extrema(r, NeighborhoodKind::Relaxed2Dir, 0.1, pol);
        std::size_t j = 0;
        for (const auto& s : strict) {
          while (j < relaxed.size() && (relaxed[j].y != s.y || relaxed[j].x != s.x)) ++j;
          CHECK(j < relaxed.size());
        }
      }
    }
  }
  SUBCASE("plateaus and frame") {
    ResponseMap r(6, 6);
    r(2, 2) = r(3, 2) = 1.0;
    r(0, 3) = 5.0;
    CHECK(local_extrema(r, NeighborhoodKind::Strict3x3, 0.0).empty());
  }
  SUBCASE("thresholds by sign") {
    ResponseMap r(7, 7);
    r(2, 2) = 0.5;
    r(4, 4) = -0.5;
    CHECK(local_extrema(r, NeighborhoodKind::Strict3x3, 0.4, ExtremumPolarity::Both).size() == 2);
    CHECK(local_extrema(r, NeighborhoodKind::Strict3x3, 0.6, ExtremumPolarity::Both).empty());
  }
}

TEST_CASE("rmap round trip and errors") {
  const auto dir = std::filesystem::temp_directory_path() / "densefeat_core_test";
  std::filesystem::create_directories(dir);
  Raster r(3, 2, {0.0, -1.5, 2.25, 3.0, 1e-3, 7.0});
  write_rmap(dir / "a.rmap", r);
  const Raster back = read_rmap(dir / "a.rmap");
  CHECK(back.width() == 3);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(back.values()[i] == static_cast<float>(r.values()[i]));

  const auto size = std::filesystem::file_size(dir / "a.rmap");
  std::filesystem::resize_file(dir / "a.rmap", size - 2);
  try {
    read_rmap(dir / "a.rmap");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 32);
  }
}
