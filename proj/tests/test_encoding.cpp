#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "densefeat/encoding.hpp"
#include "densefeat/raster_io.hpp"

using namespace densefeat;

namespace {

PointSet random_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PointSet p;
  p.dim = dim;
  p.values.resize(n * dim);
  for (double& v : p.values) v = u(rng);
  return p;
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("kmeans") {
  SUBCASE("k distinct points") {
    const auto p = random_points(6, 3, 1);
    std::vector<double> trace;
    const auto cb = kmeans_train(p, 6, 42, 25, &trace);
    CHECK(kmeans_objective(p, cb) == 0.0);
    CHECK(trace.back() == 0.0);
  }
  SUBCASE("objective never increases") {
    const auto p = random_points(500, 8, 2);
    for (std::uint64_t seed : {0u, 1u, 2u}) {
      std::vector<double> trace;
      kmeans_train(p, 12, seed, 50, &trace);
      REQUIRE(trace.size() >= 2);
      for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
    }
  }
  SUBCASE("two blobs") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 0.3);
    PointSet p;
    p.dim = 2;
    for (int i = 0; i < 400; ++i) {
      const double cx = i % 2 ? 5.0 : -5.0;
      p.values.push_back(cx + g(rng));
      p.values.push_back(1.0 + g(rng));
    }
    double mx[2] = {0, 0}, my[2] = {0, 0};
    for (int i = 0; i < 400; ++i) {
      mx[i % 2] += p.values[2 * i] / 200.0;
      my[i % 2] += p.values[2 * i + 1] / 200.0;
    }
    const auto cb = kmeans_train(p, 2, 7);
    for (int c = 0; c < 2; ++c) {
      const int blob = cb.centroid(c)[0] > 0.0 ? 1 : 0;
      CHECK(std::abs(cb.centroid(c)[0] - mx[blob]) < 0.1);
      CHECK(std::abs(cb.centroid(c)[1] - my[blob]) < 0.1);
    }
  }
  SUBCASE("determinism and errors") {
    const auto p = random_points(300, 5, 4);
    const auto a = kmeans_train(p, 9, 11);
    const auto b = kmeans_train(p, 9, 11);
    CHECK(a.centroids == b.centroids);
    CHECK(kmeans_train(p, 9, 12).centroids != a.centroids);
    CHECK_THROWS_AS(kmeans_train(random_points(3, 2, 1), 4, 0), std::invalid_argument);
  }
  SUBCASE("duplicates force re-seeding without crashing") {
    PointSet p;
    p.dim = 1;
    p.values = {0, 0, 0, 0, 0, 0, 1, 1, 1, 9};
    const auto cb = kmeans_train(p, 3, 5);
    std::vector<double> c(cb.centroids);
    std::sort(c.begin(), c.end());
    CHECK(c == std::vector<double>{0, 1, 9});
  }
}

TEST_CASE("vlad") {
  const auto pts = random_points(40, 4, 5);
  const auto cb = kmeans_train(pts, 5, 1);

  PointSet coincident;
  coincident.dim = 4;
  for (int c : {0, 3, 3, 1}) coincident.values.insert(coincident.values.end(), cb.centroid(c), cb.centroid(c) + 4);
  for (double v : vlad_encode(coincident, cb).values) CHECK(v == 0.0);

  PointSet one;
  one.dim = 4;
  one.values = {0.3, -0.2, 0.9, 0.1};
  const auto k = cb.nearest(one.values.data());
  const auto v = vlad_encode(one, cb);
  for (std::size_t w = 0; w < 5; ++w)
    for (int j = 0; j < 4; ++j) CHECK(v.values[w * 4 + j] == (w == k ? one.values[j] - cb.centroid(w)[j] : 0.0));

  const auto many = random_points(1000, 4, 6);
  for (std::size_t i = 0; i < many.size(); ++i) {
    std::size_t best = 0;
    double bd = 1e300;
    for (std::size_t c = 0; c < 5; ++c) {
      double d = 0.0;
      for (int j = 0; j < 4; ++j) d += std::pow(many.row(i)[j] - cb.centroid(c)[j], 2);
      if (d < bd) {
        bd = d;
        best = c;
      }
    }
    CHECK(cb.nearest(many.row(i)) == best);
  }

  PointSet shuffled = many;
  std::mt19937_64 rng(8);
  for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
    const std::size_t j = rng() % (i + 1);
    for (int d = 0; d < 4; ++d) std::swap(shuffled.values[i * 4 + d], shuffled.values[j * 4 + d]);
  }
  const auto a = vlad_encode(many, cb), b = vlad_encode(shuffled, cb);
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-6);

  PointSet empty;
  empty.dim = 4;
  CHECK(norm(vlad_encode(empty, cb).values) == 0.0);
  PointSet wrong;
  wrong.dim = 3;
  wrong.values = {1, 2, 3};
  CHECK_THROWS(vlad_encode(wrong, cb));

  const auto n = l2_normalize(power_law(a));
  CHECK(std::abs(norm(n.values) - 1.0) < 1e-12);
  double self = 0.0;
  for (double x : n.values) self += x * x;
  CHECK(self == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("power law and normalization") {
  ImageVector v{{0.0, 4.0, -4.0, 9.0}};
  const auto p = power_law(v, 0.5);
  CHECK(p.values == std::vector<double>{0.0, 2.0, -2.0, 3.0});
  CHECK(power_law(v, 1.0).values == v.values);
  CHECK_THROWS(power_law(v, 0.0));
  CHECK_THROWS(power_law(v, 1.5));

  const auto n = l2_normalize(ImageVector{{3.0, 4.0, 0.0}});
  CHECK(n.values[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(n.values[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(n.normalized);
  CHECK(!n.zero);
  const auto again = l2_normalize(n);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(again.values[i] - n.values[i]) < 1e-12);
  const auto z = l2_normalize(ImageVector{{0.0, 0.0}});
  CHECK(z.zero);
  CHECK(z.values == std::vector<double>{0.0, 0.0});
}

TEST_CASE("codebook files") {
  const auto dir = std::filesystem::temp_directory_path() / "densefeat_cbk_test";
  std::filesystem::create_directories(dir);
  Codebook cb{2, 3, 0x1122334455667788ull, {0.5, -1, 2, 3, 4.25, 5}};
  write_codebook(dir / "a.cbk", cb);
  CHECK(std::filesystem::file_size(dir / "a.cbk") == 4u + 8u + 8u + 24u);
  const auto back = read_codebook(dir / "a.cbk");
  CHECK(back.k == 2);
  CHECK(back.dim == 3);
  CHECK(back.seed == cb.seed);
  CHECK(back.centroids == cb.centroids);
  std::filesystem::resize_file(dir / "a.cbk", 30);
  CHECK_THROWS_AS(read_codebook(dir / "a.cbk"), ParseError);
}
