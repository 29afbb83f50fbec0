#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "densefeat/config.hpp"
#include "densefeat/keypoint.hpp"
#include "densefeat/raster_io.hpp"
#include "densefeat/retrieval.hpp"
#include "densefeat/visualize.hpp"

using namespace densefeat;

namespace {

double brute_ap(const std::vector<std::size_t>& ranked, const std::set<std::size_t>& rel) {
  std::vector<double> precision(ranked.size());
  std::size_t hits = 0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    hits += rel.count(ranked[k]);
    precision[k] = static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  double s = 0.0;
  for (std::size_t k = 0; k < ranked.size(); ++k)
    if (rel.count(ranked[k])) s += precision[k];
  return s / static_cast<double>(rel.size());
}

}  // namespace

TEST_CASE("keypoint text format") {
  std::vector<Keypoint> kps = {{1.5, 2.25, 1.0, -0.125, 0, DetectorId::Dense, Polarity::None, 3},
                               {10, 20, 2.5, 7, 3, DetectorId::RelaxedFrobenius, Polarity::Max, 0},
                               {4, 5, 1.41, 0, 1, DetectorId::Mser, Polarity::Min, 0}};
  std::ostringstream out;
  write_keypoints(out, kps);
  CHECK(out.str().rfind("densefeat-kp 1\n3\n1.500000 2.250000 1.000000 -0.125000 0 dense none\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_keypoints(in);
  REQUIRE(back.size() == 3);
  CHECK(back[1].detector == DetectorId::RelaxedFrobenius);
  CHECK(back[2].polarity == Polarity::Min);
  CHECK(back[0].channel == 0);

  std::istringstream bad("densefeat-kp 1\n1\n1 2 3 4 0 nosuch none\n");
  CHECK_THROWS_AS(read_keypoints(bad), ParseError);
  std::istringstream shortfile("densefeat-kp 1\n2\n1 2 3 4 0 dense none\n");
  CHECK_THROWS_AS(read_keypoints(shortfile), ParseError);
  for (auto id : all_detectors()) CHECK(parse_detector(detector_name(id)) == id);
}

TEST_CASE("config parsing") {
  const auto f = ConfigFile::parse(
      "# comment\n[detector]\nname = harris\n\n[harris]\ntau = 0.001  # trailing\n[encoding]\nk = 16\n"
      "train_manifest = train.txt\n",
      "/data");
  const auto c = resolve_config(f);
  CHECK(c.detector == DetectorId::Harris);
  CHECK(c.harris.tau == 0.001);
  CHECK(c.encode.k == 16);
  CHECK(c.encode.train_manifest == std::filesystem::path("/data/train.txt"));
  CHECK(c.dense.delta_xy == 8);

  CHECK_THROWS_AS(resolve_config(ConfigFile::parse("[harris]\ntua = 1\n")), ConfigError);
  CHECK_THROWS_AS(resolve_config(ConfigFile::parse("[nosuch]\nx = 1\n")), ConfigError);
  CHECK_THROWS_AS(resolve_config(ConfigFile::parse("[dense]\ndelta_xy = eight\n")), ConfigError);
  CHECK_THROWS_AS(resolve_config(ConfigFile::parse("[dense]\ndelta_xy = 0\n")), ConfigError);
  CHECK_THROWS_AS(resolve_config(ConfigFile::parse("[harris]\nsigma_i = 0.5\n")), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse("x = 1\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse("[a]\nx = 1\nx = 2\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse("[a\n"), ConfigError);

  ConfigFile g = f;
  g.set("dense.delta_xy", "12");
  CHECK(resolve_config(g).dense.delta_xy == 12);
  CHECK_THROWS_AS(g.set("nodot", "1"), ConfigError);
}

TEST_CASE("manifest parsing") {
  const auto m = parse_manifest("# holidays style\na.png\t1\nb.png\t1\nc.png\t2\n\nd.png\t1\n", "/imgs");
  REQUIRE(m.entries.size() == 4);
  CHECK(m.entries[0].path == std::filesystem::path("/imgs/a.png"));
  CHECK(m.queries() == std::vector<std::size_t>{0, 2});
  CHECK_THROWS_AS(parse_manifest("a.png 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_manifest("a.png\tx\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_manifest("a.png\t1\na.png\t2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_manifest("# nothing\n"), std::invalid_argument);
}

TEST_CASE("average precision") {
  const std::vector<std::size_t> r1 = {4};
  CHECK(*average_precision(r1, std::vector<std::size_t>{4}) == 1.0);
  const std::vector<std::size_t> r2 = {3, 7};
  CHECK(*average_precision(r2, std::vector<std::size_t>{7}) == 0.5);
  const std::vector<std::size_t> all = {5, 2, 9};
  CHECK(*average_precision(all, all) == 1.0);
  CHECK(!average_precision(all, std::vector<std::size_t>{}).has_value());
  CHECK(*average_precision(all, std::vector<std::size_t>{8}) == 0.0);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<std::size_t> ranked(n);
    for (std::size_t i = 0; i < n; ++i) ranked[i] = i;
    std::shuffle(ranked.begin(), ranked.end(), rng);
    std::set<std::size_t> rel;
    const std::size_t nr = 1 + rng() % n;
    while (rel.size() < nr) rel.insert(rng() % (n + 3));
    const std::vector<std::size_t> relv(rel.begin(), rel.end());
    CHECK(std::abs(*average_precision(ranked, relv) - brute_ap(ranked, rel)) <= 1e-12);
  }
}

TEST_CASE("ranking and evaluation") {
  std::vector<ImageVector> v = {{{1, 0}}, {{0.6, 0.8}}, {{0.6, 0.8}}, {{1, 0}}};
  CHECK(rank_by_similarity(v, 0) == std::vector<std::size_t>{3, 1, 2});
  CHECK(rank_by_similarity(v, 1) == std::vector<std::size_t>{2, 0, 3});

  const auto r = evaluate_vectors(v, {1, 2, 2, 1}, {0, 1});
  REQUIRE(r.map.has_value());
  CHECK(*r.map == 1.0);

  const auto single = evaluate_vectors({{{1, 0}}, {{0, 1}}}, {1, 2}, {0, 1});
  CHECK(!single.map.has_value());
  CHECK(!single.per_query[0].ap.has_value());

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<ImageVector> vecs(30);
  std::vector<int> groups(30);
  std::vector<std::size_t> queries;
  for (int i = 0; i < 30; ++i) {
    for (int d = 0; d < 6; ++d) vecs[i].values.push_back(g(rng));
    groups[i] = i / 3;
    if (i % 3 == 0) queries.push_back(i);
  }
  double expect = 0.0;
  for (std::size_t q : queries) {
    std::vector<std::pair<double, std::size_t>> sims;
    for (std::size_t i = 0; i < 30; ++i) {
      if (i == q) continue;
      double s = 0.0;
      for (int d = 0; d < 6; ++d) s += vecs[q].values[d] * vecs[i].values[d];
      sims.push_back({-s, i});
    }
    std::sort(sims.begin(), sims.end());
    std::vector<std::size_t> ranked;
    for (auto& [s, i] : sims) ranked.push_back(i);
    std::set<std::size_t> rel;
    for (std::size_t i = 0; i < 30; ++i)
      if (i != q && groups[i] == groups[q]) rel.insert(i);
    expect += brute_ap(ranked, rel) / 10.0;
  }
  CHECK(std::abs(*evaluate_vectors(vecs, groups, queries).map - expect) <= 1e-12);
}

TEST_CASE("sweep spec and table") {
  const auto f = ConfigFile::parse("[dense]\nn_scales = 2\n[sweep]\nparameter = dense.delta_xy\nvalues = 4, 8,12\n");
  const auto s = parse_sweep(f);
  CHECK(s.parameter == "dense.delta_xy");
  CHECK(s.values == std::vector<std::string>{"4", "8", "12"});
  CHECK_THROWS_AS(parse_sweep(ConfigFile::parse("[sweep]\nparameter = dense.delta\nvalues = 4\n")), ConfigError);
  CHECK_THROWS_AS(parse_sweep(ConfigFile::parse("[sweep]\nparameter = dense.delta_xy\n")), ConfigError);
  CHECK_THROWS_AS(parse_sweep(ConfigFile::parse("[sweep]\nparameter = dense.delta_xy\nvalues = 4, x\n")), ConfigError);
  CHECK_THROWS_AS(parse_sweep(ConfigFile::parse("[dense]\nn_scales = 2\n")), ConfigError);

  const std::vector<SweepRow> rows = {{"4", 1200.5, 0.75}, {"8", 300.0, std::nullopt}};
  CHECK(sweep_tsv(s, rows) == "dense.delta_xy\tN\tmAP\n4\t1200.500\t0.750000\n8\t300.000\tundefined\n");
}

TEST_CASE("keypoint overlay") {
  RgbImage base{40, 30, std::vector<std::uint8_t>(40 * 30 * 3, 90)};
  const auto none = visualize_keypoints(base, {}, false);
  CHECK(none.image.rgb == base.rgb);
  CHECK(none.markers == 0);

  Keypoint center{20, 15, 3, 0, 0, DetectorId::Hessian, Polarity::Max, 0};
  const auto one = visualize_keypoints(base, {center}, false);
  CHECK(one.markers == 1);
  CHECK(one.image.rgb != base.rgb);
  // Circle of radius 3 around the center: the center stays untouched, the rim is drawn.
  auto px = [&](int x, int y) { return one.image.rgb[(y * 40 + x) * 3]; };
  CHECK(px(20, 15) == 90);
  CHECK(px(23, 15) != 90);
  CHECK(px(17, 15) != 90);

  Keypoint coarse = center;
  coarse.scale_index = 2;
  coarse.detector = DetectorId::Dense;
  coarse.sigma = 1.0;
  CHECK(visualize_keypoints(base, {center, coarse, coarse}, true).markers == 1);
  CHECK(visualize_keypoints(base, {center, coarse, coarse}, false).markers == 3);

  const auto plot = plot_line({100, 200, 300}, {0.5, 0.6, NAN});
  CHECK(plot.width == 640);
  CHECK(std::count(plot.rgb.begin(), plot.rgb.end(), 255) < static_cast<long>(plot.rgb.size()));
}
