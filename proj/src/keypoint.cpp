#include "densefeat/keypoint.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>
#include <utility>

#include "densefeat/raster_io.hpp"

namespace densefeat {

namespace {

constexpr std::array<std::pair<DetectorId, std::string_view>, 15> kDetectorNames{{
    {DetectorId::Dense, "dense"},
    {DetectorId::DenseIp, "dense_ip"},
    {DetectorId::DenseL2Norm, "dense_l2norm"},
    {DetectorId::Harris, "harris"},
    {DetectorId::Frobenius, "frobenius"},
    {DetectorId::RelaxedHarris, "relaxed_harris"},
    {DetectorId::RelaxedFrobenius, "relaxed_frobenius"},
    {DetectorId::Hessian, "hessian"},
    {DetectorId::Dog, "dog"},
    {DetectorId::Zernike, "zernike"},
    {DetectorId::Mser, "mser"},
    {DetectorId::MserEdge, "mser_edge"},
    {DetectorId::Ssr, "ssr"},
    {DetectorId::SsrEdge, "ssr_edge"},
    {DetectorId::FastEdge, "fast_edge"},
}};

constexpr std::string_view kHeader = "densefeat-kp 1";

}  // namespace

std::string_view detector_name(DetectorId id) {
  for (const auto& [d, name] : kDetectorNames)
    if (d == id) return name;
  return "unknown";
}

std::optional<DetectorId> parse_detector(std::string_view name) {
  for (const auto& [d, n] : kDetectorNames)
    if (n == name) return d;
  return std::nullopt;
}

const std::vector<DetectorId>& all_detectors() {
  static const std::vector<DetectorId> ids = [] {
    std::vector<DetectorId> v;
    for (const auto& entry : kDetectorNames) v.push_back(entry.first);
    return v;
  }();
  return ids;
}

std::string_view polarity_name(Polarity p) {
  switch (p) {
    case Polarity::Max: return "max";
    case Polarity::Min: return "min";
    case Polarity::None: return "none";
  }
  return "none";
}

std::optional<Polarity> parse_polarity(std::string_view name) {
  if (name == "max") return Polarity::Max;
  if (name == "min") return Polarity::Min;
  if (name == "none") return Polarity::None;
  return std::nullopt;
}

bool keypoint_scan_less(const Keypoint& a, const Keypoint& b) {
  return std::tie(a.scale_index, a.y, a.x) < std::tie(b.scale_index, b.y, b.x);
}

void write_keypoints(std::ostream& out, const std::vector<Keypoint>& kps) {
  out << kHeader << '\n' << kps.size() << '\n';
  char buf[256];
  for (const auto& k : kps) {
    std::snprintf(buf, sizeof buf, "%.6f %.6f %.6f %.6f %d %s %s\n", k.x, k.y, k.sigma,
                  k.response, k.scale_index, std::string(detector_name(k.detector)).c_str(),
                  std::string(polarity_name(k.polarity)).c_str());
    out << buf;
  }
}

void write_keypoints(const std::filesystem::path& path, const std::vector<Keypoint>& kps) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_keypoints(out, kps);
}

std::vector<Keypoint> read_keypoints(std::istream& in) {
  std::string line;
  std::uint64_t lineno = 1;
  if (!std::getline(in, line) || line != kHeader) {
    throw ParseError("missing keypoint header", lineno);
  }
  ++lineno;
  std::size_t count = 0;
  if (!std::getline(in, line)) throw ParseError("missing keypoint count", lineno);
  {
    std::istringstream ls(line);
    if (!(ls >> count)) throw ParseError("bad keypoint count", lineno);
  }
  std::vector<Keypoint> kps;
  kps.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ++lineno;
    if (!std::getline(in, line)) throw ParseError("fewer keypoints than declared", lineno);
    std::istringstream ls(line);
    Keypoint k;
    std::string det, pol;
    if (!(ls >> k.x >> k.y >> k.sigma >> k.response >> k.scale_index >> det >> pol)) {
      throw ParseError("malformed keypoint line", lineno);
    }
    const auto d = parse_detector(det);
    const auto p = parse_polarity(pol);
    if (!d || !p) throw ParseError("unknown detector or polarity", lineno);
    if (!(k.sigma > 0.0) || !std::isfinite(k.response)) {
      throw ParseError("invalid keypoint values", lineno);
    }
    k.detector = *d;
    k.polarity = *p;
    kps.push_back(k);
  }
  return kps;
}

std::vector<Keypoint> read_keypoints(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_keypoints(in);
}

}  // namespace densefeat
