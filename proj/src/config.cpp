#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "densefeat/config.hpp"

namespace densefeat {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& name, const std::string& value) {
  throw ConfigError("invalid value for " + name + ": '" + value + "'");
}

template <typename T>
T parse_number(const std::string& name, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) bad_value(name, value);
  return out;
}

bool parse_bool(const std::string& name, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(name, value);
}

using Setter = std::function<void(PipelineConfig&, const std::string& value, const ConfigFile&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto i = [&](const std::string& k, auto field) {
      t[k] = [field, k](PipelineConfig& c, const std::string& v, const ConfigFile&) {
        field(c) = parse_number<int>(k, v);
      };
    };
    auto d = [&](const std::string& k, auto field) {
      t[k] = [field, k](PipelineConfig& c, const std::string& v, const ConfigFile&) {
        field(c) = parse_number<double>(k, v);
      };
    };
    auto b = [&](const std::string& k, auto field) {
      t[k] = [field, k](PipelineConfig& c, const std::string& v, const ConfigFile&) {
        field(c) = parse_bool(k, v);
      };
    };
    auto path = [&](const std::string& k, auto field) {
      t[k] = [field](PipelineConfig& c, const std::string& v, const ConfigFile& f) {
        std::filesystem::path p(v);
        field(c) = p.is_absolute() || f.base_dir.empty() ? p : f.base_dir / p;
      };
    };
#define F(expr) [](PipelineConfig& c) -> auto& { return c.expr; }
    t["detector.name"] = [](PipelineConfig& c, const std::string& v, const ConfigFile&) {
      const auto id = parse_detector(v);
      if (!id) bad_value("detector.name", v);
      c.detector = *id;
    };
    d("image.max_pixels", F(max_pixels));
    i("dense.delta_xy", F(dense.delta_xy));
    i("dense.n_scales", F(dense.n_scales));
    i("dense_ip.cell", F(dense_ip.cell));
    i("dense_ip.search_scales", F(dense_ip.search_scales));
    t["dense_ip.response"] = [](PipelineConfig& c, const std::string& v, const ConfigFile&) {
      if (v == "harris") c.dense_ip.response_kind = DenseResponse::Harris;
      else if (v == "frobenius") c.dense_ip.response_kind = DenseResponse::Frobenius;
      else bad_value("dense_ip.response", v);
    };
    d("l2norm.tau", F(l2norm.tau));
    i("l2norm.n_scales", F(l2norm.n_scales));
    i("l2norm.stride", F(l2norm.stride));
    i("l2norm.patch_side", F(l2norm.patch_side));
    d("harris.sigma_d", F(harris.sigma_d));
    d("harris.sigma_i", F(harris.sigma_i));
    d("harris.alpha", F(harris.alpha));
    d("harris.tau", F(harris.tau));
    d("hessian.sigma_d", F(hessian.sigma_d));
    d("hessian.tau", F(hessian.tau));
    i("dog.scales_per_octave", F(dog.scales_per_octave));
    i("dog.n_octaves", F(dog.n_octaves));
    d("dog.tau", F(dog.tau));
    d("dog.sigma0", F(dog.sigma0));
    i("zernike.max_order", F(zernike.max_order));
    i("zernike.filter_size", F(zernike.filter_size));
    i("zernike.capacity", F(zernike.capacity));
    i("zernike.n_scales", F(zernike.n_scales));
    i("mser.delta", F(mser.delta));
    i("mser.min_area", F(mser.min_area));
    t["mser.max_area"] = [](PipelineConfig& c, const std::string& v, const ConfigFile&) {
      c.mser.max_area = parse_number<int>("mser.max_area", v);
    };
    d("mser.max_variation", F(mser.max_variation));
    d("ssr.k", F(ssr.k));
    i("ssr.min_size", F(ssr.min_size));
    d("edge.tau", F(edge.tau));
    i("edge.n_scales", F(edge.n_scales));
    d("edge.sigma_d", F(edge.sigma_d));
    path("edge.map_dir", F(edge.map_dir));
    i("descriptor.patch_side", F(describe.patch_side));
    d("descriptor.l2_threshold", F(describe.l2_threshold));
    b("descriptor.pca", F(describe.pca));
    t["encoding.k"] = [](PipelineConfig& c, const std::string& v, const ConfigFile&) {
      c.encode.k = parse_number<std::uint32_t>("encoding.k", v);
    };
    t["encoding.seed"] = [](PipelineConfig& c, const std::string& v, const ConfigFile&) {
      c.encode.seed = parse_number<std::uint64_t>("encoding.seed", v);
    };
    i("encoding.max_iters", F(encode.max_iters));
    d("encoding.beta", F(encode.beta));
    t["encoding.max_train"] = [](PipelineConfig& c, const std::string& v, const ConfigFile&) {
      c.encode.max_train = parse_number<std::size_t>("encoding.max_train", v);
    };
    path("encoding.train_manifest", F(encode.train_manifest));
#undef F
    return t;
  }();
  return table;
}

void check(const PipelineConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(c.max_pixels >= 0.0, "image.max_pixels must be >= 0");
  require(c.dense.delta_xy >= 1 && c.dense.n_scales >= 1, "dense: delta_xy and n_scales must be >= 1");
  require(c.dense_ip.cell >= 1 && c.dense_ip.search_scales >= 1, "dense_ip: invalid parameters");
  require(c.l2norm.stride >= 1 && c.l2norm.n_scales >= 1 && c.l2norm.patch_side >= 4,
          "l2norm: invalid parameters");
  require(c.harris.sigma_i > c.harris.sigma_d && c.harris.sigma_d > 0.0 && c.harris.tau >= 0.0,
          "harris: need sigma_i > sigma_d > 0 and tau >= 0");
  require(c.hessian.sigma_d > 0.0 && c.hessian.tau >= 0.0, "hessian: invalid parameters");
  require(c.dog.scales_per_octave >= 1 && c.dog.n_octaves >= 1 && c.dog.sigma0 > 0.0 && c.dog.tau >= 0.0,
          "dog: invalid parameters");
  require(c.zernike.max_order >= 1 && c.zernike.max_order <= 6, "zernike.max_order must be in 1..6");
  require(c.zernike.filter_size >= 5 && c.zernike.filter_size % 2 == 1, "zernike.filter_size must be odd and >= 5");
  require(c.zernike.capacity >= 0 && c.zernike.n_scales >= 1, "zernike: invalid capacity or n_scales");
  require(c.mser.delta >= 1 && c.mser.min_area >= 1 && c.mser.max_variation >= 0.0, "mser: invalid parameters");
  require(c.ssr.k > 0.0 && c.ssr.min_size >= 0, "ssr: invalid parameters");
  require(c.edge.n_scales >= 1 && c.edge.sigma_d > 0.0, "edge: invalid parameters");
  require(c.describe.patch_side >= 5, "descriptor.patch_side must be >= 5");
  require(c.describe.l2_threshold >= 0.0, "descriptor.l2_threshold must be >= 0");
  require(c.encode.k >= 1, "encoding.k must be >= 1");
  require(c.encode.max_iters >= 0, "encoding.max_iters must be >= 0");
  require(c.encode.beta > 0.0 && c.encode.beta <= 1.0, "encoding.beta must be in (0,1]");
  require(c.encode.max_train >= c.encode.k, "encoding.max_train must be >= encoding.k");
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text, const std::filesystem::path& base_dir) {
  ConfigFile f;
  f.base_dir = base_dir;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + "empty section name");
      f.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    if (section.empty()) throw ConfigError(where + "key outside of a section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "empty key");
    if (!f.sections[section].emplace(key, value).second) {
      throw ConfigError(where + "duplicate key " + section + "." + key);
    }
  }
  return f;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.parent_path());
}

std::optional<std::string> ConfigFile::get(const std::string& section, const std::string& key) const {
  const auto s = sections.find(section);
  if (s == sections.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

void ConfigFile::set(const std::string& dotted, const std::string& value) {
  const auto dot = dotted.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted.size()) {
    throw ConfigError("parameter name must look like section.key: " + dotted);
  }
  sections[dotted.substr(0, dot)][dotted.substr(dot + 1)] = value;
}

PipelineConfig resolve_config(const ConfigFile& file) {
  PipelineConfig c;
  const auto& table = setters();
  for (const auto& [section, entries] : file.sections) {
    if (section == "sweep") continue;
    for (const auto& [key, value] : entries) {
      const std::string name = section + "." + key;
      const auto it = table.find(name);
      if (it == table.end()) throw ConfigError("unknown config key " + name);
      try {
        it->second(c, value, file);
      } catch (const ConfigError&) {
        bad_value(name, value);
      }
    }
  }
  check(c);
  return c;
}

}  // namespace densefeat
