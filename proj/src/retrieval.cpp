#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "densefeat/pipeline.hpp"
#include "densefeat/retrieval.hpp"

namespace densefeat {

std::vector<std::size_t> Manifest::queries() const {
  std::vector<std::size_t> out;
  std::set<int> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (seen.insert(entries[i].group).second) out.push_back(i);
  }
  return out;
}

Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  Manifest m;
  std::set<std::filesystem::path> paths;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos || raw[raw.find_first_not_of(" \t")] == '#') {
      continue;
    }
    const std::string where = "manifest line " + std::to_string(lineno) + ": ";
    const auto tab = raw.rfind('\t');
    if (tab == std::string::npos || tab == 0) throw std::invalid_argument(where + "expected path<TAB>group");
    const std::string group = raw.substr(tab + 1);
    std::size_t used = 0;
    int g = 0;
    try {
      g = std::stoi(group, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != group.size()) throw std::invalid_argument(where + "bad group id '" + group + "'");
    std::filesystem::path p(raw.substr(0, tab));
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    if (!paths.insert(p.lexically_normal()).second) {
      throw std::invalid_argument(where + "duplicate path " + p.string());
    }
    m.entries.push_back({p, g});
  }
  if (m.entries.empty()) throw std::invalid_argument("manifest lists no images");
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path());
}

std::optional<double> average_precision(std::span<const std::size_t> ranked,
                                        std::span<const std::size_t> relevant) {
  if (relevant.empty()) return std::nullopt;
  const std::set<std::size_t> rel(relevant.begin(), relevant.end());
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (rel.count(ranked[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(rel.size());
}

std::vector<std::size_t> rank_by_similarity(const std::vector<ImageVector>& vectors, std::size_t query) {
  std::vector<std::pair<double, std::size_t>> scored;
  const auto& q = vectors.at(query).values;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (i == query) continue;
    const auto& v = vectors[i].values;
    if (v.size() != q.size()) throw std::invalid_argument("image vectors differ in length");
    double s = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) s += q[j] * v[j];
    scored.emplace_back(s, i);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::size_t> out;
  out.reserve(scored.size());
  for (const auto& [s, i] : scored) out.push_back(i);
  return out;
}

EvalResult evaluate_vectors(const std::vector<ImageVector>& vectors, const std::vector<int>& groups,
                            const std::vector<std::size_t>& queries) {
  if (vectors.size() != groups.size()) throw std::invalid_argument("vectors and groups differ in count");
  EvalResult r;
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t q : queries) {
    std::vector<std::size_t> relevant;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (i != q && groups[i] == groups[q]) relevant.push_back(i);
    }
    const auto ranked = rank_by_similarity(vectors, q);
    QueryResult qr{q, average_precision(ranked, relevant)};
    if (qr.ap) {
      sum += *qr.ap;
      ++counted;
    }
    r.per_query.push_back(qr);
  }
  if (counted) r.map = sum / static_cast<double>(counted);
  return r;
}

EvalResult evaluate_retrieval(const Manifest& manifest, const PipelineConfig& cfg) {
  if (cfg.encode.train_manifest.empty()) {
    throw ConfigError("encoding.train_manifest must name the codebook training images");
  }
  const Manifest train = load_manifest(cfg.encode.train_manifest);
  std::vector<std::filesystem::path> train_paths;
  for (const auto& e : train.entries) train_paths.push_back(e.path);

  std::vector<std::string> warnings;
  {
    std::set<std::filesystem::path> seen;
    for (const auto& p : train_paths) seen.insert(std::filesystem::weakly_canonical(p));
    std::size_t overlap = 0;
    for (const auto& e : manifest.entries) overlap += seen.count(std::filesystem::weakly_canonical(e.path));
    if (overlap) {
      warnings.push_back(std::to_string(overlap) + " evaluation image(s) also used for codebook training");
    }
  }

  const TrainedModels models = train_models(train_paths, cfg);
  const PcaModel* pca = models.pca ? &*models.pca : nullptr;

  std::vector<ImageVector> vectors;
  std::vector<int> groups;
  double total = 0.0;
  for (const auto& e : manifest.entries) {
    GrayImage img;
    try {
      img = prepare_image(e.path, cfg);
    } catch (const std::runtime_error& ex) {
      throw std::invalid_argument(ex.what());
    }
    const auto descs = finish_descriptors(describe_raw(img, detect(img, cfg.detector, cfg, e.path), cfg), pca);
    total += static_cast<double>(descs.size());
    vectors.push_back(encode_image(to_points(descs), models.codebook, cfg.encode.beta));
    groups.push_back(e.group);
  }
  EvalResult r = evaluate_vectors(vectors, groups, manifest.queries());
  r.mean_descriptors = total / static_cast<double>(manifest.entries.size());
  r.warnings = std::move(warnings);
  return r;
}

SweepSpec parse_sweep(const ConfigFile& file) {
  SweepSpec s;
  const auto it = file.sections.find("sweep");
  if (it == file.sections.end()) throw ConfigError("sweep spec needs a [sweep] section");
  for (const auto& [key, value] : it->second) {
    if (key == "parameter") {
      s.parameter = value;
    } else if (key == "values") {
      std::istringstream in(value);
      std::string item;
      while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ConfigError("sweep.values has an empty item");
        s.values.push_back(item.substr(b, e - b + 1));
      }
    } else {
      throw ConfigError("unknown config key sweep." + key);
    }
  }
  if (s.parameter.empty()) throw ConfigError("sweep.parameter is required");
  if (s.values.empty()) throw ConfigError("sweep.values must list at least one value");
  // Validate every value before any expensive run.
  for (const auto& v : s.values) {
    ConfigFile probe = file;
    probe.set(s.parameter, v);
    resolve_config(probe);
  }
  return s;
}

std::vector<SweepRow> run_sweep(const Manifest& manifest, const ConfigFile& base, const SweepSpec& spec) {
  std::vector<SweepRow> rows;
  for (const auto& v : spec.values) {
    ConfigFile f = base;
    f.set(spec.parameter, v);
    const EvalResult r = evaluate_retrieval(manifest, resolve_config(f));
    rows.push_back({v, r.mean_descriptors, r.map});
  }
  return rows;
}

std::string sweep_tsv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  std::string out = spec.parameter + "\tN\tmAP\n";
  char buf[64];
  for (const auto& r : rows) {
    out += r.value;
    std::snprintf(buf, sizeof buf, "\t%.3f\t", r.mean_descriptors);
    out += buf;
    if (r.map) {
      std::snprintf(buf, sizeof buf, "%.6f\n", *r.map);
      out += buf;
    } else {
      out += "undefined\n";
    }
  }
  return out;
}

}  // namespace densefeat
