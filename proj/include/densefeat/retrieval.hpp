#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "densefeat/config.hpp"
#include "densefeat/encoding.hpp"

namespace densefeat {

struct ManifestEntry {
  std::filesystem::path path;
  int group = 0;
};

/// "path<TAB>group" lines, '#' comments. The first entry of a group is its query.
struct Manifest {
  std::vector<ManifestEntry> entries;

  std::vector<std::size_t> queries() const;
};

/// Relative paths resolve against base_dir. Throws std::invalid_argument
/// naming the line on malformed input, duplicate paths or an empty list.
Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {});
Manifest load_manifest(const std::filesystem::path& path);

/// Mean of precision at the rank of every relevant hit, over |relevant|.
/// Relevant items missing from the ranking contribute 0. Nothing when the
/// relevant set is empty.
std::optional<double> average_precision(std::span<const std::size_t> ranked,
                                        std::span<const std::size_t> relevant);

/// Database indices other than the query by descending dot product; ties
/// go to the lower index.
std::vector<std::size_t> rank_by_similarity(const std::vector<ImageVector>& vectors, std::size_t query);

struct QueryResult {
  std::size_t query = 0;
  /// Empty when the query has no other group member.
  std::optional<double> ap;
};

struct EvalResult {
  /// Empty when every query was skipped.
  std::optional<double> map;
  std::vector<QueryResult> per_query;
  double mean_descriptors = 0.0;
  std::vector<std::string> warnings;
};

/// Scores precomputed image vectors.
EvalResult evaluate_vectors(const std::vector<ImageVector>& vectors, const std::vector<int>& groups,
                            const std::vector<std::size_t>& queries);

/// Trains on encoding.train_manifest, then detects, describes and encodes
/// every manifest image and scores the rankings.
EvalResult evaluate_retrieval(const Manifest& manifest, const PipelineConfig& cfg);

/// [sweep] section: "parameter = section.key", "values = v1, v2, ...".
struct SweepSpec {
  std::string parameter;
  std::vector<std::string> values;
};

SweepSpec parse_sweep(const ConfigFile& file);

struct SweepRow {
  std::string value;
  double mean_descriptors = 0.0;
  std::optional<double> map;
};

std::vector<SweepRow> run_sweep(const Manifest& manifest, const ConfigFile& base, const SweepSpec& spec);

/// Header "<parameter>\tN\tmAP", then one row per value.
std::string sweep_tsv(const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace densefeat
