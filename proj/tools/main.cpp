// densefeat command line front end.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "densefeat/config.hpp"
#include "densefeat/descriptor.hpp"
#include "densefeat/encoding.hpp"
#include "densefeat/image_io.hpp"
#include "densefeat/pipeline.hpp"
#include "densefeat/raster_io.hpp"
#include "densefeat/retrieval.hpp"
#include "densefeat/visualize.hpp"
#include "densefeat/zernike.hpp"

namespace fs = std::filesystem;
using namespace densefeat;

namespace {

constexpr int kInputError = 2;
constexpr int kConfigError = 3;

PipelineConfig config_or_default(const std::string& path) {
  if (path.empty()) return resolve_config(ConfigFile{});
  return resolve_config(ConfigFile::load(path));
}

std::vector<fs::path> image_inputs(const fs::path& in) {
  if (!fs::is_directory(in)) {
    if (!fs::exists(in)) throw std::invalid_argument("no such input " + in.string());
    return {in};
  }
  static const std::set<std::string> exts = {".png", ".jpg", ".jpeg", ".pgm", ".ppm", ".pnm",
                                             ".bmp", ".tif", ".tiff"};
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(in)) {
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (e.is_regular_file() && exts.count(ext)) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw std::invalid_argument("no images in " + in.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string format_eval(const EvalResult& r) {
  std::string s;
  char buf[96];
  if (r.map) {
    std::snprintf(buf, sizeof buf, "mAP\t%.6f\n", *r.map);
  } else {
    std::snprintf(buf, sizeof buf, "mAP\tundefined\n");
  }
  s += buf;
  std::snprintf(buf, sizeof buf, "N\t%.3f\n", r.mean_descriptors);
  s += buf;
  for (const auto& q : r.per_query) {
    if (q.ap) {
      std::snprintf(buf, sizeof buf, "query\t%zu\t%.6f\n", q.query, *q.ap);
    } else {
      std::snprintf(buf, sizeof buf, "query\t%zu\tskipped\n", q.query);
    }
    s += buf;
  }
  for (const auto& w : r.warnings) s += "warning\t" + w + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dense and sparse local feature detection, description and retrieval evaluation"};
  app.require_subcommand(1);

  std::string detector, config, in, out;
  auto* detect_cmd = app.add_subcommand("detect", "Detect keypoints in an image or a directory of images");
  detect_cmd->add_option("detector", detector, "Detector name")->required();
  detect_cmd->add_option("--config", config, "Pipeline config");
  detect_cmd->add_option("--in", in, "Image file or directory")->required();
  detect_cmd->add_option("--out", out, "Output directory for <stem>.kp files")->required();

  std::string kp_path, img_path;
  bool raw = false;
  auto* describe_cmd = app.add_subcommand("describe", "Describe keypoints; also writes <out>.kp");
  describe_cmd->add_option("--kp", kp_path, "Keypoint file")->required();
  describe_cmd->add_option("--img", img_path, "Image the keypoints were detected on")->required();
  describe_cmd->add_option("--out", out, "DSC1 output")->required();
  describe_cmd->add_option("--config", config, "Pipeline config");
  describe_cmd->add_flag("--raw", raw, "Write raw SIFT instead of RootSIFT");

  std::vector<std::string> inputs;
  std::uint32_t k = 256;
  std::uint64_t seed = 0;
  int max_iters = 25;
  auto* train_cmd = app.add_subcommand("train-codebook", "k-means codebook from descriptor files");
  train_cmd->add_option("--in", inputs, "DSC1 files")->required();
  train_cmd->add_option("--k", k, "Codebook size")->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", seed, "Seed");
  train_cmd->add_option("--max-iters", max_iters, "Lloyd iteration cap")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--out", out, "CBK1 output")->required();

  std::string cbk_path;
  double beta = 0.5;
  auto* encode_cmd = app.add_subcommand("encode", "VLAD image vector from a descriptor file");
  encode_cmd->add_option("--cbk", cbk_path, "Codebook")->required();
  encode_cmd->add_option("--in", in, "DSC1 descriptors")->required();
  encode_cmd->add_option("--out", out, "DSC1 output holding one vector")->required();
  encode_cmd->add_option("--beta", beta, "Power-law exponent");

  std::string manifest_path;
  auto* eval_cmd = app.add_subcommand("eval", "Retrieval mAP over a manifest");
  eval_cmd->add_option("--manifest", manifest_path, "Manifest")->required();
  eval_cmd->add_option("--config", config, "Pipeline config")->required();
  eval_cmd->add_option("--out", out, "Also write the report here");

  std::string spec_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "mAP and descriptor count over a parameter sweep");
  sweep_cmd->add_option("--manifest", manifest_path, "Manifest")->required();
  sweep_cmd->add_option("--spec", spec_path, "Config with a [sweep] section")->required();
  sweep_cmd->add_option("--out", out, "Output directory for sweep.tsv and sweep.png")->required();

  bool first_scale = false;
  auto* viz_cmd = app.add_subcommand("viz", "Draw keypoints over the image");
  viz_cmd->add_option("--img", img_path, "Image")->required();
  viz_cmd->add_option("--kp", kp_path, "Keypoint file")->required();
  viz_cmd->add_option("--out", out, "PNG output")->required();
  viz_cmd->add_option("--config", config, "Pipeline config (for image preparation)");
  viz_cmd->add_flag("--first-scale", first_scale, "Only draw scale_index 0");

  int order = 2, size = 11;
  auto* bank_cmd = app.add_subcommand("zernike-bank", "Export the Zernike filter bank");
  bank_cmd->add_option("--order", order, "Maximum order")->required();
  bank_cmd->add_option("--size", size, "Filter side");
  bank_cmd->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*detect_cmd) {
      const auto id = parse_detector(detector);
      if (!id) throw std::invalid_argument("unknown detector " + detector);
      const PipelineConfig cfg = config_or_default(config);
      const auto images = image_inputs(in);
      fs::create_directories(out);
      for (const auto& path : images) {
        const GrayImage img = prepare_image(path, cfg);
        const auto kps = detect(img, *id, cfg, path);
        write_keypoints(fs::path(out) / (path.stem().string() + ".kp"), kps);
        std::cout << path.string() << "\t" << kps.size() << "\n";
      }
    } else if (*describe_cmd) {
      const PipelineConfig cfg = config_or_default(config);
      const GrayImage img = prepare_image(img_path, cfg);
      const auto kps = read_keypoints(fs::path(kp_path));
      auto descs = describe_raw(img, kps, cfg);
      if (!raw) descs = finish_descriptors(descs, nullptr);
      write_dsc(out, to_table(descs));
      std::vector<Keypoint> kept;
      for (const auto& d : descs) kept.push_back(d.source);
      write_keypoints(fs::path(out + ".kp"), kept);
      std::cout << descs.size() << " of " << kps.size() << " keypoints described\n";
    } else if (*train_cmd) {
      PointSet points;
      for (const auto& f : inputs) {
        const auto table = read_dsc(f);
        if (points.dim && points.dim != table.dim) throw std::invalid_argument(f + ": descriptor dimension differs");
        points.dim = table.dim;
        for (const auto& row : table.rows) points.values.insert(points.values.end(), row.begin(), row.end());
      }
      const Codebook cb = kmeans_train(points, k, seed, max_iters);
      write_codebook(out, cb);
      std::cout << "objective\t" << kmeans_objective(points, cb) << "\n";
    } else if (*encode_cmd) {
      if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("--beta must be in (0,1]");
      const Codebook cb = read_codebook(cbk_path);
      const auto table = read_dsc(in);
      if (!table.rows.empty() && table.dim != cb.dim) throw std::invalid_argument("descriptor and codebook dimensions differ");
      PointSet points = to_points(table);
      points.dim = cb.dim;
      const ImageVector v = encode_image(points, cb, beta);
      DescriptorTable t;
      t.dim = static_cast<std::uint32_t>(v.values.size());
      t.rows.push_back(v.values);
      write_dsc(out, t);
    } else if (*eval_cmd) {
      const PipelineConfig cfg = resolve_config(ConfigFile::load(config));
      const auto report = format_eval(evaluate_retrieval(load_manifest(manifest_path), cfg));
      std::cout << report;
      if (!out.empty()) write_text(out, report);
    } else if (*sweep_cmd) {
      const ConfigFile spec_file = ConfigFile::load(spec_path);
      const SweepSpec spec = parse_sweep(spec_file);
      const Manifest manifest = load_manifest(manifest_path);
      const auto rows = run_sweep(manifest, spec_file, spec);
      fs::create_directories(out);
      const auto tsv = sweep_tsv(spec, rows);
      write_text(fs::path(out) / "sweep.tsv", tsv);
      std::vector<double> xs, ys;
      for (const auto& r : rows) {
        xs.push_back(r.mean_descriptors);
        ys.push_back(r.map.value_or(NAN));
      }
      save_rgb(fs::path(out) / "sweep.png", plot_line(xs, ys));
      std::cout << tsv;
    } else if (*viz_cmd) {
      const PipelineConfig cfg = config_or_default(config);
      const GrayImage img = prepare_image(img_path, cfg);
      const auto overlay = visualize_keypoints(to_rgb(img), read_keypoints(fs::path(kp_path)), first_scale);
      save_rgb(out, overlay.image);
      std::cout << overlay.markers << " markers\n";
    } else if (*bank_cmd) {
      const FilterBank bank = build_filter_bank(order, size);
      export_filter_bank(bank, out);
      std::cout << bank.filters.size() << " filters\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return 0;
}
