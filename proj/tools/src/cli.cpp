#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <salpcc/errors.hpp>
#include <salpcc/parallel.hpp>
#include <salpcc/ply.hpp>

#include "salpcc_cli/commands.hpp"

namespace salpcc::cli {
namespace {

namespace fs = std::filesystem;

// Options shared by every command that runs the encoder front end.
struct CodecFlags {
  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<double> s_thresh;
  std::string camera_file;
  bool uniform = false;
  bool strict_formula = false;
};

void add_codec_flags(CLI::App* cmd, CodecFlags& f) {
  cmd->add_option("--config", f.config_file, "key=value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--set", f.overrides, "override one configuration key (key=value), repeatable");
  cmd->add_option("--s-thresh", f.s_thresh, "quantization scale s_thresh");
  cmd->add_option("--camera", f.camera_file, "camera file (camera.* keys, voxel-grid coordinates)")
      ->check(CLI::ExistingFile);
  cmd->add_flag("--uniform", f.uniform, "uniform quantization baseline instead of saliency-aware");
  cmd->add_flag("--strict-formula", f.strict_formula, "extended saliency with the geometric map in the fourth term instead of focus");
}

CodecConfig resolve_config(const CodecFlags& f) {
  CodecConfig cfg;
  if (!f.config_file.empty()) cfg = load_config(f.config_file);
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.s_thresh) cfg.s_thresh = *f.s_thresh;
  if (!f.camera_file.empty()) {
    std::ifstream in(f.camera_file);
    std::stringstream ss;
    ss << in.rdbuf();
    cfg.camera = parse_camera(ss.str());
  }
  if (f.uniform) cfg.quantization = QuantizationMode::kUniform;
  if (f.strict_formula) cfg.strict_formula = true;
  cfg.validate();
  return cfg;
}

nlohmann::json report_base(const CodecConfig& cfg) {
  return {{"version", kCodecVersion}, {"threads", thread_count()}, {"config", config_json(cfg)}};
}

void emit(const nlohmann::json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path);
  f << j.dump(2) << "\n";
}

// Non-visible points stay dark gray.
PointCloud colored(const PointCloud& cloud, const std::vector<std::uint32_t>& visible_idx,
                   const std::vector<double>& values) {
  PointCloud pc;
  pc.vertices = cloud.vertices;
  pc.colors.assign(cloud.size(), Rgb{64, 64, 64});
  for (std::size_t m = 0; m < visible_idx.size(); ++m) pc.colors[visible_idx[m]] = heat_color(values[m]);
  return pc;
}

int cmd_encode(const std::string& input, const std::string& output, const std::string& report,
               const CodecFlags& flags, std::ostream& out) {
  const CodecConfig cfg = resolve_config(flags);
  const PointCloud pc = load_ply(input);
  const Analysis analysis = analyze(pc, cfg);
  const EncodeResult enc = encode(analysis, cfg);
  write_bytes(output, enc.stream.bytes);

  auto j = report_base(cfg);
  j["command"] = "encode";
  j["input"] = input;
  j["output"] = output;
  j["input_points"] = pc.size();
  j["n"] = analysis.cloud.size();
  j["n_visible"] = analysis.visibility.visible_count;
  j["bytes"] = enc.stream.bytes.size();
  j["bpp"] = enc.stream.bpp();
  j["bpp_note"] = "bpp counts every stream section; payload_bpp counts the delta section only";
  j["payload_bpp"] = measure_bpp(enc.stream.sections.deltas, analysis.cloud.size());
  const auto& s = enc.stream.sections;
  j["sections"] = {{"header", s.header},       {"anchors", s.anchors},       {"visibility", s.visibility},
                   {"scales", s.scales},       {"adjacency", s.adjacency},   {"deltas", s.deltas}};
  auto timings = analysis.timings;
  timings.insert(timings.end(), enc.timings.begin(), enc.timings.end());
  j["timings"] = timings_json(timings);
  emit(j, report, out);
  return kExitOk;
}

int cmd_decode(const std::string& input, const std::string& output, const std::string& report,
               const CodecFlags& flags, bool ascii, std::ostream& out, std::ostream& err) {
  const CodecConfig cfg = resolve_config(flags);
  const auto bytes = read_bytes(input);
  const DecodeResult dec = decode(bytes, solver_options(cfg));
  save_ply(dec.cloud, output, ascii ? PlyMode::kAscii : PlyMode::kBinary);

  std::ostringstream lines;
  for (int d = 0; d < 3; ++d) {
    const auto& c = dec.report.columns[d];
    lines << nlohmann::json{{"type", "column"},
                            {"column", std::string(1, "xyz"[d])},
                            {"relative_residual", c.relative_residual},
                            {"iterations", c.iterations},
                            {"converged", c.converged}}
                 .dump()
          << "\n";
  }
  auto summary = report_base(cfg);
  summary["type"] = "summary";
  summary["command"] = "decode";
  summary["n"] = dec.cloud.size();
  summary["wall_seconds"] = dec.report.wall_seconds;
  summary["max_relative_residual"] = dec.report.max_residual();
  summary["converged"] = dec.report.converged();
  summary["direct_start"] = dec.report.direct;
  summary["unanchored_components"] = dec.report.unanchored_components;
  summary["warnings"] = dec.report.warnings;
  summary["timings"] = timings_json(dec.timings);
  lines << summary.dump() << "\n";
  for (const auto& w : dec.report.warnings) err << "warning: " << w << "\n";

  if (report.empty()) {
    out << lines.str();
  } else {
    std::ofstream f(report);
    if (!f) throw DataError("cannot write " + report);
    f << lines.str();
  }
  return kExitOk;
}

int cmd_evaluate(const std::string& ref_path, const std::string& deg_path, const std::string& stream_path,
                 const std::string& saliency_path, bool all_points, const std::string& bandwidth,
                 const std::string& heatmap, const std::string& report, const CodecFlags& flags, std::ostream& out) {
  const CodecConfig cfg = resolve_config(flags);
  const PointCloud reference = prepare_cloud(load_ply(ref_path), cfg.voxel_depth);
  const PointCloud degraded = load_ply(deg_path);

  EvaluationOptions opt;
  opt.bandwidth = bandwidth == "reference" ? BandwidthSource::kReference : BandwidthSource::kDegraded;
  opt.restrict_to_visible = !all_points;

  auto j = report_base(cfg);
  j["command"] = "evaluate";
  std::optional<StreamContents> contents;
  if (!stream_path.empty()) {
    const auto bytes = read_bytes(stream_path);
    contents = read_stream(bytes);
    j["bpp"] = measure_bpp(bytes.size(), contents->size());
    j["payload_bpp"] = measure_bpp(read_stream_header(bytes).sections.deltas, contents->size());
  } else {
    j["bpp"] = nullptr;
  }
  std::optional<LayerPartition> layers;
  if (!saliency_path.empty()) {
    std::ifstream in(saliency_path);
    if (!in) throw DataError("cannot open " + saliency_path);
    const auto rows = read_saliency_csv(in);
    std::vector<std::uint32_t> idx;
    std::vector<double> s;
    for (const auto& r : rows) {
      idx.push_back(r.index);
      s.push_back(r.s);
    }
    layers = partition_layers(reference.size(), idx, s);
  }
  const auto metrics = evaluate_clouds(reference, degraded, contents ? &contents->visible : nullptr,
                                       layers ? &*layers : nullptr, opt);
  j.update(metrics);
  if (!heatmap.empty()) save_ply(error_heatmap(reference.vertices, degraded.vertices).cloud, heatmap);
  emit(j, report, out);
  return kExitOk;
}

int cmd_sweep(const std::string& input, const std::vector<double>& thresholds, const std::string& output,
              const CodecFlags& flags, bool all_points, std::ostream& out, std::ostream& err) {
  if (thresholds.size() < 2) throw UsageError("sweep needs at least two thresholds");
  const CodecConfig cfg = resolve_config(flags);
  const Analysis analysis = analyze(load_ply(input), cfg);
  EvaluationOptions opt;
  opt.restrict_to_visible = !all_points;

  std::vector<RdRow> rows;
  std::vector<std::string> failures;
  for (double t : thresholds) {
    try {
      if (!(t > 0.0)) throw ConfigError("s_thresh must be positive");
      rows.push_back(sweep_point(analysis, t, cfg.quantization, solver_options(cfg), opt));
    } catch (const std::exception& e) {
      failures.push_back("s_thresh=" + std::to_string(t) + " failed: " + e.what());
      err << "warning: " << failures.back() << "\n";
    }
  }
  std::vector<std::string> comments{std::string("salpcc ") + kCodecVersion + " sweep of " + input,
                                    std::string("quality on ") + (all_points ? "all points" : "visible points"),
                                    "bpp counts every stream section; payload_bpp counts the delta section only"};
  std::istringstream cfg_text(cfg.to_text());
  for (std::string line; std::getline(cfg_text, line);) comments.push_back("config " + line);
  comments.insert(comments.end(), failures.begin(), failures.end());

  if (output.empty()) {
    write_rd_csv(out, rows, comments);
  } else {
    std::ofstream f(output);
    if (!f) throw DataError("cannot write " + output);
    write_rd_csv(f, rows, comments);
  }
  return rows.empty() ? kExitData : kExitOk;
}

int cmd_bdpsnr(const std::string& a_path, const std::string& b_path, const std::string& rate, std::ostream& out) {
  auto load = [&](const std::string& p) {
    std::ifstream in(p);
    if (!in) throw DataError("cannot open " + p);
    auto rows = read_rd_csv(in);
    std::vector<RDPoint> pts;
    for (const auto& r : rows) {
      RDPoint q = r.point;
      if (rate == "payload") q.bpp = r.payload_bpp;
      pts.push_back(q);
    }
    return pts;
  };
  const auto a = load(a_path);
  const auto b = load(b_path);
  nlohmann::json j{{"version", kCodecVersion},
                   {"command", "bdpsnr"},
                   {"curve_a", a_path},
                   {"curve_b", b_path},
                   {"rate", rate},
                   {"bd_psnr_d1", bd_psnr(a, b, PsnrMode::kD1)},
                   {"bd_psnr_d2", bd_psnr(a, b, PsnrMode::kD2)},
                   {"sign", "positive means curve A is above curve B"}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_saliency(const std::string& input, const std::string& outdir, const CodecFlags& flags, std::ostream& out) {
  const CodecConfig cfg = resolve_config(flags);
  const Analysis analysis = analyze(load_ply(input), cfg);
  fs::create_directories(outdir);
  const auto rows = saliency_rows(analysis);
  {
    std::ofstream f(fs::path(outdir) / "saliency.csv");
    if (!f) throw DataError("cannot write into " + outdir);
    write_saliency_csv(f, rows);
  }
  const auto idx = analysis.saliency.visible_indices;
  const auto& b = analysis.saliency;
  std::vector<double> a(idx.size());
  for (std::size_t m = 0; m < idx.size(); ++m) a[m] = analysis.visibility.a[idx[m]];
  const std::vector<std::pair<std::string, const std::vector<double>*>> maps{
      {"a", &a}, {"s1", &b.geometric.s1}, {"s2", &b.s2}, {"s3", &b.s3}, {"s4", &b.focus.normalized}, {"s", &b.s}};
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [name, values] : maps) {
    const auto path = fs::path(outdir) / ("saliency_" + name + ".ply");
    save_ply(colored(analysis.cloud, idx, *values), path);
    files.push_back(path.string());
  }
  auto j = report_base(cfg);
  j["command"] = "saliency";
  j["n"] = analysis.cloud.size();
  j["n_visible"] = analysis.visibility.visible_count;
  j["csv"] = (fs::path(outdir) / "saliency.csv").string();
  j["heatmaps"] = files;
  j["timings"] = timings_json(analysis.timings);
  out << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Saliency-aware point cloud geometry codec"};
  app.set_version_flag("--version", std::string("salpcc ") + kCodecVersion);
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = SALPCC_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  CodecFlags flags;
  std::string input, output, report, stream, saliency_csv, bandwidth = "degraded", heatmap, rate = "total";
  std::string second;
  bool ascii = false, all_points = false;
  std::vector<double> thresholds;

  auto* enc = app.add_subcommand("encode", "encode a PLY cloud into a .sapc stream");
  enc->add_option("input", input, "input PLY")->required();
  enc->add_option("-o,--output", output, "output .sapc")->required();
  enc->add_option("--report", report, "write the JSON report here instead of stdout");
  add_codec_flags(enc, flags);

  auto* dec = app.add_subcommand("decode", "decode a .sapc stream into a PLY cloud");
  dec->add_option("input", input, "input .sapc")->required();
  dec->add_option("-o,--output", output, "output PLY")->required();
  dec->add_option("--report", report, "write the JSON-lines solve report here instead of stdout");
  dec->add_flag("--ascii", ascii, "write ASCII PLY");
  add_codec_flags(dec, flags);

  auto* ev = app.add_subcommand("evaluate", "geometry quality of a decoded cloud");
  ev->add_option("reference", input, "reference PLY (prepared like the encoder input)")->required();
  ev->add_option("degraded", second, "decoded PLY")->required();
  ev->add_option("--stream", stream, "the .sapc stream (bpp and visibility mask)");
  ev->add_option("--saliency", saliency_csv, "saliency CSV for the layer table");
  ev->add_flag("--all-points", all_points, "evaluate on all points even when a visibility mask is available");
  ev->add_option("--bandwidth", bandwidth, "PSNR bandwidth source")->check(CLI::IsMember({"degraded", "reference"}));
  ev->add_option("--heatmap", heatmap, "write a per-point error heatmap PLY");
  ev->add_option("--report", report, "write the JSON report here instead of stdout");
  add_codec_flags(ev, flags);

  auto* sw = app.add_subcommand("sweep", "rate-distortion sweep over s_thresh");
  sw->add_option("input", input, "input PLY")->required();
  sw->add_option("--thresholds", thresholds, "s_thresh values")->required()->delimiter(',');
  sw->add_option("-o,--output", output, "output CSV (stdout if omitted)");
  sw->add_flag("--all-points", all_points, "evaluate on all points instead of the visible ones");
  add_codec_flags(sw, flags);

  auto* bd = app.add_subcommand("bdpsnr", "BD-PSNR between two sweep CSVs");
  bd->add_option("curve_a", input, "sweep CSV of curve A")->required();
  bd->add_option("curve_b", second, "sweep CSV of curve B")->required();
  bd->add_option("--rate", rate, "rate column")->check(CLI::IsMember({"total", "payload"}));

  auto* sal = app.add_subcommand("saliency", "export saliency maps as heatmap PLYs and a CSV");
  sal->add_option("input", input, "input PLY")->required();
  sal->add_option("-o,--output", output, "output directory")->required();
  add_codec_flags(sal, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    set_thread_count(static_cast<std::size_t>(threads));
    if (enc->parsed()) return cmd_encode(input, output, report, flags, out);
    if (dec->parsed()) return cmd_decode(input, output, report, flags, ascii, out, err);
    if (ev->parsed())
      return cmd_evaluate(input, second, stream, saliency_csv, all_points, bandwidth, heatmap, report, flags, out);
    if (sw->parsed()) return cmd_sweep(input, thresholds, output, flags, all_points, out, err);
    if (bd->parsed()) return cmd_bdpsnr(input, second, rate, out);
    if (sal->parsed()) return cmd_saliency(input, output, flags, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace salpcc::cli
