#include "salpcc/pipeline.hpp"

#include <chrono>
#include <stdexcept>
#include <utility>

#include "salpcc/errors.hpp"
#include "salpcc/quantization.hpp"
#include "salpcc/voxelize.hpp"

namespace salpcc {
namespace {

template <typename Fn>
auto run_stage(std::vector<StageTiming>& timings, const char* name, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  auto record = [&] {
    timings.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record();
    } else {
      auto result = fn();
      record();
      return result;
    }
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(name) + ": " + e.what());
  } catch (const Error& e) {
    throw DataError(std::string(name) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(name) + ": " + e.what());
  } catch (const std::out_of_range& e) {
    throw DataError(std::string(name) + ": " + e.what());
  }
}

}  // namespace

SaliencyParams saliency_params(const CodecConfig& cfg) {
  SaliencyParams p;
  p.k_g = cfg.k_g;
  p.s0_factor = cfg.s0_factor;
  p.focus_power = cfg.focus_power;
  p.weights = cfg.weights;
  p.strict_formula = cfg.strict_formula;
  return p;
}

SolverOptions solver_options(const CodecConfig& cfg) {
  SolverOptions o;
  o.tolerance = cfg.solver_tolerance;
  o.max_iterations = cfg.solver_max_iterations;
  o.anchor_weight = cfg.anchor_weight;
  o.warm_start = cfg.warm_start;
  o.backend = cfg.solver_backend;
  return o;
}

PointCloud prepare_cloud(const PointCloud& input, int voxel_depth) {
  validate(input);
  const PointCloud grid = is_voxelized(input, voxel_depth) ? input : voxelize(input, voxel_depth);
  return morton_sorted(grid);
}

Analysis analyze(const PointCloud& input, const CodecConfig& cfg) {
  cfg.validate();
  Analysis a;
  auto& t = a.timings;
  a.cloud = run_stage(t, "voxelize", [&] {
    PointCloud pc = prepare_cloud(input, cfg.voxel_depth);
    if (pc.size() > 0xFFFFFFFFu) throw DataError("too many points for the stream format");
    return pc;
  });
  const std::size_t n = a.cloud.size();

  run_stage(t, "laplacian", [&] {
    if (n >= 2) {
      a.graph = build_knn_graph(a.cloud, std::min(cfg.k_n, n - 1));
      a.normals = estimate_normals(a.cloud, a.graph);
      a.deltas = delta_coordinates(a.cloud, a.graph);
    } else {
      a.normals.normals.assign(n, Vec3::UnitZ());
      a.deltas.deltas.assign(n, Vec3::Zero());
    }
  });

  run_stage(t, "visibility", [&] {
    a.camera = cfg.camera ? *cfg.camera : default_camera(a.cloud);
    a.camera.validate();
    a.projection = project(a.cloud, a.camera);
    a.visibility = classify_visible(visibility_operator(a.projection, cfg.k_a));
  });

  a.saliency = run_stage(t, "saliency", [&] {
    return compute_saliency(a.cloud.vertices, a.normals, a.projection, a.visibility, a.camera, saliency_params(cfg));
  });

  a.anchors = run_stage(t, "anchors", [&] {
    const std::size_t k_c = cfg.k_c > 0 ? std::min(cfg.k_c, n) : default_anchor_count(n, cfg.anchor_fraction);
    return select_anchors(a.cloud, k_c);
  });
  return a;
}

std::vector<std::uint8_t> scale_codes_for(const Analysis& analysis, QuantizationMode mode) {
  if (mode == QuantizationMode::kUniform) return std::vector<std::uint8_t>(analysis.saliency.size(), 255);
  return quantize_scales(analysis.saliency.s);
}

StreamContents stream_contents(const Analysis& analysis, double s_thresh, QuantizationMode mode) {
  StreamContents c;
  c.graph = analysis.graph;
  c.visible = analysis.visibility.visible;
  c.anchors = analysis.anchors;
  c.deltas = quantize_deltas(analysis.deltas.deltas, c.visible, scale_codes_for(analysis, mode),
                             static_cast<float>(s_thresh));
  return c;
}

EncodeResult encode(const Analysis& analysis, double s_thresh, QuantizationMode mode) {
  EncodeResult r;
  r.contents = run_stage(r.timings, "quantize", [&] { return stream_contents(analysis, s_thresh, mode); });
  r.stream = run_stage(r.timings, "entropy", [&] { return write_stream(r.contents); });
  return r;
}

EncodeResult encode(const Analysis& analysis, const CodecConfig& cfg) {
  return encode(analysis, cfg.s_thresh, cfg.quantization);
}

ReconstructionProblem reconstruction_problem(const StreamContents& contents, const SolverOptions& options) {
  ReconstructionProblem p;
  p.graph = contents.graph;
  p.deltas = dequantize(contents.deltas, contents.visible);
  p.anchors = contents.anchors;
  p.options = options;
  return p;
}

DecodeResult decode(std::span<const std::uint8_t> bytes, const SolverOptions& options) {
  DecodeResult r;
  r.contents = run_stage(r.timings, "parse", [&] { return read_stream(bytes); });
  auto problem = run_stage(r.timings, "dequantize", [&] { return reconstruction_problem(r.contents, options); });
  auto rec = run_stage(r.timings, "solve", [&] { return reconstruct(problem); });
  r.cloud.vertices = std::move(rec.vertices);
  r.report = std::move(rec.report);
  return r;
}

}  // namespace salpcc
