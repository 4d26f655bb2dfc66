#pragma once

#include <span>
#include <string>
#include <vector>

#include "salpcc/anchors.hpp"
#include "salpcc/camera.hpp"
#include "salpcc/config.hpp"
#include "salpcc/knn_graph.hpp"
#include "salpcc/laplacian.hpp"
#include "salpcc/normals.hpp"
#include "salpcc/reconstruction.hpp"
#include "salpcc/saliency.hpp"
#include "salpcc/stream.hpp"
#include "salpcc/visibility.hpp"

namespace salpcc {

inline constexpr const char* kCodecVersion = "0.1.0";

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

/// Everything the encoder derives from a cloud before quantization. It does
/// not depend on s_thresh, so a rate sweep analyzes once.
struct Analysis {
  PointCloud cloud;  // on the voxel grid
  CameraPose camera;
  NeighborGraph graph;
  NormalField normals;
  DeltaCoords deltas;
  ScreenProjection projection;
  VisibilityResult visibility;
  SaliencyBundle saliency;
  AnchorSet anchors;
  std::vector<StageTiming> timings;
};

/// Puts a cloud on the voxel grid (unless it already lies on it) and sorts
/// it in Morton order, which keeps neighbor indices close together.
PointCloud prepare_cloud(const PointCloud& input, int voxel_depth);

/// Prepares the cloud and runs the analysis stages. Errors are rethrown
/// with the failing stage prefixed.
Analysis analyze(const PointCloud& input, const CodecConfig& cfg);

SaliencyParams saliency_params(const CodecConfig& cfg);
SolverOptions solver_options(const CodecConfig& cfg);

/// Per-visible-point scale codes for the selected quantization mode. The
/// uniform baseline gives every visible point the top code.
std::vector<std::uint8_t> scale_codes_for(const Analysis& analysis, QuantizationMode mode);

StreamContents stream_contents(const Analysis& analysis, double s_thresh, QuantizationMode mode);

struct EncodeResult {
  CodedStream stream;
  StreamContents contents;
  std::vector<StageTiming> timings;
};
EncodeResult encode(const Analysis& analysis, double s_thresh, QuantizationMode mode);
EncodeResult encode(const Analysis& analysis, const CodecConfig& cfg);

ReconstructionProblem reconstruction_problem(const StreamContents& contents, const SolverOptions& options);

struct DecodeResult {
  PointCloud cloud;
  StreamContents contents;
  SolveReport report;
  std::vector<StageTiming> timings;
};
DecodeResult decode(std::span<const std::uint8_t> bytes, const SolverOptions& options);

}  // namespace salpcc
