#pragma once

#include <array>
#include <string>
#include <vector>

#include "salpcc/anchors.hpp"
#include "salpcc/knn_graph.hpp"
#include "salpcc/quantization.hpp"

namespace salpcc {

/// delta_i = q_i / scale_i for visible points, 0 for the rest.
std::vector<Vec3> dequantize(const QuantizedDeltas& q, std::span<const std::uint8_t> visible);

enum class SolverBackend {
  kIterative,  // CGLS from the initial iterate
  kDirect,     // sparse Cholesky of the normal equations, then CGLS polish
  kAuto,       // direct up to kDirectSolveLimit points, iterative above
};
inline constexpr std::size_t kDirectSolveLimit = 250000;

struct SolverOptions {
  double tolerance = 1e-8;           // on ||A^T r|| / ||A^T b||
  std::size_t max_iterations = 5000;
  double anchor_weight = 1.0;
  bool warm_start = false;           // start from the anchor centroid instead of 0
  SolverBackend backend = SolverBackend::kAuto;
};

/// Anchored least squares  min || [L; w I_c] v - [delta; w v_c] ||  solved
/// independently for each coordinate column.
struct ReconstructionProblem {
  NeighborGraph graph;
  std::vector<Vec3> deltas;
  AnchorSet anchors;
  SolverOptions options;
};

/// Copy of `problem` with anchor rows (and their targets) scaled by weight.
ReconstructionProblem anchor_weighting(ReconstructionProblem problem, double weight);

struct ColumnSolve {
  double relative_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct SolveReport {
  std::array<ColumnSolve, 3> columns{};
  double wall_seconds = 0.0;
  std::size_t unanchored_components = 0;
  bool direct = false;  // a factorization supplied the initial iterate
  std::vector<std::string> warnings;

  double max_residual() const;
  bool converged() const;
};

struct Reconstruction {
  std::vector<Vec3> vertices;
  SolveReport report;
};

/// CGLS on the stacked rectangular system, optionally started from a direct
/// solution of the normal equations. Stops when the normal-equation
/// relative residual reaches the tolerance or after max_iterations; the last
/// iterate is returned either way and non-convergence is reported as a
/// warning. Components of the (undirected) graph without an anchor are also
/// reported; their solution is the minimum-norm one.
Reconstruction reconstruct(const ReconstructionProblem& problem);

}  // namespace salpcc
