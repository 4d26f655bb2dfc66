#include "salpcc/reconstruction.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "salpcc/laplacian.hpp"
#include "salpcc/parallel.hpp"

namespace salpcc {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Stacked operator A = [L; w I_c] acting on one coordinate column.
class AnchoredLaplacian {
 public:
  AnchoredLaplacian(const NeighborGraph& graph, const AnchorSet& anchors, double weight)
      : graph_(graph), reverse_(reverse_adjacency(graph)), anchors_(anchors), weight_(weight) {}

  std::size_t rows() const { return graph_.size() + anchors_.size(); }
  std::size_t cols() const { return graph_.size(); }

  void apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = cols();
    laplacian_apply(graph_, x, y.first(n));
    for (std::size_t a = 0; a < anchors_.size(); ++a) y[n + a] = weight_ * x[anchors_.indices[a]];
  }

  void apply_transpose(std::span<const double> y, std::span<double> x) const {
    const std::size_t n = cols();
    laplacian_transpose_apply(graph_, reverse_, y.first(n), x);
    for (std::size_t a = 0; a < anchors_.size(); ++a) x[anchors_.indices[a]] += weight_ * y[n + a];
  }

 private:
  const NeighborGraph& graph_;
  ReverseAdjacency reverse_;
  const AnchorSet& anchors_;
  double weight_;
};

ColumnSolve cgls(const AnchoredLaplacian& op, std::span<const double> b, std::span<double> x,
                 const SolverOptions& opt) {
  const std::size_t m = op.rows();
  const std::size_t n = op.cols();
  std::vector<double> r(m), q(m), s(n), p(n);

  op.apply(x, q);
  for (std::size_t i = 0; i < m; ++i) r[i] = b[i] - q[i];
  std::vector<double> atb(n);
  op.apply_transpose(b, atb);
  const double atb_norm = std::sqrt(dot(atb, atb));

  ColumnSolve result;
  op.apply_transpose(r, s);
  double gamma = dot(s, s);
  if (atb_norm == 0.0) {
    result.relative_residual = std::sqrt(gamma);
    result.converged = gamma == 0.0;
    if (result.converged) return result;
  } else {
    result.relative_residual = std::sqrt(gamma) / atb_norm;
    if (result.relative_residual <= opt.tolerance) {
      result.converged = true;
      return result;
    }
  }
  const double scale = atb_norm == 0.0 ? 1.0 : atb_norm;
  p = s;
  for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
    op.apply(p, q);
    const double qq = dot(q, q);
    if (!(qq > 0.0)) break;
    const double alpha = gamma / qq;
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (std::size_t i = 0; i < m; ++i) r[i] -= alpha * q[i];
    op.apply_transpose(r, s);
    const double gamma_next = dot(s, s);
    result.iterations = it;
    result.relative_residual = std::sqrt(gamma_next) / scale;
    if (result.relative_residual <= opt.tolerance) {
      result.converged = true;
      break;
    }
    const double beta = gamma_next / gamma;
    gamma = gamma_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = s[i] + beta * p[i];
  }
  return result;
}

// Normal equations A^T A x = A^T b factored once for all three columns.
bool direct_solve(const ReconstructionProblem& problem, const std::array<std::vector<double>, 3>& rhs,
                  std::array<std::vector<double>, 3>& solution) {
  const std::size_t n = problem.graph.size();
  const std::size_t k = problem.graph.k();
  const double w = problem.options.anchor_weight;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(n * (k + 1) + problem.anchors.size());
  const double off = -1.0 / static_cast<double>(k);
  for (std::size_t i = 0; i < n; ++i) {
    entries.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
    for (auto j : problem.graph.neighbors(i)) entries.emplace_back(static_cast<int>(i), static_cast<int>(j), off);
  }
  for (std::size_t a = 0; a < problem.anchors.size(); ++a)
    entries.emplace_back(static_cast<int>(n + a), static_cast<int>(problem.anchors.indices[a]), w);
  Eigen::SparseMatrix<double> a(static_cast<int>(n + problem.anchors.size()), static_cast<int>(n));
  a.setFromTriplets(entries.begin(), entries.end());
  const Eigen::SparseMatrix<double> at = a.transpose();
  const Eigen::SparseMatrix<double> normal = at * a;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(normal);
  if (ldlt.info() != Eigen::Success) return false;
  for (int d = 0; d < 3; ++d) {
    const Eigen::Map<const Eigen::VectorXd> b(rhs[d].data(), static_cast<Eigen::Index>(rhs[d].size()));
    const Eigen::VectorXd x = ldlt.solve(at * b);
    if (ldlt.info() != Eigen::Success || !x.allFinite()) return false;
    solution[d].assign(x.data(), x.data() + x.size());
  }
  return true;
}

std::size_t count_unanchored_components(const NeighborGraph& graph, const AnchorSet& anchors) {
  const std::size_t n = graph.size();
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : graph.neighbors(i)) {
      const auto a = find(static_cast<std::uint32_t>(i));
      const auto b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<std::uint8_t> anchored(n, 0);
  for (auto a : anchors.indices) anchored[find(a)] = 1;
  std::size_t missing = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (find(static_cast<std::uint32_t>(i)) == i && !anchored[i]) ++missing;
  return missing;
}

}  // namespace

std::vector<Vec3> dequantize(const QuantizedDeltas& q, std::span<const std::uint8_t> visible) {
  if (q.q.size() != visible.size()) throw std::invalid_argument("dequantize: mask size mismatch");
  std::vector<Vec3> out(q.q.size(), Vec3::Zero());
  std::size_t m = 0;
  for (std::size_t i = 0; i < q.q.size(); ++i) {
    if (!visible[i]) continue;
    if (m >= q.scale_codes.size()) throw std::invalid_argument("dequantize: missing scale codes");
    const double scale = reconstruction_scale(q.s_thresh, q.scale_codes[m++]);
    out[i] = Vec3(q.q[i][0], q.q[i][1], q.q[i][2]) / scale;
  }
  return out;
}

ReconstructionProblem anchor_weighting(ReconstructionProblem problem, double weight) {
  if (!(weight > 0.0)) throw std::invalid_argument("anchor weight must be positive");
  problem.options.anchor_weight = weight;
  return problem;
}

double SolveReport::max_residual() const {
  double r = 0.0;
  for (const auto& c : columns) r = std::max(r, c.relative_residual);
  return r;
}

bool SolveReport::converged() const {
  for (const auto& c : columns)
    if (!c.converged) return false;
  return true;
}

Reconstruction reconstruct(const ReconstructionProblem& problem) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = problem.deltas.size();
  if (problem.anchors.size() == 0) throw std::invalid_argument("reconstruction needs at least one anchor");
  if (!(problem.options.anchor_weight > 0.0)) throw std::invalid_argument("anchor weight must be positive");
  for (auto a : problem.anchors.indices)
    if (a >= n) throw std::invalid_argument("anchor index out of range");

  Reconstruction out;
  out.vertices.assign(n, Vec3::Zero());

  if (problem.graph.size() == 0) {
    // Without a graph only anchored points are determined.
    if (n != 1) throw std::invalid_argument("reconstruction graph is empty");
    for (int d = 0; d < 3; ++d) out.vertices[0][d] = problem.anchors.coords[0][d];
    for (auto& c : out.report.columns) c.converged = true;
    return out;
  }
  if (problem.graph.size() != n) throw std::invalid_argument("graph does not match the delta count");

  const double w = problem.options.anchor_weight;
  const AnchoredLaplacian op(problem.graph, problem.anchors, w);
  out.report.unanchored_components = count_unanchored_components(problem.graph, problem.anchors);
  if (out.report.unanchored_components > 0)
    out.report.warnings.push_back(std::to_string(out.report.unanchored_components) +
                                  " graph component(s) carry no anchor; their placement is not determined");

  std::array<std::vector<double>, 3> solution;
  std::array<std::vector<double>, 3> rhs;
  for (int d = 0; d < 3; ++d) {
    rhs[d].resize(op.rows());
    for (std::size_t i = 0; i < n; ++i) rhs[d][i] = problem.deltas[i][d];
    double anchor_mean = 0.0;
    for (std::size_t a = 0; a < problem.anchors.size(); ++a) {
      rhs[d][n + a] = w * problem.anchors.coords[a][d];
      anchor_mean += problem.anchors.coords[a][d];
    }
    anchor_mean /= static_cast<double>(problem.anchors.size());
    solution[d].assign(n, problem.options.warm_start ? anchor_mean : 0.0);
  }

  const bool want_direct =
      problem.options.backend == SolverBackend::kDirect ||
      (problem.options.backend == SolverBackend::kAuto && n <= kDirectSolveLimit);
  if (want_direct) {
    auto start_point = solution;
    out.report.direct = direct_solve(problem, rhs, start_point);
    if (out.report.direct)
      solution = std::move(start_point);
    else
      out.report.warnings.push_back("direct factorization failed; falling back to the iterative solver");
  }

  // Columns are independent; each solve is deterministic on its own.
  const std::size_t outer = std::min<std::size_t>(3, thread_count());
  std::vector<std::jthread> workers;
  for (int d = 1; d < 3; ++d) {
    if (outer > static_cast<std::size_t>(d))
      workers.emplace_back([&, d] { out.report.columns[d] = cgls(op, rhs[d], solution[d], problem.options); });
  }
  for (int d = 0; d < 3; ++d)
    if (d == 0 || outer <= static_cast<std::size_t>(d))
      out.report.columns[d] = cgls(op, rhs[d], solution[d], problem.options);
  workers.clear();

  for (std::size_t i = 0; i < n; ++i) out.vertices[i] = Vec3(solution[0][i], solution[1][i], solution[2][i]);
  for (int d = 0; d < 3; ++d)
    if (!out.report.columns[d].converged)
      out.report.warnings.push_back("column " + std::string(1, "xyz"[d]) + " did not converge (relative residual " +
                                    std::to_string(out.report.columns[d].relative_residual) + ")");
  out.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace salpcc
