#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <salpcc/bd_psnr.hpp>
#include <salpcc/config.hpp>
#include <salpcc/metrics.hpp>
#include <salpcc/pipeline.hpp>

namespace salpcc::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNumerical = 3 };

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Usage problems that are detected after argument parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json config_json(const CodecConfig& cfg);
nlohmann::json timings_json(const std::vector<StageTiming>& timings);
/// Finite numbers as numbers, infinities as the strings "inf" / "-inf".
nlohmann::json number_json(double v);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

struct RdRow {
  double s_thresh = 0.0;
  RDPoint point;
  double payload_bpp = 0.0;  // delta section only
};

/// CSV with header "s_thresh,bpp,d1,d2,payload_bpp"; lines starting with
/// '#' are comments.
void write_rd_csv(std::ostream& os, const std::vector<RdRow>& rows, const std::vector<std::string>& comments);
std::vector<RdRow> read_rd_csv(std::istream& is);

/// Saliency table: one row per visible point of the prepared cloud.
struct SaliencyRow {
  std::uint32_t index = 0;
  double a = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0, s = 0.0;
};
std::vector<SaliencyRow> saliency_rows(const Analysis& analysis);
void write_saliency_csv(std::ostream& os, const std::vector<SaliencyRow>& rows);
std::vector<SaliencyRow> read_saliency_csv(std::istream& is);

struct EvaluationOptions {
  BandwidthSource bandwidth = BandwidthSource::kDegraded;
  bool restrict_to_visible = true;
};

/// Quality of `degraded` against `reference`, both in prepared (voxel grid,
/// Morton) order. A visibility mask restricts both clouds by index; a layer
/// partition adds the per-layer table.
nlohmann::json evaluate_clouds(const PointCloud& reference, const PointCloud& degraded,
                               const std::vector<std::uint8_t>* visible, const LayerPartition* layers,
                               const EvaluationOptions& options);

/// One encode/decode/evaluate pass of a sweep.
RdRow sweep_point(const Analysis& analysis, double s_thresh, QuantizationMode mode, const SolverOptions& solver,
                  const EvaluationOptions& options);

}  // namespace salpcc::cli
