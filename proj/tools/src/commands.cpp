#include "salpcc_cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <salpcc/errors.hpp>

namespace salpcc::cli {
namespace {

std::vector<Vec3> pick(std::span<const Vec3> points, std::span<const std::uint32_t> idx) {
  std::vector<Vec3> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(points[i]);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw DataError("CSV line " + std::to_string(line) + ": '" + s + "' is not a number");
  return v;
}

std::string csv_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

nlohmann::json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

nlohmann::json config_json(const CodecConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  std::istringstream in(cfg.to_text());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) j[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return j;
}

nlohmann::json timings_json(const std::vector<StageTiming>& timings) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& t : timings) j[t.stage] = t.seconds;
  return j;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

void write_rd_csv(std::ostream& os, const std::vector<RdRow>& rows, const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << "\n";
  os << "s_thresh,bpp,d1,d2,payload_bpp\n";
  for (const auto& r : rows)
    os << csv_number(r.s_thresh) << "," << csv_number(r.point.bpp) << "," << csv_number(r.point.d1_psnr) << ","
       << csv_number(r.point.d2_psnr) << "," << csv_number(r.payload_bpp) << "\n";
}

std::vector<RdRow> read_rd_csv(std::istream& is) {
  std::vector<RdRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("s_thresh,bpp,d1,d2", 0) != 0) throw DataError("RD CSV: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() < 4) throw DataError("RD CSV line " + std::to_string(lineno) + ": expected at least 4 fields");
    RdRow r;
    r.s_thresh = parse_number(f[0], lineno);
    r.point.bpp = parse_number(f[1], lineno);
    r.point.d1_psnr = parse_number(f[2], lineno);
    r.point.d2_psnr = parse_number(f[3], lineno);
    r.payload_bpp = f.size() > 4 ? parse_number(f[4], lineno) : 0.0;
    rows.push_back(r);
  }
  if (!header) throw DataError("RD CSV: missing header");
  return rows;
}

std::vector<SaliencyRow> saliency_rows(const Analysis& analysis) {
  const auto& b = analysis.saliency;
  std::vector<SaliencyRow> rows(b.size());
  for (std::size_t m = 0; m < b.size(); ++m) {
    const auto i = b.visible_indices[m];
    rows[m] = {i, analysis.visibility.a[i], b.geometric.s1[m], b.s2[m], b.s3[m], b.focus.normalized[m], b.s[m]};
  }
  return rows;
}

void write_saliency_csv(std::ostream& os, const std::vector<SaliencyRow>& rows) {
  os << "index,a,s1,s2,s3,s4,s\n";
  for (const auto& r : rows)
    os << r.index << "," << csv_number(r.a) << "," << csv_number(r.s1) << "," << csv_number(r.s2) << ","
       << csv_number(r.s3) << "," << csv_number(r.s4) << "," << csv_number(r.s) << "\n";
}

std::vector<SaliencyRow> read_saliency_csv(std::istream& is) {
  std::vector<SaliencyRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "index,a,s1,s2,s3,s4,s") throw DataError("saliency CSV: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 7) throw DataError("saliency CSV line " + std::to_string(lineno) + ": expected 7 fields");
    const double idx = parse_number(f[0], lineno);
    if (idx < 0 || idx != std::floor(idx) || idx > 4294967295.0)
      throw DataError("saliency CSV line " + std::to_string(lineno) + ": bad index");
    rows.push_back({static_cast<std::uint32_t>(idx), parse_number(f[1], lineno), parse_number(f[2], lineno),
                    parse_number(f[3], lineno), parse_number(f[4], lineno), parse_number(f[5], lineno),
                    parse_number(f[6], lineno)});
  }
  if (!header) throw DataError("saliency CSV: missing header");
  return rows;
}

nlohmann::json evaluate_clouds(const PointCloud& reference, const PointCloud& degraded,
                               const std::vector<std::uint8_t>* visible, const LayerPartition* layers,
                               const EvaluationOptions& options) {
  MetricOptions mo;
  mo.bandwidth = options.bandwidth;
  nlohmann::json j;
  std::vector<Vec3> ref = reference.vertices;
  std::vector<Vec3> deg = degraded.vertices;
  const bool restrict = visible && options.restrict_to_visible;
  if (restrict) {
    if (visible->size() != reference.size() || degraded.size() != reference.size())
      throw DataError("visibility mask, reference and degraded clouds must have the same point count");
    std::vector<std::uint32_t> idx;
    for (std::size_t i = 0; i < visible->size(); ++i)
      if ((*visible)[i]) idx.push_back(static_cast<std::uint32_t>(i));
    ref = pick(reference.vertices, idx);
    deg = pick(degraded.vertices, idx);
  }
  const auto errors = geometry_errors(ref, deg, mo);
  const auto heat = error_heatmap(ref, deg);
  j["points_reference"] = ref.size();
  j["points_degraded"] = deg.size();
  j["visible_only"] = restrict;
  j["bandwidth_source"] = options.bandwidth == BandwidthSource::kDegraded ? "degraded" : "reference";
  j["bandwidth"] = errors.bandwidth;
  j["d1"] = number_json(errors.d1_psnr);
  j["d2"] = number_json(errors.d2_psnr);
  j["d1_rms"] = errors.d1;
  j["d2_rms"] = errors.d2;
  j["mean_euclid"] = heat.mean;
  j["max_euclid"] = heat.max;
  if (layers) {
    const auto table = layer_report(*layers, reference.vertices, degraded.vertices, options.bandwidth);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : table) {
      nlohmann::json row{{"layer", r.layer}, {"count", r.count}, {"present", r.present}};
      if (r.present) {
        row["d1"] = number_json(r.d1_psnr);
        row["d1_rms"] = r.d1;
      }
      rows.push_back(row);
    }
    j["layers"] = rows;
  }
  return j;
}

RdRow sweep_point(const Analysis& analysis, double s_thresh, QuantizationMode mode, const SolverOptions& solver,
                  const EvaluationOptions& options) {
  const auto enc = encode(analysis, s_thresh, mode);
  const auto dec = decode(enc.stream.bytes, solver);
  const auto j = evaluate_clouds(analysis.cloud, dec.cloud, &analysis.visibility.visible, nullptr, options);
  auto psnr = [](const nlohmann::json& v) {
    return v.is_string() ? std::numeric_limits<double>::infinity() : v.get<double>();
  };
  RdRow r;
  r.s_thresh = s_thresh;
  r.point.bpp = enc.stream.bpp();
  r.point.d1_psnr = psnr(j["d1"]);
  r.point.d2_psnr = psnr(j["d2"]);
  r.payload_bpp = measure_bpp(enc.stream.sections.deltas, analysis.cloud.size());
  return r;
}

}  // namespace salpcc::cli
