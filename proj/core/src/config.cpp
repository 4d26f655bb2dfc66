#include "salpcc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "salpcc/errors.hpp"

namespace salpcc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(out))
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  return out;
}

std::size_t to_size(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end)
    throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v, std::size_t count) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.size() != count)
    throw ConfigError("config: '" + key + "' expects " + std::to_string(count) + " comma-separated numbers");
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt(const Vec3& v) { return fmt(v.x()) + "," + fmt(v.y()) + "," + fmt(v.z()); }

bool set_camera_value(CameraPose& cam, const std::string& key, const std::string& value) {
  if (key == "camera.eye") {
    const auto l = to_list(key, value, 3);
    cam.eye = Vec3(l[0], l[1], l[2]);
  } else if (key == "camera.view_dir") {
    const auto l = to_list(key, value, 3);
    cam.view_dir = Vec3(l[0], l[1], l[2]);
  } else if (key == "camera.z_near") {
    cam.z_near = to_double(key, value);
  } else if (key == "camera.z_far") {
    cam.z_far = to_double(key, value);
  } else if (key == "camera.width") {
    cam.width = static_cast<int>(to_size(key, value));
  } else if (key == "camera.height") {
    cam.height = static_cast<int>(to_size(key, value));
  } else if (key == "camera.fov_y_deg") {
    cam.fov_y_deg = to_double(key, value);
  } else {
    return false;
  }
  return true;
}

const char* backend_name(SolverBackend b) {
  switch (b) {
    case SolverBackend::kIterative: return "iterative";
    case SolverBackend::kDirect: return "direct";
    default: return "auto";
  }
}

template <typename Fn>
void for_each_entry(const std::string& text, Fn&& fn) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    fn(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void CodecConfig::validate() const {
  if (k_n == 0 || k_n > 255) throw ConfigError("k_n must be in [1, 255]");
  if (k_a == 0) throw ConfigError("k_a must be positive");
  if (k_g == 0) throw ConfigError("k_g must be positive");
  if (!(s0_factor > 0.0)) throw ConfigError("s0_factor must be positive");
  if (!(anchor_fraction > 0.0 && anchor_fraction <= 1.0)) throw ConfigError("anchor_fraction must be in (0, 1]");
  for (double w : weights)
    if (!(w >= 0.0)) throw ConfigError("saliency weights must be non-negative");
  if (weights[0] + weights[1] + weights[2] + weights[3] <= 0.0) throw ConfigError("saliency weights sum to zero");
  if (!(focus_power > 0.0)) throw ConfigError("focus_power must be positive");
  if (!(s_thresh > 0.0) || !std::isfinite(static_cast<float>(s_thresh)))
    throw ConfigError("s_thresh must be a positive float");
  if (voxel_depth < 1 || voxel_depth > 16) throw ConfigError("voxel_depth must be in [1, 16]");
  if (!(solver_tolerance > 0.0)) throw ConfigError("solver_tolerance must be positive");
  if (solver_max_iterations == 0) throw ConfigError("solver_max_iterations must be positive");
  if (!(anchor_weight > 0.0)) throw ConfigError("anchor_weight must be positive");
  if (camera) {
    try {
      camera->validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("camera: ") + e.what());
    }
  }
}

std::string CodecConfig::to_text() const {
  std::ostringstream os;
  os << "k_n=" << k_n << "\n"
     << "k_a=" << k_a << "\n"
     << "k_g=" << k_g << "\n"
     << "s0_factor=" << fmt(s0_factor) << "\n"
     << "anchor_fraction=" << fmt(anchor_fraction) << "\n"
     << "k_c=" << k_c << "\n"
     << "weights=" << fmt(weights[0]) << "," << fmt(weights[1]) << "," << fmt(weights[2]) << ","
     << fmt(weights[3]) << "\n"
     << "focus_power=" << fmt(focus_power) << "\n"
     << "s_thresh=" << fmt(s_thresh) << "\n"
     << "voxel_depth=" << voxel_depth << "\n"
     << "solver_tolerance=" << fmt(solver_tolerance) << "\n"
     << "solver_max_iterations=" << solver_max_iterations << "\n"
     << "solver_backend=" << backend_name(solver_backend) << "\n"
     << "anchor_weight=" << fmt(anchor_weight) << "\n"
     << "warm_start=" << (warm_start ? "true" : "false") << "\n"
     << "strict_formula=" << (strict_formula ? "true" : "false") << "\n"
     << "quantization=" << (quantization == QuantizationMode::kUniform ? "uniform" : "saliency") << "\n";
  if (camera) {
    os << "camera.eye=" << fmt(camera->eye) << "\n"
       << "camera.view_dir=" << fmt(camera->view_dir) << "\n"
       << "camera.z_near=" << fmt(camera->z_near) << "\n"
       << "camera.z_far=" << fmt(camera->z_far) << "\n"
       << "camera.width=" << camera->width << "\n"
       << "camera.height=" << camera->height << "\n"
       << "camera.fov_y_deg=" << fmt(camera->fov_y_deg) << "\n";
  }
  return os.str();
}

void set_config_value(CodecConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "k_n") cfg.k_n = to_size(key, value);
  else if (key == "k_a") cfg.k_a = to_size(key, value);
  else if (key == "k_g") cfg.k_g = to_size(key, value);
  else if (key == "s0_factor") cfg.s0_factor = to_double(key, value);
  else if (key == "anchor_fraction") cfg.anchor_fraction = to_double(key, value);
  else if (key == "k_c") cfg.k_c = to_size(key, value);
  else if (key == "weights") {
    const auto l = to_list(key, value, 4);
    std::copy(l.begin(), l.end(), cfg.weights.begin());
  } else if (key == "focus_power") cfg.focus_power = to_double(key, value);
  else if (key == "s_thresh") cfg.s_thresh = to_double(key, value);
  else if (key == "voxel_depth") cfg.voxel_depth = static_cast<int>(to_size(key, value));
  else if (key == "solver_tolerance") cfg.solver_tolerance = to_double(key, value);
  else if (key == "solver_max_iterations") cfg.solver_max_iterations = to_size(key, value);
  else if (key == "solver_backend") {
    if (value == "auto") cfg.solver_backend = SolverBackend::kAuto;
    else if (value == "iterative") cfg.solver_backend = SolverBackend::kIterative;
    else if (value == "direct") cfg.solver_backend = SolverBackend::kDirect;
    else throw ConfigError("config: 'solver_backend' expects auto, iterative or direct, got '" + value + "'");
  } else if (key == "anchor_weight") cfg.anchor_weight = to_double(key, value);
  else if (key == "warm_start") cfg.warm_start = to_bool(key, value);
  else if (key == "strict_formula") cfg.strict_formula = to_bool(key, value);
  else if (key == "quantization") {
    if (value == "saliency") cfg.quantization = QuantizationMode::kSaliencyAware;
    else if (value == "uniform") cfg.quantization = QuantizationMode::kUniform;
    else throw ConfigError("config: 'quantization' expects saliency or uniform, got '" + value + "'");
  } else if (key.rfind("camera.", 0) == 0) {
    CameraPose cam = cfg.camera.value_or(CameraPose{});
    if (!set_camera_value(cam, key, value)) throw ConfigError("config: unknown key '" + key + "'");
    cfg.camera = cam;
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

CodecConfig parse_config(const std::string& text, CodecConfig base) {
  for_each_entry(text, [&](const std::string& k, const std::string& v) { set_config_value(base, k, v); });
  base.validate();
  return base;
}

CodecConfig load_config(const std::filesystem::path& path, CodecConfig base) {
  return parse_config(read_file(path), std::move(base));
}

void save_config(const CodecConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << cfg.to_text();
}

CameraPose parse_camera(const std::string& text) {
  CameraPose cam;
  for_each_entry(text, [&](const std::string& k, const std::string& v) {
    if (!set_camera_value(cam, k, v)) throw ConfigError("camera: unknown key '" + k + "'");
  });
  try {
    cam.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("camera: ") + e.what());
  }
  return cam;
}

}  // namespace salpcc
