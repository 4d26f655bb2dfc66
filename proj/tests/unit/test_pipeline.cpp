#include <filesystem>

#include <gtest/gtest.h>

#include <salpcc/config.hpp>
#include <salpcc/errors.hpp>
#include <salpcc/metrics.hpp>
#include <salpcc/parallel.hpp>
#include <salpcc/pipeline.hpp>

#include "fixtures.hpp"

namespace salpcc {
namespace {

TEST(Config, DefaultsMatchTheParameterTable) {
  const CodecConfig c;
  EXPECT_EQ(c.k_n, 6u);
  EXPECT_EQ(c.k_a, 125u);
  EXPECT_EQ(c.k_g, 25u);
  EXPECT_EQ(c.s0_factor, 2.0);
  EXPECT_EQ(c.anchor_fraction, 0.01);
  EXPECT_EQ(c.weights, (std::array<double, 4>{1.0, 1.0, 0.1, 0.1}));
  EXPECT_EQ(c.focus_power, 1.0);
  EXPECT_EQ(c.solver_tolerance, 1e-8);
  EXPECT_EQ(c.solver_max_iterations, 5000u);
  EXPECT_FALSE(c.strict_formula);
  EXPECT_FALSE(c.camera.has_value());
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, TextRoundtrip) {
  CodecConfig c;
  c.k_n = 8;
  c.weights = {0.5, 1.0, 0.25, 0.125};
  c.s_thresh = 0.0123456789;
  c.solver_backend = SolverBackend::kIterative;
  c.quantization = QuantizationMode::kUniform;
  c.strict_formula = true;
  CameraPose cam;
  cam.eye = Vec3(1.5, -2, 3);
  cam.view_dir = Vec3(0, 0.5, -1);
  cam.width = 640;
  c.camera = cam;
  const CodecConfig back = parse_config(c.to_text());
  EXPECT_EQ(back.to_text(), c.to_text());
  EXPECT_EQ(back.s_thresh, c.s_thresh);
  ASSERT_TRUE(back.camera);
  EXPECT_EQ(back.camera->eye, cam.eye);

  const auto path = std::filesystem::temp_directory_path() / "salpcc_pipeline_cfg.txt";
  save_config(c, path);
  EXPECT_EQ(load_config(path).to_text(), c.to_text());
}

TEST(Config, CommentsAndOverrides) {
  const CodecConfig c = parse_config("# comment\n k_a = 60  # inline\n\ns_thresh=0.5\n");
  EXPECT_EQ(c.k_a, 60u);
  EXPECT_EQ(c.s_thresh, 0.5);
  CodecConfig d = c;
  set_config_value(d, "k_a", "99");
  EXPECT_EQ(d.k_a, 99u);
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config("nonsense=1\n"), ConfigError);
  EXPECT_THROW(parse_config("k_n\n"), ConfigError);
  EXPECT_THROW(parse_config("k_n=abc\n"), ConfigError);
  EXPECT_THROW(parse_config("k_n=0\n"), ConfigError);
  EXPECT_THROW(parse_config("k_n=300\n"), ConfigError);
  EXPECT_THROW(parse_config("s_thresh=-1\n"), ConfigError);
  EXPECT_THROW(parse_config("s_thresh=1e300\n"), ConfigError);
  EXPECT_THROW(parse_config("weights=1,1,1\n"), ConfigError);
  EXPECT_THROW(parse_config("weights=0,0,0,0\n"), ConfigError);
  EXPECT_THROW(parse_config("solver_backend=magic\n"), ConfigError);
  EXPECT_THROW(parse_config("camera.z_near=5\ncamera.z_far=1\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/salpcc.cfg"), ConfigError);
}

TEST(Config, CameraText) {
  const CameraPose cam = parse_camera("camera.eye=1,2,3\ncamera.view_dir=0,0,-1\ncamera.fov_y_deg=45\n");
  EXPECT_EQ(cam.eye, Vec3(1, 2, 3));
  EXPECT_EQ(cam.fov_y_deg, 45.0);
  EXPECT_THROW(parse_camera("camera.eye=1,2\n"), ConfigError);
}

TEST(Pipeline, PrepareIsMortonOrderedOnTheGrid) {
  const PointCloud pc = prepare_cloud(testing::noisy_torus(2000), 10);
  const auto order = morton_permutation(pc);
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(order[i], i);
  // Already on the grid: coordinates are kept as they are.
  const PointCloud again = prepare_cloud(pc, 10);
  ASSERT_EQ(again.size(), pc.size());
  for (std::size_t i = 0; i < pc.size(); ++i) EXPECT_EQ(again.vertices[i], pc.vertices[i]);
}

TEST(Pipeline, StageTimingsReported) {
  const Analysis a = analyze(testing::noisy_torus(2000), CodecConfig{});
  std::vector<std::string> stages;
  for (const auto& t : a.timings) {
    stages.push_back(t.stage);
    EXPECT_GE(t.seconds, 0.0);
  }
  EXPECT_EQ(stages, (std::vector<std::string>{"voxelize", "laplacian", "visibility", "saliency", "anchors"}));
  EXPECT_EQ(a.anchors.size(), default_anchor_count(a.cloud.size()));
}

TEST(Pipeline, StageNameInErrors) {
  PointCloud flat;
  flat.vertices.assign(5, Vec3(1.5, 2.25, 3.125));
  try {
    analyze(flat, CodecConfig{});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("voxelize"), std::string::npos) << e.what();
  }
  PointCloud nan_cloud;
  nan_cloud.vertices = {Vec3(0, 0, 0), Vec3(NAN, 0, 0), Vec3(1, 1, 1)};
  EXPECT_THROW(analyze(nan_cloud, CodecConfig{}), DataError);
}

TEST(Pipeline, EncodeIsDeterministicAcrossThreadCounts) {
  const PointCloud pc = testing::noisy_torus(4000);
  set_thread_count(1);
  const auto one = encode(analyze(pc, CodecConfig{}), CodecConfig{}).stream.bytes;
  const auto again = encode(analyze(pc, CodecConfig{}), CodecConfig{}).stream.bytes;
  set_thread_count(8);
  const auto eight = encode(analyze(pc, CodecConfig{}), CodecConfig{}).stream.bytes;
  set_thread_count(0);
  EXPECT_EQ(one, again);
  EXPECT_EQ(one, eight);
}

TEST(Pipeline, DecodeRestoresTheCloud) {
  const Analysis a = analyze(testing::noisy_torus(3000), CodecConfig{});
  const EncodeResult enc = encode(a, 10.0, QuantizationMode::kSaliencyAware);
  const DecodeResult dec = decode(enc.stream.bytes, SolverOptions{});
  ASSERT_EQ(dec.cloud.size(), a.cloud.size());
  EXPECT_EQ(dec.contents, enc.contents);
  EXPECT_TRUE(dec.report.converged());
  // Anchors are soft constraints, so they only stay close.
  for (std::size_t m = 0; m < a.anchors.size(); ++m)
    EXPECT_LT((dec.cloud.vertices[a.anchors.indices[m]] - Vec3(a.anchors.coords[m][0], a.anchors.coords[m][1], a.anchors.coords[m][2])).norm(), 10.0);
  EXPECT_GT(psnr_geom(a.cloud.vertices, dec.cloud.vertices, PsnrMode::kD1), 20.0);
}

TEST(Pipeline, FinerQuantizationCostsMoreBits) {
  const Analysis a = analyze(testing::noisy_torus(3000), CodecConfig{});
  double prev = 0.0;
  for (double st : {0.01, 0.1, 0.3}) {
    const double bpp = encode(a, st, QuantizationMode::kSaliencyAware).stream.bpp();
    EXPECT_GT(bpp, prev);
    prev = bpp;
  }
}

TEST(Pipeline, ExplicitAnchorCount) {
  CodecConfig cfg;
  cfg.k_c = 7;
  const Analysis a = analyze(testing::noisy_torus(2000), cfg);
  EXPECT_EQ(a.anchors.size(), 7u);
}

TEST(Pipeline, ExplicitCameraIsUsed) {
  CodecConfig cfg;
  CameraPose cam;
  cam.eye = Vec3(512, 512, -1500);
  cam.view_dir = Vec3(0, 0, 1);
  cam.z_near = 100;
  cam.z_far = 5000;
  cfg.camera = cam;
  const Analysis a = analyze(testing::noisy_torus(2000), cfg);
  EXPECT_EQ(a.camera.eye, cam.eye);
  const Analysis b = analyze(testing::noisy_torus(2000), CodecConfig{});
  EXPECT_NE(a.visibility.visible, b.visibility.visible);
}

}  // namespace
}  // namespace salpcc
