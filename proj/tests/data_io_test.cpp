// Copyright 2026 The ucode Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>

#include "ucode/data_io.hpp"

namespace ucode {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ucode_data_io_" + name);
  fs::remove_all(p);
  return p;
}

TEST(DataIoTest, ParsesFeaturesWithCrlf) {
  const Matrix x = parse_features(TextSource::text("1,2.5\r\n-3,4e-1\r\n"));
  ASSERT_EQ(x.rows(), 2);
  EXPECT_EQ(x(1, 0), -3.0);
  EXPECT_EQ(x(1, 1), 0.4);
}

TEST(DataIoTest, FeatureErrorsCarryLineNumbers) {
  try {
    parse_features(TextSource::text("1,2\n3,x\n", "f.csv"));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("f.csv:2"), std::string::npos);
  }
  EXPECT_THROW(parse_features(TextSource::text("1,2\n3\n")), InputError);
}

TEST(DataIoTest, LabelsAreDensified) {
  EXPECT_EQ(parse_labels(TextSource::text("7\n3\n7\n10\n")).labels, (std::vector<int>{1, 0, 1, 2}));
}

TEST(DataIoTest, EdgesDropReversedDuplicates) {
  const auto e = parse_edges(TextSource::text("# comment\n0\t1\n1 0\n1\t2\n"), NodeIndex{});
  EXPECT_EQ(e, (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_THROW(parse_edges(TextSource::text("a\tb\n"), NodeIndex{}), InputError);
  EXPECT_THROW(parse_edges(TextSource::text("0 1 2\n"), NodeIndex{}), InputError);
}

TEST(DataIoTest, NamedNodesAndCover) {
  DatasetBundle b;
  b.edges = TextSource::text("alice\tbob\nbob\tcarol\n");
  b.nodes = TextSource::text("alice\nbob\ncarol\n");
  b.cover = TextSource::text("x\talice\nx\tbob\ny\tbob\ny\tcarol\n");
  const Dataset d = load_bundle(b);
  EXPECT_EQ(d.graph.num_nodes(), 3);
  EXPECT_EQ(d.graph.feature_dim(), 3);  // identity features
  const auto& cv = std::get<Cover>(*d.graph.ground_truth());
  EXPECT_EQ(cv.sets, (std::vector<std::vector<int>>{{0, 1}, {1, 2}}));
}

TEST(DataIoTest, NodeCountResolution) {
  DatasetBundle b;
  b.edges = TextSource::text("0\t3\n");
  EXPECT_EQ(load_bundle(b).graph.num_nodes(), 4);
  b.declared_n = 6;
  EXPECT_EQ(load_bundle(b).graph.num_nodes(), 6);
  b.declared_n.reset();
  b.features = TextSource::text("1\n1\n1\n1\n1\n");
  EXPECT_EQ(load_bundle(b).graph.num_nodes(), 5);
  b.labels = TextSource::text("0\n1\n");
  EXPECT_THROW(load_bundle(b), InputError);
}

TEST(DataIoTest, ValidationFailuresBecomeInputErrors) {
  DatasetBundle b;
  b.edges = TextSource::text("0\t0\n");
  EXPECT_THROW(load_bundle(b), InputError);
  b.edges = TextSource::text("0\t5\n");
  b.features = TextSource::text("1\n1\n");
  EXPECT_THROW(load_bundle(b), InputError);
  b.edges = TextSource::file("/nonexistent/edges.tsv");
  EXPECT_THROW(load_bundle(b), InputError);
}

TEST(DataIoTest, BundleRoundTrip) {
  const auto dir = scratch("roundtrip");
  SbmConfig cfg;
  cfg.n = 30;
  cfg.k_planted = 3;
  cfg.seed = 5;
  const auto r = sbm_generate(cfg);
  std::vector<std::string> names;
  for (int i = 0; i < 30; ++i) names.push_back(std::to_string(i));
  save_bundle(Dataset{r.graph, names}, dir);
  const Dataset back = load_bundle(bundle_in(dir));
  EXPECT_EQ(back.graph.edges(), r.graph.edges());
  EXPECT_EQ(back.graph.features(), r.graph.features());  // shortest round-trip formatting
  EXPECT_EQ(std::get<Partition>(*back.graph.ground_truth()).labels, r.primary.labels);
  fs::remove_all(dir);
}

TEST(DataIoTest, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3, -2.5e-300, 12345.678})
    EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(DataIoTest, SbmIsSeededAndPlanted) {
  SbmConfig cfg;
  cfg.seed = 3;
  const auto a = sbm_generate(cfg), b = sbm_generate(cfg);
  EXPECT_EQ(a.graph.edges(), b.graph.edges());
  EXPECT_EQ(a.graph.features(), b.graph.features());
  std::size_t inside = 0;
  for (auto [u, v] : a.graph.edges())
    inside += a.primary.labels[static_cast<std::size_t>(u)] == a.primary.labels[static_cast<std::size_t>(v)];
  EXPECT_GT(inside, a.graph.num_edges() / 2);
  cfg.seed = 4;
  EXPECT_NE(sbm_generate(cfg).graph.edges(), a.graph.edges());
}

TEST(DataIoTest, SbmOverlapAndErrors) {
  SbmConfig cfg;
  cfg.overlap_fraction = 0.1;
  const auto r = sbm_generate(cfg);
  EXPECT_TRUE(std::holds_alternative<Cover>(*r.graph.ground_truth()));
  EXPECT_TRUE(r.cover.has_overlap());
  std::size_t memberships = 0;
  for (const auto& s : r.cover.sets) memberships += s.size();
  EXPECT_EQ(memberships, 110u);

  cfg.overlap_fraction = 0;
  cfg.p_in = 1.5;
  EXPECT_THROW(sbm_generate(cfg), InputError);
  cfg.p_in = 0.01;
  EXPECT_EQ(sbm_generate(cfg).warnings.size(), 1u);
}

TEST(DataIoTest, Builtins) {
  EXPECT_TRUE(builtin_graph("bowtie"));
  EXPECT_TRUE(builtin_graph("triangle"));
  EXPECT_FALSE(builtin_graph("square"));
}

}  // namespace
}  // namespace ucode
