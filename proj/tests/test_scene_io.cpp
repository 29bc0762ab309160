#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "causalstruct/error.hpp"
#include "causalstruct/scene_io.hpp"
#include "test_support.hpp"

using namespace causalstruct;
using namespace cs_test;
using R = SpatialRelation;

namespace {

CausalSceneGraph random_graph(std::mt19937& rng) {
  std::uniform_int_distribution<int> count(0, 8);
  std::uniform_real_distribution<double> size(1.0, 200.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_int_distribution<int> rel(0, 14);
  std::uniform_int_distribution<int> status(0, 4);

  CausalSceneGraph g;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    auto o = object("obj-" + std::to_string(i), size(rng), size(rng), size(rng), 0.5 + unit(rng));
    o.name = "thing " + std::to_string(i);
    o.position = {coord(rng), coord(rng), unit(rng)};
    if (i % 3 == 0) o.asset_ref = "assets/" + std::to_string(i) + ".ply";
    g.nodes.emplace(o.id, o);
  }
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    auto e = edge("obj-" + std::to_string(i), kAllRelations[rel(rng)], "obj-" + std::to_string(pick(rng)),
                  static_cast<EdgeStatus>(status(rng)), unit(rng));
    if (unit(rng) < 0.5) e.posterior = unit(rng);
    g.edges.push_back(e);
  }
  g.prompt = "scene \"with\" quotes\nand lines";
  return g;
}

}  // namespace

TEST_CASE("scene documents round-trip exactly") {
  std::mt19937 rng(42);
  for (int i = 0; i < 200; ++i) {
    auto g = random_graph(rng);
    auto text = encode_scene(g);
    auto back = decode_scene(text);
    CHECK(back == g);
    CHECK(encode_scene(back) == text);
  }
}

TEST_CASE("edge rows use the documented layout") {
  auto g = graph_of({object("table", 120, 60, 75), object("cup", 8, 8, 10)},
                    {edge("cup", R::on, "table", EdgeStatus::Kept, 0.9)});
  g.edges[0].posterior = 0.95;
  auto text = encode_scene(g);
  CHECK(text.find("\"causalstruct-scene/1\"") != std::string::npos);
  CHECK(text.find("\"kept\"") != std::string::npos);
  auto back = decode_scene(text);
  REQUIRE(back.edges.size() == 1);
  CHECK(back.edges[0].posterior == 0.95);
}

TEST_CASE("malformed documents raise DecodeError") {
  auto expect_decode_error = [](const std::string& text) {
    try {
      decode_scene(text);
      FAIL("expected DecodeError for: " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DecodeError);
    }
  };
  expect_decode_error("");
  expect_decode_error("{not json");
  expect_decode_error("[]");
  expect_decode_error(R"({"nodes": [], "edges": [], "meta": {"version": "other/9"}})");
  expect_decode_error(
      R"({"nodes": [], "edges": [["cup", "on", "table", 0.5, null, "kept"]],
          "meta": {"version": "causalstruct-scene/1", "prompt": ""}})");

  auto g = graph_of({object("table", 120, 60, 75), object("cup", 8, 8, 10)},
                    {edge("cup", R::on, "table")});
  auto text = encode_scene(g);
  auto bad_relation = text;
  bad_relation.replace(bad_relation.find("\"on\""), 4, "\"onto\"");
  expect_decode_error(bad_relation);
}

TEST_CASE("files round-trip through disk") {
  auto dir = scratch_dir("scene_io");
  auto g = graph_of({object("table", 120, 60, 75)}, {});
  save_scene(g, dir / "nested" / "scene.json");
  CHECK(load_scene(dir / "nested" / "scene.json") == g);
  CHECK_THROWS_AS(load_scene(dir / "missing.json"), Error);
}
