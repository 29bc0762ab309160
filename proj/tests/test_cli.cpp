#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "causalstruct/edit.hpp"
#include "causalstruct/error.hpp"
#include "causalstruct/grammar.hpp"
#include "causalstruct/pipeline.hpp"
#include "causalstruct/scene_io.hpp"
#include "test_support.hpp"

using namespace causalstruct;
using namespace cs_test;
using R = SpatialRelation;

namespace {

const std::string kDesk =
    "obj(table,120,60,75); obj(cup,8,8,10); obj(laptop,35,25,2); obj(mouse,10,6,4);"
    " rel(cup,on,table); rel(laptop,on,table); rel(mouse,right_on,laptop)";

const std::string kRoom =
    "obj(table,120,60,75); obj(chair,45,45,90); obj(cup,8,8,10); obj(laptop,35,25,2);"
    " obj(mouse,10,6,4); obj(lamp,20,20,45); rel(cup,on,table); rel(laptop,left_on,table);"
    " rel(mouse,right_on,table); rel(chair,front,table); rel(lamp,left,table)";

PipelineResult run(const std::string& prompt, const PipelineConfig& config = {}) {
  auto oracle = make_oracle(config, prompt);
  return run_pipeline(config, prompt, *oracle, ProxyRenderer{});
}

std::string cli() {
  const char* path = std::getenv("CAUSALSTRUCT_CLI");
  REQUIRE(path != nullptr);
  return path;
}

int run_cli(const std::string& args) {
  int rc = std::system((cli() + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::filesystem::path& p) { return read_text_file(p); }

}  // namespace

TEST_CASE("grammar parsing") {
  auto draft = parse_scene_grammar("obj(table,120,60,75); obj(cup,8,8,10); rel(cup,on,table)");
  CHECK(draft.objects.size() == 2);
  CHECK(draft.relations.size() == 1);
  auto g = materialize_graph(draft, "p");
  CHECK(g.nodes.size() == 2);
  CHECK(g.nodes.count("cup-1") == 1);
  CHECK(g.edges[0].subject == "cup-1");

  CHECK(is_scene_grammar("obj(a,1,1,1)"));
  CHECK_FALSE(is_scene_grammar("a cup on a table"));
  CHECK_THROWS_AS(parse_scene_grammar(""), Error);
  CHECK_THROWS_AS(parse_scene_grammar("obj(a,1,1)"), Error);
  CHECK_THROWS_AS(parse_scene_grammar("obj(a,1,1,1); obj(b,1,1,1); rel(a,beside,b)"), Error);
  CHECK_THROWS_AS(parse_scene_grammar("obj(a,1,1,1); rel(a,on,zzz)"), Error);

  auto with_ids = parse_scene_grammar(format_scene_grammar(draft));
  CHECK(with_ids.objects.size() == 2);
  CHECK(materialize_graph(with_ids, "p").nodes == g.nodes);
}

TEST_CASE("truth statements override relations in the reference graph") {
  auto draft = parse_scene_grammar(
      "obj(table,120,60,75); obj(cup,8,8,10); rel(cup,under,table); truth(table,under,cup)");
  auto ref = reference_graph(draft);
  REQUIRE(ref.edges.size() == 1);
  CHECK(ref.edges[0].relation == R::under);
  CHECK(ref.edges[0].subject == "table-1");
}

TEST_CASE("config parsing") {
  auto c = parse_config("# comment\ntrials = 3\ntau1 = 0.8\npid_scale_delta = 0.05\nseed = 9\n");
  CHECK(c.trials == 3);
  CHECK(c.thresholds.tau1 == 0.8);
  CHECK(c.pid.scale.delta_max == 0.05);
  CHECK(c.seed == 9);
  CHECK_THROWS_AS(parse_config("bogus = 1"), Error);
  CHECK_THROWS_AS(parse_config("trials = 0"), Error);
  CHECK_THROWS_AS(parse_config("tau1 = 1.5"), Error);
  CHECK_THROWS_AS(parse_config("trials"), Error);
}

TEST_CASE("pipeline output is plausible and deterministic") {
  auto a = run(kDesk);
  CHECK(a.resolve.resolved);
  CHECK(plausibility_violations(a.scene, a.graph).empty());
  CHECK(a.renders.size() == 4);
  const auto& cup = a.scene.at("cup-1");
  CHECK(cup.aabb().min.z == doctest::Approx(a.scene.at("table-1").aabb().max.z));

  auto b = run(kDesk);
  CHECK(encode_scene(a.graph) == encode_scene(b.graph));
  CHECK(encode_fscene(assemble_fscene(a.scene)) == encode_fscene(assemble_fscene(b.scene)));
}

TEST_CASE("pipeline corrects a wrong relation") {
  auto r = run("obj(table,120,60,75); obj(cup,8,8,10); rel(cup,under,table); truth(cup,on,table)");
  REQUIRE(r.graph.edges.size() == 1);
  CHECK(r.graph.edges[0].relation == R::on);
  CHECK(r.graph.edges[0].status == EdgeStatus::Modified);
}

TEST_CASE("stage errors carry the stage name") {
  try {
    run("");
    FAIL("expected an error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "build");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GrammarError);
  }
}

TEST_CASE("edits leave unaffected objects untouched") {
  PipelineConfig config;
  auto base = run(kRoom, config);
  auto factory = default_oracle_factory(config);
  auto before = assemble_fscene(base.scene);
  auto record_of = [](const std::vector<FSceneRecord>& rs, const std::string& id) {
    for (const auto& r : rs) {
      if (r.id == id) return r;
    }
    FAIL("missing record " << id);
    return FSceneRecord{};
  };
  auto check_locality = [&](const EditResult& out) {
    auto after = assemble_fscene(out.result.scene);
    for (const auto& r : before) {
      if (out.affected.count(r.id)) continue;
      bool present = false;
      for (const auto& a : after) present |= a.id == r.id;
      if (!present) continue;
      CHECK(record_of(after, r.id) == r);
    }
  };

  auto removed = apply_edit(base.graph, EditCommand::remove("cup-1"), config, ProxyRenderer{}, factory);
  CHECK(removed.result.graph.nodes.count("cup-1") == 0);
  check_locality(removed);

  auto added = apply_edit(base.graph, EditCommand::add("obj(vase,10,10,30); rel(vase,right_on,table)"),
                          config, ProxyRenderer{}, factory);
  CHECK(added.result.graph.nodes.size() == base.graph.nodes.size() + 1);
  check_locality(added);

  auto moved = apply_edit(base.graph, EditCommand::move("cup-1", R::left_on, "table-1"), config,
                          ProxyRenderer{}, factory);
  const auto& table = moved.result.scene.at("table-1");
  CHECK(moved.result.scene.at("cup-1").center.x ==
        doctest::Approx(table.center.x - table.extent().x / 4));
  check_locality(moved);

  auto scaled = apply_edit(base.graph, EditCommand::rescale("lamp-1", 1.2), config, ProxyRenderer{}, factory);
  check_locality(scaled);

  CHECK_THROWS_AS(apply_edit(base.graph, EditCommand::remove("ghost"), config, ProxyRenderer{}, factory),
                  Error);
}

TEST_CASE("edit argument parsing") {
  auto m = EditCommand::parse(EditCommand::Kind::Move, "cup-1,left_on,table-1");
  CHECK(m.object == "cup-1");
  CHECK(m.relation == R::left_on);
  CHECK(m.target == "table-1");
  auto s = EditCommand::parse(EditCommand::Kind::Rescale, "cup-1,1.5");
  CHECK(s.factor == 1.5);
  CHECK_THROWS_AS(EditCommand::parse(EditCommand::Kind::Rescale, "cup-1,-2"), Error);
  CHECK_THROWS_AS(EditCommand::parse(EditCommand::Kind::Move, "cup-1,sideways,table-1"), Error);
}

TEST_CASE("command line round trip") {
  auto dir = scratch_dir("cli");
  auto out = dir / "out";
  REQUIRE(run_cli("generate -p '" + kDesk + "' -o " + out.string()) == 0);
  for (const char* f : {"scene.json", "fscene.json", "pid_trace.txt", "renders/front.svg",
                        "renders/threequarter.svg", "graph.initial.json", "graph.updated.json"}) {
    CHECK(std::filesystem::exists(out / f));
  }

  auto again = dir / "again";
  REQUIRE(run_cli("generate -p '" + kDesk + "' -o " + again.string()) == 0);
  CHECK(slurp(out / "scene.json") == slurp(again / "scene.json"));
  CHECK(slurp(out / "renders/top.svg") == slurp(again / "renders/top.svg"));

  CHECK(run_cli("render " + (out / "scene.json").string() + " --view side -o " + (dir / "r").string()) == 0);
  CHECK(run_cli("export " + (out / "scene.json").string() + " --fscene -o " + (dir / "e").string()) == 0);
  CHECK(run_cli("layout " + (out / "scene.json").string() + " -o " + (dir / "l").string()) == 0);
  CHECK(run_cli("refine " + (out / "scene.json").string() + " -o " + (dir / "f").string()) == 0);
  CHECK(run_cli("edit " + (out / "scene.json").string() + " --remove cup-1 -o " + (dir / "ed").string()) == 0);
  CHECK(!slurp(dir / "ed" / "scene.json").empty());
}

TEST_CASE("command line exit codes") {
  auto dir = scratch_dir("cli_codes");
  CHECK(run_cli("generate -p 'obj(a,1,1)' -o " + (dir / "x").string()) == 3);
  CHECK(run_cli("generate -p 'obj(cup,8,8,10); obj(chair,50,50,90); rel(chair,in,cup); truth(chair,in,cup)' -o " +
                (dir / "y").string()) == 4);
  write_text_file(dir / "remote.cfg", "oracle = remote\nendpoint = http://127.0.0.1:9\nmax_retries = 0\n"
                                      "timeout_s = 1\n");
  CHECK(run_cli("generate -p 'a cup on a table' --config " + (dir / "remote.cfg").string() + " -o " +
                (dir / "z").string()) == 2);
  CHECK(run_cli("render " + (dir / "missing.json").string() + " --view front") == 3);
  CHECK(run_cli("bogus") != 0);
}
