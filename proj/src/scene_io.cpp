#include "causalstruct/scene_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "causalstruct/error.hpp"

namespace causalstruct {

using ojson = nlohmann::ordered_json;

std::string encode_scene(const CausalSceneGraph& graph) {
  ojson doc;
  ojson nodes = ojson::array();
  for (const auto& [id, o] : graph.nodes) {
    ojson n;
    n["id"] = o.id;
    n["name"] = o.name;
    n["dims_cm"] = {o.dims.length_cm, o.dims.width_cm, o.dims.height_cm};
    n["position_m"] = {o.position.x, o.position.y, o.position.z};
    n["scale"] = o.scale;
    n["asset_ref"] = o.asset_ref ? ojson(*o.asset_ref) : ojson(nullptr);
    nodes.push_back(std::move(n));
  }
  ojson edges = ojson::array();
  for (const auto& e : graph.edges) {
    edges.push_back({e.subject, std::string(to_string(e.relation)), e.target, e.prior,
                     e.posterior ? ojson(*e.posterior) : ojson(nullptr),
                     std::string(to_string(e.status))});
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  doc["meta"] = {{"prompt", graph.prompt}, {"version", kSceneFormatVersion}};
  return doc.dump(2) + "\n";
}

namespace {

const ojson& require(const ojson& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(ErrorKind::DecodeError, std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

Vec3 read_triple(const ojson& arr, const char* what) {
  if (!arr.is_array() || arr.size() != 3) {
    fail(ErrorKind::DecodeError, std::string(what) + " must be a 3-element list");
  }
  return {arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
}

}  // namespace

CausalSceneGraph decode_scene(const std::string& document) {
  CausalSceneGraph graph;
  try {
    auto doc = ojson::parse(document);
    const auto& meta = require(doc, "meta");
    if (require(meta, "version").get<std::string>() != kSceneFormatVersion) {
      fail(ErrorKind::DecodeError, "unsupported scene version");
    }
    graph.prompt = require(meta, "prompt").get<std::string>();

    const auto& nodes = require(doc, "nodes");
    if (!nodes.is_array()) fail(ErrorKind::DecodeError, "'nodes' must be a list");
    for (const auto& n : nodes) {
      SceneObject o;
      o.id = require(n, "id").get<std::string>();
      o.name = require(n, "name").get<std::string>();
      auto dims = read_triple(require(n, "dims_cm"), "dims_cm");
      o.dims = {dims.x, dims.y, dims.z};
      o.position = read_triple(require(n, "position_m"), "position_m");
      o.scale = require(n, "scale").get<double>();
      const auto& asset = require(n, "asset_ref");
      if (!asset.is_null()) o.asset_ref = asset.get<std::string>();
      if (!graph.nodes.emplace(o.id, o).second) {
        fail(ErrorKind::DecodeError, "duplicate object id '" + o.id + "'");
      }
    }

    const auto& edges = require(doc, "edges");
    if (!edges.is_array()) fail(ErrorKind::DecodeError, "'edges' must be a list");
    for (const auto& row : edges) {
      if (!row.is_array() || row.size() != 6) {
        fail(ErrorKind::DecodeError, "edge rows have six fields");
      }
      CausalEdge e;
      e.subject = row[0].get<std::string>();
      auto rel = try_parse_relation(row[1].get<std::string>());
      if (!rel) fail(ErrorKind::DecodeError, "unknown relation in edge row");
      e.relation = *rel;
      e.target = row[2].get<std::string>();
      e.prior = row[3].get<double>();
      if (!row[4].is_null()) e.posterior = row[4].get<double>();
      e.status = parse_edge_status(row[5].get<std::string>());
      graph.edges.push_back(std::move(e));
    }
    validate(graph);
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorKind::DecodeError, ex.what());
  } catch (const Error& ex) {
    if (ex.kind() == ErrorKind::DecodeError) throw;
    fail(ErrorKind::DecodeError, ex.what());
  }
  return graph;
}

CausalSceneGraph roundtrip_scene(const CausalSceneGraph& graph) {
  return decode_scene(encode_scene(graph));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::DecodeError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

CausalSceneGraph load_scene(const std::filesystem::path& path) {
  return decode_scene(read_text_file(path));
}

void save_scene(const CausalSceneGraph& graph, const std::filesystem::path& path) {
  write_text_file(path, encode_scene(graph));
}

}  // namespace causalstruct
