#pragma once

#include <filesystem>
#include <string>

#include "causalstruct/graph.hpp"

namespace causalstruct {

inline constexpr std::string_view kSceneFormatVersion = "causalstruct-scene/1";

/// Canonical scene document: sections `nodes`, `edges`, `meta` in fixed
/// field order, so re-exporting a decoded scene is byte-identical.
std::string encode_scene(const CausalSceneGraph& graph);

/// Throws DecodeError on malformed documents or broken references.
CausalSceneGraph decode_scene(const std::string& document);

CausalSceneGraph roundtrip_scene(const CausalSceneGraph& graph);

CausalSceneGraph load_scene(const std::filesystem::path& path);
void save_scene(const CausalSceneGraph& graph, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace causalstruct
