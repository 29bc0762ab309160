#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace causalstruct {

/// Closed vocabulary of spatial relation words. Declaration order is the
/// canonical vocabulary order and is used for deterministic tie-breaking.
enum class SpatialRelation {
  above,
  under,
  in,
  on,
  front,
  left,
  right,
  corner,
  behind,
  left_front,
  right_front,
  left_back,
  right_back,
  left_on,
  right_on,
};

inline constexpr std::size_t kRelationCount = 15;

inline constexpr std::array<SpatialRelation, kRelationCount> kAllRelations = {
    SpatialRelation::above,      SpatialRelation::under,       SpatialRelation::in,
    SpatialRelation::on,         SpatialRelation::front,       SpatialRelation::left,
    SpatialRelation::right,      SpatialRelation::corner,      SpatialRelation::behind,
    SpatialRelation::left_front, SpatialRelation::right_front, SpatialRelation::left_back,
    SpatialRelation::right_back, SpatialRelation::left_on,     SpatialRelation::right_on,
};

std::string_view to_string(SpatialRelation rel);

/// Exact lowercase match against the vocabulary; throws UnknownRelation otherwise.
SpatialRelation parse_relation(std::string_view word);

std::optional<SpatialRelation> try_parse_relation(std::string_view word);

/// Relation that holds after swapping subject and target. `in` and `corner`
/// have no converse word. Note the asymmetric pair: on -> under, under -> on,
/// above -> under.
std::optional<SpatialRelation> inverse_relation(SpatialRelation rel);

/// Relations whose subject rests on the target's top face.
bool is_support_relation(SpatialRelation rel);

/// Relations that put the subject on the ground beside the target.
bool is_ground_relation(SpatialRelation rel);

inline std::size_t vocabulary_index(SpatialRelation rel) { return static_cast<std::size_t>(rel); }

}  // namespace causalstruct
