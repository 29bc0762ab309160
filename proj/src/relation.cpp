#include "causalstruct/relation.hpp"

#include <string>

#include "causalstruct/error.hpp"

namespace causalstruct {

namespace {

constexpr std::array<std::string_view, kRelationCount> kWords = {
    "above",     "under",      "in",        "on",         "front",
    "left",      "right",      "corner",    "behind",     "left_front",
    "right_front", "left_back", "right_back", "left_on",  "right_on",
};

}  // namespace

std::string_view to_string(SpatialRelation rel) { return kWords[vocabulary_index(rel)]; }

std::optional<SpatialRelation> try_parse_relation(std::string_view word) {
  for (std::size_t i = 0; i < kWords.size(); ++i) {
    if (kWords[i] == word) return kAllRelations[i];
  }
  return std::nullopt;
}

SpatialRelation parse_relation(std::string_view word) {
  if (auto rel = try_parse_relation(word)) return *rel;
  fail(ErrorKind::UnknownRelation, "'" + std::string(word) + "' is not a relation word");
}

std::optional<SpatialRelation> inverse_relation(SpatialRelation rel) {
  using R = SpatialRelation;
  switch (rel) {
    case R::above: return R::under;
    case R::under: return R::on;
    case R::on: return R::under;
    case R::left: return R::right;
    case R::right: return R::left;
    case R::front: return R::behind;
    case R::behind: return R::front;
    case R::left_front: return R::right_back;
    case R::right_back: return R::left_front;
    case R::right_front: return R::left_back;
    case R::left_back: return R::right_front;
    case R::left_on: return R::right_on;
    case R::right_on: return R::left_on;
    case R::in:
    case R::corner: return std::nullopt;
  }
  return std::nullopt;
}

bool is_support_relation(SpatialRelation rel) {
  return rel == SpatialRelation::on || rel == SpatialRelation::left_on ||
         rel == SpatialRelation::right_on || rel == SpatialRelation::corner;
}

bool is_ground_relation(SpatialRelation rel) {
  switch (rel) {
    case SpatialRelation::front:
    case SpatialRelation::left:
    case SpatialRelation::right:
    case SpatialRelation::behind:
    case SpatialRelation::left_front:
    case SpatialRelation::right_front:
    case SpatialRelation::left_back:
    case SpatialRelation::right_back: return true;
    default: return false;
  }
}

}  // namespace causalstruct
