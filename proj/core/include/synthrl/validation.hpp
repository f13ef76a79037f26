#pragma once

#include <string>
#include <vector>

#include "synthrl/model.hpp"

namespace synthrl {

enum class ViolationKind {
  duplicate_name,
  unknown_hobby,
  unknown_occupation,
  bad_date,
  dangling_endpoint,
  self_relation,
  parent_cycle,
  asymmetric_relation,
  multiple_spouses,
  bad_person_id,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

std::string_view to_string(ViolationKind k);

// Every invariant violation of `u`; empty means valid.
std::vector<Violation> validate_universe(const Universe& u);

}  // namespace synthrl
