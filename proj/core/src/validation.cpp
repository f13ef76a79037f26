#include "synthrl/validation.hpp"

#include <cctype>
#include <map>
#include <set>
#include <utility>

#include "synthrl/vocabulary.hpp"

namespace synthrl {
namespace {

bool is_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  const int month = (s[5] - '0') * 10 + (s[6] - '0');
  const int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::string describe(const RelationEdge& e) {
  return std::string(to_string(e.kind)) + "(" + std::to_string(e.from.value) + "->" + std::to_string(e.to.value) + ")";
}

}  // namespace

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::duplicate_name: return "duplicate_name";
    case ViolationKind::unknown_hobby: return "unknown_hobby";
    case ViolationKind::unknown_occupation: return "unknown_occupation";
    case ViolationKind::bad_date: return "bad_date";
    case ViolationKind::dangling_endpoint: return "dangling_endpoint";
    case ViolationKind::self_relation: return "self_relation";
    case ViolationKind::parent_cycle: return "parent_cycle";
    case ViolationKind::asymmetric_relation: return "asymmetric_relation";
    case ViolationKind::multiple_spouses: return "multiple_spouses";
    case ViolationKind::bad_person_id: return "bad_person_id";
  }
  return "?";
}

std::vector<Violation> validate_universe(const Universe& u) {
  std::vector<Violation> out;
  const std::size_t n = u.persons.size();

  std::set<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    const Person& p = u.persons[i];
    if (p.id.value != i) out.push_back({ViolationKind::bad_person_id, p.full_name});
    if (!names.insert(p.full_name).second) out.push_back({ViolationKind::duplicate_name, p.full_name});
    if (!vocab::is_hobby(p.hobby)) out.push_back({ViolationKind::unknown_hobby, p.full_name + ": " + p.hobby});
    if (!vocab::is_occupation(p.occupation)) {
      out.push_back({ViolationKind::unknown_occupation, p.full_name + ": " + p.occupation});
    }
    if (!is_iso_date(p.date_of_birth)) out.push_back({ViolationKind::bad_date, p.full_name + ": " + p.date_of_birth});
  }

  std::set<std::tuple<RelationKind, std::uint32_t, std::uint32_t>> edges;
  std::vector<std::vector<std::uint32_t>> children(n);
  std::map<std::uint32_t, std::set<std::uint32_t>> spouses;
  for (const auto& e : u.relations) {
    if (e.from.value >= n || e.to.value >= n) {
      out.push_back({ViolationKind::dangling_endpoint, describe(e)});
      continue;
    }
    if (e.from == e.to) {
      out.push_back({ViolationKind::self_relation, describe(e)});
      continue;
    }
    edges.emplace(e.kind, e.from.value, e.to.value);
    if (e.kind == RelationKind::parent_of) children[e.from.value].push_back(e.to.value);
    if (e.kind == RelationKind::spouse_of) spouses[e.from.value].insert(e.to.value);
  }

  for (const auto& [kind, from, to] : edges) {
    if (kind == RelationKind::parent_of) continue;
    if (!edges.count({kind, to, from})) {
      out.push_back({ViolationKind::asymmetric_relation, describe({kind, PersonId{from}, PersonId{to}})});
    }
  }
  for (const auto& [person, partners] : spouses) {
    if (partners.size() > 1) out.push_back({ViolationKind::multiple_spouses, u.persons[person].full_name});
  }

  // Three-colour DFS over parent_of edges.
  std::vector<int> colour(n, 0);
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (colour[root] != 0) continue;
    stack.emplace_back(root, 0);
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < children[node].size()) {
        const std::uint32_t child = children[node][next++];
        if (colour[child] == 1) {
          out.push_back({ViolationKind::parent_cycle,
                         u.persons[child].full_name + " is their own ancestor"});
        } else if (colour[child] == 0) {
          colour[child] = 1;
          stack.emplace_back(child, 0);
        }
      } else {
        colour[node] = 2;
        stack.pop_back();
      }
    }
  }
  return out;
}

}  // namespace synthrl
