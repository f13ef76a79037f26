#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "synthrl/model.hpp"

// Closed word lists shared by the generators.
namespace synthrl::vocab {

std::span<const std::string_view> given_names(Gender g);
std::span<const std::string_view> surnames();
std::span<const std::string_view> hobbies();
std::span<const std::string_view> occupations();

bool is_hobby(std::string_view s);
bool is_occupation(std::string_view s);

// Single first names used by the family and knights puzzles. Disjoint by
// gender so a narrative name determines the person's gender.
std::span<const std::string_view> puzzle_names(Gender g);
std::optional<Gender> puzzle_name_gender(std::string_view name);

}  // namespace synthrl::vocab
