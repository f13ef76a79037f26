#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synthrl/model.hpp"

namespace synthrl::prompts {

enum class TemplateKind { phantom, gsm, rg };

std::string_view to_string(TemplateKind k);
TemplateKind template_kind_for(DatasetKind d);

// Prompt text with {{evidence}}, {{examples}} and {{question}} slots. The
// examples slot sits on its own line between the example delimiters.
struct PromptTemplate {
  TemplateKind kind = TemplateKind::phantom;
  std::string text;
  std::vector<std::string> cot_examples;

  // Throws TemplateMismatch when delimiters or slots are missing.
  void validate() const;
};

// Templates and worked examples compiled in from core/data/prompts.
const PromptTemplate& builtin(TemplateKind kind);
const PromptTemplate& builtin_rg_family();
const PromptTemplate& builtin_rg_knights();

// Built-in template for a dataset, with its built-in examples (GSM has none
// built in; its examples come from the generated training set).
const PromptTemplate& builtin_for(DatasetKind d);

// Loads <dir>/<kind>_template.txt and, when present, <dir>/<name>_examples.txt
// (examples separated by blank lines before "Example N:"). Throws ParseError.
PromptTemplate load_template(const std::filesystem::path& dir, TemplateKind kind,
                             std::optional<std::string> examples_name = std::nullopt);

// Splits an examples file into "Example N:" blocks.
std::vector<std::string> split_examples(std::string_view text);

// Fills the slots. `evidence` is required for phantom and gsm templates and
// must be absent for rg. Throws TemplateMismatch.
std::string assemble_prompt(const PromptTemplate& tmpl, std::string_view question,
                            std::optional<std::string_view> evidence,
                            const std::vector<std::string>& cot_examples);

// Template kind must match the sample's dataset. Throws TemplateMismatch.
std::string assemble_prompt(const Sample& sample, const PromptTemplate& tmpl,
                            std::optional<std::string_view> evidence,
                            const std::vector<std::string>& cot_examples);

}  // namespace synthrl::prompts
