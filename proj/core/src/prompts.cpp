#include "synthrl/prompts.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "synthrl/errors.hpp"

namespace synthrl::prompts {

namespace data {
// Defined in the generated embedded_prompts.cpp.
extern const std::string_view phantom_template;
extern const std::string_view phantom_examples;
extern const std::string_view gsm_template;
extern const std::string_view rg_template;
extern const std::string_view rg_family_examples;
extern const std::string_view rg_knights_examples;
}  // namespace data

namespace {

constexpr std::string_view kExamplesBlock = "(START OF EXAMPLES)\n{{examples}}\n(END OF EXAMPLES)";

std::string_view evidence_slot(TemplateKind k) {
  switch (k) {
    case TemplateKind::phantom: return "{{evidence}}";
    case TemplateKind::gsm: return "{{problem}}";
    case TemplateKind::rg: return "";
  }
  return "";
}

// Single pass, so slot-like text inside substituted values is left alone.
std::string render(std::string_view tmpl, const std::map<std::string, std::string_view, std::less<>>& values) {
  std::string out;
  out.reserve(tmpl.size() + 1024);
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) break;
    const auto close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    const auto name = tmpl.substr(open + 2, close - open - 2);
    out.append(tmpl.substr(pos, open - pos));
    if (auto it = values.find(name); it != values.end()) {
      out.append(it->second);
    } else {
      out.append(tmpl.substr(open, close + 2 - open));
    }
    pos = close + 2;
  }
  out.append(tmpl.substr(pos));
  return out;
}

PromptTemplate make(TemplateKind kind, std::string_view text, std::string_view examples) {
  PromptTemplate t{kind, std::string(text), split_examples(examples)};
  t.validate();
  return t;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view to_string(TemplateKind k) {
  switch (k) {
    case TemplateKind::phantom: return "phantom";
    case TemplateKind::gsm: return "gsm";
    case TemplateKind::rg: return "rg";
  }
  return "?";
}

TemplateKind template_kind_for(DatasetKind d) {
  switch (d) {
    case DatasetKind::phantom:
    case DatasetKind::external: return TemplateKind::phantom;
    case DatasetKind::gsm_inf: return TemplateKind::gsm;
    case DatasetKind::rg_family:
    case DatasetKind::rg_knights: return TemplateKind::rg;
  }
  return TemplateKind::phantom;
}

void PromptTemplate::validate() const {
  if (text.find(kExamplesBlock) == std::string::npos) {
    throw TemplateMismatch(std::string(to_string(kind)) + " template lacks the examples block");
  }
  if (text.find("{{question}}") == std::string::npos) {
    throw TemplateMismatch(std::string(to_string(kind)) + " template lacks the {{question}} slot");
  }
  const auto slot = evidence_slot(kind);
  if (!slot.empty() && text.find(slot) == std::string::npos) {
    throw TemplateMismatch(std::string(to_string(kind)) + " template lacks the " + std::string(slot) + " slot");
  }
  if (kind == TemplateKind::rg &&
      (text.find("{{evidence}}") != std::string::npos || text.find("{{problem}}") != std::string::npos)) {
    throw TemplateMismatch("rg template must not have an evidence slot");
  }
}

const PromptTemplate& builtin(TemplateKind kind) {
  static const PromptTemplate phantom = make(TemplateKind::phantom, data::phantom_template, data::phantom_examples);
  static const PromptTemplate gsm = make(TemplateKind::gsm, data::gsm_template, "");
  static const PromptTemplate rg = make(TemplateKind::rg, data::rg_template, "");
  switch (kind) {
    case TemplateKind::phantom: return phantom;
    case TemplateKind::gsm: return gsm;
    case TemplateKind::rg: return rg;
  }
  return phantom;
}

const PromptTemplate& builtin_rg_family() {
  static const PromptTemplate t = make(TemplateKind::rg, data::rg_template, data::rg_family_examples);
  return t;
}

const PromptTemplate& builtin_rg_knights() {
  static const PromptTemplate t = make(TemplateKind::rg, data::rg_template, data::rg_knights_examples);
  return t;
}

const PromptTemplate& builtin_for(DatasetKind d) {
  switch (d) {
    case DatasetKind::rg_family: return builtin_rg_family();
    case DatasetKind::rg_knights: return builtin_rg_knights();
    default: return builtin(template_kind_for(d));
  }
}

std::vector<std::string> split_examples(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = std::string_view::npos;
  std::size_t pos = 0;
  auto is_header = [&](std::size_t at) {
    if (text.substr(at, 8) != "Example ") return false;
    std::size_t i = at + 8;
    const std::size_t digits = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
    return i > digits && i < text.size() && text[i] == ':';
  };
  auto flush = [&](std::size_t end) {
    if (start == std::string_view::npos) return;
    std::string block(text.substr(start, end - start));
    while (!block.empty() && (block.back() == '\n' || block.back() == '\r' || block.back() == ' ')) block.pop_back();
    out.push_back(std::move(block));
  };
  while (pos <= text.size()) {
    if ((pos == 0 || text[pos - 1] == '\n') && is_header(pos)) {
      flush(pos);
      start = pos;
    }
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  flush(text.size());
  return out;
}

PromptTemplate load_template(const std::filesystem::path& dir, TemplateKind kind,
                             std::optional<std::string> examples_name) {
  PromptTemplate t;
  t.kind = kind;
  t.text = read_file(dir / (std::string(to_string(kind)) + "_template.txt"));
  while (!t.text.empty() && t.text.back() == '\n') t.text.pop_back();
  const std::string name = examples_name.value_or(std::string(to_string(kind)));
  const auto examples = dir / (name + "_examples.txt");
  if (std::filesystem::exists(examples)) t.cot_examples = split_examples(read_file(examples));
  try {
    t.validate();
  } catch (const TemplateMismatch& e) {
    throw ParseError(e.what());
  }
  return t;
}

std::string assemble_prompt(const PromptTemplate& tmpl, std::string_view question,
                            std::optional<std::string_view> evidence,
                            const std::vector<std::string>& cot_examples) {
  const auto slot = evidence_slot(tmpl.kind);
  if (!slot.empty() && !evidence) {
    throw TemplateMismatch(std::string(to_string(tmpl.kind)) + " prompts need evidence");
  }
  if (slot.empty() && evidence) throw TemplateMismatch("rg prompts take no evidence");

  std::string examples;
  for (std::size_t i = 0; i < cot_examples.size(); ++i) {
    if (i) examples += "\n\n";
    examples += cot_examples[i];
  }
  std::map<std::string, std::string_view, std::less<>> values{{"question", question}, {"examples", examples}};
  if (evidence) values.emplace(std::string(slot.substr(2, slot.size() - 4)), *evidence);

  std::string text = tmpl.text;
  if (cot_examples.empty()) {
    // The examples slot owns its line; drop the line rather than leave it blank.
    const auto at = text.find("{{examples}}\n");
    if (at != std::string::npos) text.erase(at, 13);
  }
  return render(text, values);
}

std::string assemble_prompt(const Sample& sample, const PromptTemplate& tmpl, std::optional<std::string_view> evidence,
                            const std::vector<std::string>& cot_examples) {
  if (template_kind_for(sample.dataset) != tmpl.kind) {
    throw TemplateMismatch("dataset " + std::string(to_string(sample.dataset)) + " does not use the " +
                           std::string(to_string(tmpl.kind)) + " template");
  }
  return assemble_prompt(tmpl, sample.question_text, evidence, cot_examples);
}

}  // namespace synthrl::prompts
