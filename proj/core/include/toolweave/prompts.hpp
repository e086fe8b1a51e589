#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace toolweave {

// A few-shot annotation prompt for one tool. The template ends with the
// placeholder lines "Input: x\nOutput:"; instantiating replaces that x with
// the document text, which the model then reproduces with calls inserted.
struct ToolPrompt {
    std::string tool;
    std::string template_text;

    ToolPrompt(std::string tool_id, std::string text);

    std::string instantiate(std::string_view doc_text) const;
};

// The bundled prompt for one of the five standard tools; throws on an
// unknown tool id.
const ToolPrompt& builtin_prompt(std::string_view tool);
std::vector<std::string> builtin_prompt_tools();

// Reads a template from a file (exact bytes; the trailing placeholder must
// be present).
ToolPrompt load_prompt(std::string tool_id, const std::string& path);

}  // namespace toolweave
