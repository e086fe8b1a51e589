#include "toolweave/tool_registry.hpp"

#include "toolweave/calculator.hpp"
#include "toolweave/util.hpp"

namespace toolweave {

void ToolRegistry::register_tool(ToolSpec spec) {
    tools_[spec.id] = std::move(spec);
}

bool ToolRegistry::has(std::string_view id) const {
    return tools_.find(id) != tools_.end();
}

const ToolSpec* ToolRegistry::find(std::string_view id) const {
    auto it = tools_.find(id);
    return it == tools_.end() ? nullptr : &it->second;
}

std::vector<std::string> ToolRegistry::tool_names() const {
    std::vector<std::string> names;
    names.reserve(tools_.size());
    for (const auto& [id, spec] : tools_) names.push_back(id);
    return names;
}

std::optional<std::string> ToolRegistry::execute(const ApiCall& call,
                                                 const ToolContext& ctx) const {
    const ToolSpec* spec = find(call.tool);
    if (!spec) return std::nullopt;
    auto result = spec->execute(call.input, ctx);
    if (!result) return std::nullopt;
    return single_line(*result);
}

ToolRegistry standard_registry(const RegistryConfig& cfg) {
    ToolRegistry registry;

    registry.register_tool(
        {"Calculator", true,
         [](std::string_view input, const ToolContext&) { return calc_eval(input); }});

    registry.register_tool(
        {"Calendar", false,
         [](std::string_view, const ToolContext& ctx) -> std::optional<std::string> {
             if (!ctx.today) return std::nullopt;
             return calendar_line(*ctx.today);
         }});

    if (cfg.index) {
        auto index = cfg.index;
        registry.register_tool(
            {"WikiSearch", true, [index](std::string_view input, const ToolContext&) {
                 return index->search(input);
             }});
    }

    if (cfg.qa_client) {
        auto client = cfg.qa_client;
        registry.register_tool(
            {"QA", true, [client](std::string_view input, const ToolContext&) {
                 return qa_ask(*client, input);
             }});
    }

    if (cfg.mt_client && cfg.langid) {
        auto client = cfg.mt_client;
        auto langid = cfg.langid;
        const double conf = cfg.mt_min_confidence;
        registry.register_tool(
            {"MT", true, [client, langid, conf](std::string_view input, const ToolContext&) {
                 return mt_translate(*client, *langid, input, conf);
             }});
    }

    return registry;
}

}  // namespace toolweave
