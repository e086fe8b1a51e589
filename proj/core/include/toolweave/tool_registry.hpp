#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolweave/calendar_date.hpp"
#include "toolweave/clients.hpp"
#include "toolweave/langid.hpp"
#include "toolweave/search.hpp"
#include "toolweave/types.hpp"

namespace toolweave {

// Ambient state a tool may need: the calendar answers with `today`, which is
// the document date during annotation and the (possibly overridden) session
// date at inference.
struct ToolContext {
    std::optional<Date> today;
};

struct ToolSpec {
    std::string id;
    bool requires_input = true;
    std::function<std::optional<std::string>(std::string_view, const ToolContext&)> execute;
};

class ToolRegistry {
public:
    void register_tool(ToolSpec spec);
    bool has(std::string_view id) const;
    const ToolSpec* find(std::string_view id) const;
    std::vector<std::string> tool_names() const;  // sorted

    // Executes a call; unknown tool or tool failure yields nothing. Results
    // are always single-line.
    std::optional<std::string> execute(const ApiCall& call,
                                       const ToolContext& ctx = {}) const;

private:
    std::map<std::string, ToolSpec, std::less<>> tools_;
};

// Wires up the five standard tools. Calculator and Calendar are always
// present; WikiSearch, QA, and MT are registered only when their
// dependencies are supplied.
struct RegistryConfig {
    std::shared_ptr<const SearchIndex> index;
    ServiceClientPtr qa_client;
    ServiceClientPtr mt_client;
    std::shared_ptr<const LangId> langid;
    double mt_min_confidence = 0.8;
};

ToolRegistry standard_registry(const RegistryConfig& cfg);

}  // namespace toolweave
