#include "toolweave/prompts.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace toolweave {

namespace {

constexpr std::string_view kPlaceholderTail = "Input: x\nOutput:";

const char* kQaPrompt =
    R"pr(Your task is to add calls to a Question Answering API to a piece of text. The questions should help you get information required to complete the text. You can call the API by writing "[QA(question)]" where "question" is the question you want to ask. Here are some examples of API calls:
Input: Joe Biden was born in Scranton, Pennsylvania.
Output: Joe Biden was born in [QA("Where was Joe Biden born?")] Scranton, [QA("In which state is Scranton?")] Pennsylvania.

Input: Coca-Cola, or Coke, is a carbonated soft drink manufactured by the Coca-Cola Company.
Output: Coca-Cola, or [QA("What other name is Coca-Cola known by?")] Coke, is a carbonated soft drink manufactured by [QA("Who manufactures Coca-Cola?")] the Coca-Cola Company.

Input: x
Output:)pr";

const char* kCalculatorPrompt =
    R"pr(Your task is to add calls to a Calculator API to a piece of text. The calls should help you get information required to complete the text. You can call the API by writing "[Calculator(expression)]" where "expression" is the expression to be computed. Here are some examples of API calls:
Input: The number in the next term is 18 + 12 x 3 = 54.
Output: The number in the next term is 18 + 12 x 3 = [Calculator(18 + 12 * 3)] 54.

Input: The population is 658,893 people. This is 11.4
Output: The population is 658,893 people. This is 11.4

Input: A total of 252 qualifying matches were played, and 723 goals were scored (an average of 2.87 per match). This is three times less than the 2169 goals last year.
Output: A total of 252 qualifying matches were played, and 723 goals were scored (an average of [Calculator(723 / 252)] 2.87 per match). This is twenty goals more than the [Calculator(723 - 20)] 703 goals last year.

Input: I went to Paris in 1994 and stayed there until 2011, so in total, it was 17 years.
Output: I went to Paris in 1994 and stayed there until 2011, so in total, it was [Calculator(2011 - 1994)] 17 years.

Input: From this, we have 4 * 30 minutes = 120 minutes.
Output: From this, we have 4 * 30 minutes = [Calculator(4 * 30)] 120 minutes.

Input: x
Output:)pr";

const char* kWikiSearchPrompt =
    R"pr(Your task is to complete a given piece of text. You can use a Wikipedia Search API to look up information. You can do so by writing "[WikiSearch(term)]" where "term" is the search term you want to look up. Here are some examples of API calls:
Input: The colors on the flag of Ghana have the following meanings: red is for the blood of martyrs, green for forests, and gold for mineral wealth.
Output: The colors on the flag of Ghana have the following meanings: red is for [WikiSearch("Ghana flag red meaning")] the blood of martyrs, green for forests, and gold for mineral wealth.

Input: But what are the risks during production of nanomaterials? Some nanomaterials may give rise to various kinds of lung damage.
Output: But what are the risks during production of nanomaterials? [WikiSearch("nanomaterial production risks")] Some nanomaterials may give rise to various kinds of lung damage.

Input: Metformin is the first-line drug for patients with type 2 diabetes and obesity.
Output: Metformin is the first-line drug for [WikiSearch("Metformin first-line drug")] patients with type 2 diabetes and obesity.

Input: x
Output:)pr";

// NOTE: several template lines end in a space; they are byte-exact and a
// test pins them, so do not "clean up" trailing whitespace here.
const char* kMtPrompt =
    R"pr(Your task is to complete a given piece of text by using a Machine Translation API.
You can do so by writing "[MT(text)]" where text is the text to be translated into English. 
Here are some examples:

Input: He has published one book: O homem suprimido (“The Supressed Man”)
Output: He has published one book: O homem suprimido [MT(O homem suprimido)] (“The Supressed Man”) 

Input: In Morris de Jonge’s Jeschuah, der klassische jüdische Mann, there is a description of a Jewish writer
Output: In Morris de Jonge’s Jeschuah, der klassische jüdische Mann [MT(der klassische jüdische Mann)], there is a description of a Jewish writer

Input: 南京高淳县住房和城乡建设局 城市新区设计 a plane of reference Gaochun is one of seven districts of the provincial capital Nanjing 
Output: [MT(南京高淳县住房和城乡建设局 城市新区设计)] a plane of reference Gaochun is one of seven districts of the provincial capital Nanjing 

Input: x
Output:)pr";

const char* kCalendarPrompt =
    R"pr(Your task is to add calls to a Calendar API to a piece of text. The API calls should help you get information required to complete the text. You can call the API by writing "[Calendar()]" Here are some examples of API calls:

Input: Today is the first Friday of the year.
Output: Today is the first [Calendar()] Friday of the year.

Input: The president of the United States is Joe Biden.
Output: The president of the United States is [Calendar()] Joe Biden.

Input: The current day of the week is Wednesday. 
Output: The current day of the week is [Calendar()] Wednesday.

Input: The number of days from now until Christmas is 30. 
Output: The number of days from now until Christmas is [Calendar()] 30.

Input: The store is never open on the weekend, so today it is closed. 
Output: The store is never open on the weekend, so today [Calendar()] it is closed.

Input: x
Output:)pr";

}  // namespace

ToolPrompt::ToolPrompt(std::string tool_id, std::string text)
    : tool(std::move(tool_id)), template_text(std::move(text)) {
    if (template_text.size() < kPlaceholderTail.size() ||
        template_text.compare(template_text.size() - kPlaceholderTail.size(),
                              kPlaceholderTail.size(), kPlaceholderTail) != 0)
        throw std::invalid_argument("prompt for " + tool +
                                    " must end with \"Input: x\\nOutput:\"");
    // The placeholder must be unique.
    size_t occurrences = 0;
    for (size_t pos = template_text.find("\nInput: x\n"); pos != std::string::npos;
         pos = template_text.find("\nInput: x\n", pos + 1))
        ++occurrences;
    if (occurrences != 1)
        throw std::invalid_argument("prompt for " + tool + " must have exactly one placeholder");
}

std::string ToolPrompt::instantiate(std::string_view doc_text) const {
    std::string out = template_text.substr(
        0, template_text.size() - kPlaceholderTail.size());
    out += "Input: ";
    out += doc_text;
    out += "\nOutput:";
    return out;
}

const ToolPrompt& builtin_prompt(std::string_view tool) {
    static const std::vector<ToolPrompt> prompts = [] {
        std::vector<ToolPrompt> v;
        v.emplace_back("QA", kQaPrompt);
        v.emplace_back("Calculator", kCalculatorPrompt);
        v.emplace_back("WikiSearch", kWikiSearchPrompt);
        v.emplace_back("MT", kMtPrompt);
        v.emplace_back("Calendar", kCalendarPrompt);
        return v;
    }();
    for (const auto& p : prompts)
        if (p.tool == tool) return p;
    throw std::out_of_range("no builtin prompt for tool " + std::string(tool));
}

std::vector<std::string> builtin_prompt_tools() {
    return {"QA", "Calculator", "WikiSearch", "MT", "Calendar"};
}

ToolPrompt load_prompt(std::string tool_id, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return ToolPrompt(std::move(tool_id), buf.str());
}

}  // namespace toolweave
