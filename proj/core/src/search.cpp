#include "toolweave/search.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "toolweave/util.hpp"

namespace toolweave {

std::vector<std::string> SearchIndex::analyze(std::string_view text) {
    std::vector<std::string> terms;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            terms.push_back(current);
            current.clear();
        }
    };
    for (char c : text) {
        unsigned char b = static_cast<unsigned char>(c);
        if (is_ascii_alnum(c) || b >= 0x80) {
            current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
        } else {
            flush();
        }
    }
    flush();
    return terms;
}

SearchIndex SearchIndex::build(const std::vector<WikiPage>& pages, Params params) {
    SearchIndex index;
    index.params_ = params;
    size_t total_length = 0;
    for (const auto& page : pages) {
        for (const auto& sec : page.sections) {
            Section s;
            s.title = page.title;
            s.heading = sec.heading;
            s.text = sec.text;
            const auto terms = analyze(sec.text);
            s.length = terms.size();
            for (const auto& term : terms) ++s.tf[term];
            for (const auto& entry : s.tf)
                index.postings_[entry.first].push_back(
                    static_cast<uint32_t>(index.sections_.size()));
            total_length += s.length;
            index.sections_.push_back(std::move(s));
        }
    }
    index.avg_length_ = index.sections_.empty()
                            ? 0.0
                            : static_cast<double>(total_length) /
                                  static_cast<double>(index.sections_.size());
    return index;
}

double SearchIndex::score(const std::vector<std::string>& terms, size_t section) const {
    if (section >= sections_.size()) throw std::out_of_range("section out of range");
    const Section& s = sections_[section];
    const double n = static_cast<double>(sections_.size());
    double total = 0.0;
    for (const auto& term : terms) {
        auto tf_it = s.tf.find(term);
        if (tf_it == s.tf.end()) continue;
        const double tf = static_cast<double>(tf_it->second);
        auto post_it = postings_.find(term);
        const double df = post_it == postings_.end()
                              ? 0.0
                              : static_cast<double>(post_it->second.size());
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        const double len_norm =
            1.0 - params_.b + params_.b * static_cast<double>(s.length) / avg_length_;
        total += idf * tf * (params_.k1 + 1.0) / (tf + params_.k1 * len_norm);
    }
    return total;
}

std::optional<size_t> SearchIndex::top1(const std::vector<std::string>& terms) const {
    std::vector<uint32_t> candidates;
    for (const auto& term : terms) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        candidates.insert(candidates.end(), it->second.begin(), it->second.end());
    }
    if (candidates.empty()) return std::nullopt;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    size_t best = candidates.front();
    double best_score = score(terms, best);
    for (size_t k = 1; k < candidates.size(); ++k) {
        const double sc = score(terms, candidates[k]);
        if (sc > best_score) {
            best = candidates[k];
            best_score = sc;
        }
    }
    return best;
}

std::string SearchIndex::snippet(size_t section) const {
    if (section >= sections_.size()) throw std::out_of_range("section out of range");
    const Section& s = sections_[section];
    std::string out = s.title;
    out += " > ";
    if (!s.heading.empty()) {
        out += s.heading;
        out += " > ";
    }
    out += single_line(s.text);
    if (out.size() > params_.snippet_chars) {
        size_t cut = out.rfind(' ', params_.snippet_chars);
        if (cut == std::string::npos || cut == 0) cut = params_.snippet_chars;
        out.resize(cut);
        while (!out.empty() && out.back() == ' ') out.pop_back();
    }
    return out;
}

std::optional<std::string> SearchIndex::search(std::string_view query) const {
    auto best = top1(analyze(query));
    if (!best) return std::nullopt;
    return snippet(*best);
}

void SearchIndex::save(const std::string& path) const {
    using ordered_json = nlohmann::ordered_json;
    ordered_json j;
    j["schema"] = "toolweave.index.v1";
    j["k1"] = params_.k1;
    j["b"] = params_.b;
    j["snippet_chars"] = params_.snippet_chars;
    ordered_json sections = ordered_json::array();
    for (const auto& s : sections_) {
        ordered_json o;
        o["title"] = s.title;
        o["heading"] = s.heading;
        o["text"] = s.text;
        sections.push_back(std::move(o));
    }
    j["sections"] = std::move(sections);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump() << '\n';
}

SearchIndex SearchIndex::load(const std::string& path) {
    using ordered_json = nlohmann::ordered_json;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    ordered_json j = ordered_json::parse(in, nullptr, false);
    if (j.is_discarded() || j.value("schema", "") != "toolweave.index.v1")
        throw std::runtime_error("not a toolweave.index.v1 file: " + path);
    Params params;
    params.k1 = j.at("k1").get<double>();
    params.b = j.at("b").get<double>();
    params.snippet_chars = j.at("snippet_chars").get<size_t>();
    // One synthetic page per section; postings are rebuilt, which is
    // deterministic for the same stored sections.
    std::vector<WikiPage> pages;
    for (const auto& o : j.at("sections")) {
        WikiPage page;
        page.title = o.at("title").get<std::string>();
        page.sections.push_back(
            {o.at("heading").get<std::string>(), o.at("text").get<std::string>()});
        pages.push_back(std::move(page));
    }
    return build(pages, params);
}

std::vector<WikiPage> load_kilt_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<WikiPage> pages;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw std::runtime_error("malformed page record: " + line);
        WikiPage page;
        page.id = j.at("id").get<std::string>();
        page.title = j.at("title").get<std::string>();
        for (const auto& s : j.at("sections"))
            page.sections.push_back({s.value("heading", std::string()),
                                     s.at("text").get<std::string>()});
        pages.push_back(std::move(page));
    }
    return pages;
}

}  // namespace toolweave
