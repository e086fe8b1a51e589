#include "toolweave/langid.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace toolweave {

namespace {

// Small prose samples used to build the embedded frequency profiles.
constexpr const char* kEnglishSample =
    "The quick brown fox jumps over the lazy dog. It was the best of times, and the "
    "weather today is rather pleasant. People often walk through the park in the "
    "morning, reading newspapers and drinking coffee. The history of the English "
    "language begins with the arrival of settlers on the island, and over the "
    "centuries it has borrowed many words from other languages. This is a plain "
    "sample of ordinary English prose written for frequency profiling, with the "
    "usual mixture of short and long words that such text contains.";

constexpr const char* kFrenchSample =
    "Le renard brun saute par-dessus le chien paresseux. C'était le meilleur des "
    "temps, et aujourd'hui le temps est plutôt agréable. Les gens se promènent "
    "souvent dans le parc le matin, en lisant les journaux et en buvant du café. "
    "L'histoire de la langue française commence avec l'arrivée des colons sur "
    "l'île, et au fil des siècles elle a emprunté de nombreux mots à d'autres "
    "langues. La sûreté nucléaire est une question très importante pour toute la "
    "société française d'aujourd'hui.";

constexpr const char* kGermanSample =
    "Der braune Fuchs springt über den faulen Hund. Es war die beste aller Zeiten, "
    "und das Wetter ist heute ziemlich angenehm. Die Leute gehen morgens oft durch "
    "den Park, lesen Zeitungen und trinken Kaffee. Die Geschichte der deutschen "
    "Sprache beginnt mit der Ankunft der Siedler auf der Insel, und im Laufe der "
    "Jahrhunderte hat sie viele Wörter aus anderen Sprachen übernommen. Der "
    "klassische jüdische Mann ist der Titel eines Buches, das häufig als Beispiel "
    "genannt wird.";

constexpr const char* kSpanishSample =
    "El zorro marrón salta sobre el perro perezoso. Era el mejor de los tiempos, y "
    "hoy el clima es bastante agradable. La gente suele caminar por el parque por "
    "la mañana, leyendo periódicos y bebiendo café. La historia de la lengua "
    "española comienza con la llegada de los colonos a la isla, y a lo largo de "
    "los siglos ha tomado prestadas muchas palabras de otras lenguas. El año "
    "pasado los niños pequeños aprendieron canciones nuevas en la escuela del "
    "pueblo.";

constexpr const char* kPortugueseSample =
    "A raposa marrom salta sobre o cão preguiçoso. Era o melhor dos tempos, e hoje "
    "o clima está bastante agradável. As pessoas costumam caminhar pelo parque "
    "pela manhã, lendo jornais e bebendo café. A história da língua portuguesa "
    "começa com a chegada dos colonos à ilha, e ao longo dos séculos ela tomou "
    "emprestadas muitas palavras de outras línguas. O homem suprimido é o título "
    "de um livro que não costuma faltar nos exemplos.";

constexpr const char* kChineseSample =
    "敏捷的棕色狐狸跳过了懒惰的狗。这是最好的时代，今天的天气相当宜人。"
    "人们常常在早晨穿过公园，一边看报纸一边喝咖啡。汉语的历史始于移民到达"
    "这座岛屿，几个世纪以来它从其他语言借用了许多词汇。南京高淳县住房和城"
    "乡建设局城市新区设计就是其中一个例子。";

char lower_byte(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// All byte trigrams of the lowercased text, packed into 24 bits.
std::vector<uint32_t> trigrams_of(std::string_view text) {
    std::vector<uint32_t> out;
    if (text.size() < 3) return out;
    out.reserve(text.size() - 2);
    for (size_t i = 0; i + 3 <= text.size(); ++i) {
        uint32_t t = 0;
        for (size_t k = 0; k < 3; ++k)
            t = (t << 8) | static_cast<unsigned char>(lower_byte(text[i + k]));
        out.push_back(t);
    }
    return out;
}

}  // namespace

TrigramLangId::TrigramLangId(double alpha) : alpha_(alpha) {
    add_language("en", kEnglishSample);
    add_language("fr", kFrenchSample);
    add_language("de", kGermanSample);
    add_language("es", kSpanishSample);
    add_language("pt", kPortugueseSample);
    add_language("zh", kChineseSample);
}

TrigramLangId TrigramLangId::without_builtin(double alpha) {
    TrigramLangId id(alpha);
    id.profiles_.clear();
    id.seen_trigrams_.clear();
    return id;
}

void TrigramLangId::add_language(const std::string& code, std::string_view sample_text) {
    Profile& p = profiles_[code];
    for (uint32_t t : trigrams_of(sample_text)) {
        ++p.counts[t];
        ++p.total;
        seen_trigrams_.insert(t);
    }
}

LangIdResult TrigramLangId::detect(std::string_view text) const {
    const std::vector<uint32_t> grams = trigrams_of(text);
    if (grams.empty() || profiles_.empty()) return {"und", 0.0};

    // Smoothed log-likelihood per language; the +1 in the denominator's
    // vocabulary size reserves mass for unseen trigrams.
    const double space = static_cast<double>(seen_trigrams_.size() + 1);
    std::vector<std::pair<std::string, double>> scores;
    scores.reserve(profiles_.size());
    for (const auto& [code, profile] : profiles_) {
        double ll = 0.0;
        const double denom = static_cast<double>(profile.total) + alpha_ * space;
        for (uint32_t t : grams) {
            auto it = profile.counts.find(t);
            const double c = it == profile.counts.end() ? 0.0 : static_cast<double>(it->second);
            ll += std::log((c + alpha_) / denom);
        }
        scores.emplace_back(code, ll);
    }
    std::sort(scores.begin(), scores.end());

    double max_ll = scores.front().second;
    for (const auto& [code, ll] : scores) max_ll = std::max(max_ll, ll);
    double z = 0.0;
    for (const auto& [code, ll] : scores) z += std::exp(ll - max_ll);

    const std::pair<std::string, double>* best = &scores.front();
    for (const auto& s : scores)
        if (s.second > best->second) best = &s;
    return {best->first, std::exp(best->second - max_ll) / z};
}

}  // namespace toolweave
