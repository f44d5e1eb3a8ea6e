#include "causal/corpus.hpp"

#include "causal/error.hpp"
#include "corpus_text.hpp"

namespace causal {

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries{
        {"fig1", std::string(corpus_text::fig1), {"A", "C", {}}, "confounder"},
        {"flood", std::string(corpus_text::flood), {"N", "F", {}}, "confounder"},
        {"bridges", std::string(corpus_text::bridges), {"L", "S", {}}, "collider"},
        {"quake", std::string(corpus_text::quake), {"E", "D", {}}, "mediator+instrument"},
        {"fire", std::string(corpus_text::fire), {"G", "Y", {}}, "moderator"},
    };
    return entries;
}

const CorpusEntry& corpus_entry(std::string_view id) {
    for (const auto& e : corpus())
        if (e.id == id) return e;
    throw Error(ErrorCode::UnknownCase, "unknown corpus case '" + std::string(id) + "'");
}

DagDocument load_corpus(std::string_view id) { return parse_document(corpus_entry(id).text); }

}  // namespace causal
