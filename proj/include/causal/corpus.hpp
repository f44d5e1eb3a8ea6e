#pragma once

#include "causal/dsl.hpp"
#include "causal/paths.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace causal {

// The five bundled case-study diagrams (fig1, flood, bridges, quake, fire).
// Texts are compiled in from corpus/*.dag.
struct CorpusEntry {
    std::string id;
    std::string text;
    CausalQuery default_query;
    std::string headline_role;  // confounder, collider, mediator+instrument, moderator, ...
};

const std::vector<CorpusEntry>& corpus();
const CorpusEntry& corpus_entry(std::string_view id);  // throws UnknownCase
DagDocument load_corpus(std::string_view id);

}  // namespace causal
