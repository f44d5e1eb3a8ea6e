#pragma once

#include "causal/graph.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

// A parsed `.dag` file: the graph plus optional query markers and SCM
// parameters.
//
// Grammar (whitespace and newlines are insignificant outside strings,
// `#` comments run to end of line):
//
//   doc       := 'dag' ID '{' stmt* '}'
//   stmt      := nodeDecl | edgeDecl | modDecl | marker | noiseDecl
//   nodeDecl  := ID attrs?
//   edgeDecl  := ID '->' ID attrs?
//   modDecl   := ID '~>' '(' ID '->' ID ')' attrs?
//   marker    := ('exposure' | 'outcome' | 'adjusted' | 'latent') ID
//   noiseDecl := 'noise' ID REAL
//   attrs     := '[' key '=' value (',' key '=' value)* ']'   key in {label, coef}
//
// Nodes first seen in an edge are declared implicitly. The words dag,
// exposure, outcome, adjusted, latent and noise are reserved.
struct DagDocument {
    std::string name;
    Dag dag;
    std::optional<std::string> exposure;
    std::optional<std::string> outcome;
    std::vector<std::string> adjusted;  // canonical order
    std::map<Edge, double> coefficients;
    std::map<Edge, std::string> edge_labels;
    std::map<Moderation, double> moderation_coefficients;
    std::map<Moderation, std::string> moderation_labels;
    std::map<std::string, double> noise;

    bool operator==(const DagDocument&) const = default;
};

bool is_reserved_word(std::string_view word);

// Throws ParseError (SyntaxError or SemanticError) with a 1-based location.
DagDocument parse_document(std::string_view text);

// Canonical text: nodes in canonical order, one statement per line.
std::string serialize(const DagDocument& doc);

// Role colouring for to_dot; every set holds node names.
struct DotHighlights {
    std::optional<std::string> exposure;
    std::optional<std::string> outcome;
    std::set<std::string> confounders;
    std::set<std::string> colliders;
    std::set<std::string> mediators;
    std::set<std::string> instruments;
};

std::string to_dot(const DagDocument& doc, const DotHighlights* highlights = nullptr);

// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);

}  // namespace causal
