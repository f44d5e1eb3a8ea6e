#include "causal/dsl.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

namespace causal {

std::string format_real(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out += c;
        }
    }
    out += '"';
    return out;
}

std::string attr_list(const std::optional<double>& coef, const std::optional<std::string>& label) {
    std::vector<std::string> parts;
    if (coef) parts.push_back("coef=" + format_real(*coef));
    if (label) parts.push_back("label=" + quote(*label));
    if (parts.empty()) return "";
    std::string out = " [";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ", ";
        out += parts[i];
    }
    return out + "]";
}

template <typename Map, typename Key>
auto lookup(const Map& map, const Key& key) -> std::optional<typename Map::mapped_type> {
    auto it = map.find(key);
    if (it == map.end()) return std::nullopt;
    return it->second;
}

}  // namespace

std::string serialize(const DagDocument& doc) {
    std::ostringstream out;
    const auto& dag = doc.dag;
    out << "dag " << doc.name << " {\n";
    for (const auto& n : dag.nodes()) out << "  " << n.name << attr_list(std::nullopt, n.label) << "\n";
    for (const auto& e : dag.edges()) {
        out << "  " << e.from << " -> " << e.to
            << attr_list(lookup(doc.coefficients, e), lookup(doc.edge_labels, e)) << "\n";
    }
    for (const auto& m : dag.moderations()) {
        out << "  " << m.moderator << " ~> (" << m.target_from << " -> " << m.target_to << ")"
            << attr_list(lookup(doc.moderation_coefficients, m), lookup(doc.moderation_labels, m)) << "\n";
    }
    for (const auto& n : dag.nodes())
        if (n.latent) out << "  latent " << n.name << "\n";
    for (const auto& n : dag.nodes()) {
        if (auto v = lookup(doc.noise, n.name)) out << "  noise " << n.name << " " << format_real(*v) << "\n";
    }
    if (doc.exposure) out << "  exposure " << *doc.exposure << "\n";
    if (doc.outcome) out << "  outcome " << *doc.outcome << "\n";
    for (const auto& a : doc.adjusted) out << "  adjusted " << a << "\n";
    out << "}\n";
    return out.str();
}

namespace {

bool is_dot_keyword(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s == "node" || s == "edge" || s == "graph" || s == "digraph" || s == "subgraph" || s == "strict";
}

std::string dot_id(const std::string& name) { return is_dot_keyword(name) ? quote(name) : name; }

struct Style {
    const char* fill;
    const char* role;
};

std::optional<Style> style_for(const std::string& name, const DotHighlights& h) {
    if (h.exposure == name) return Style{"lightblue", "exposure"};
    if (h.outcome == name) return Style{"lightgreen", "outcome"};
    if (h.confounders.count(name)) return Style{"salmon", "confounder"};
    if (h.colliders.count(name)) return Style{"gold", "collider"};
    if (h.mediators.count(name)) return Style{"plum", "mediator"};
    if (h.instruments.count(name)) return Style{"lightgrey", "instrument"};
    return std::nullopt;
}

}  // namespace

std::string to_dot(const DagDocument& doc, const DotHighlights* highlights) {
    const auto& dag = doc.dag;
    std::ostringstream out;
    out << "digraph " << quote(doc.name) << " {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=ellipse, fontsize=12];\n";
    for (const auto& n : dag.nodes()) {
        std::vector<std::string> attrs;
        if (n.label) attrs.push_back("label=" + quote(n.name + "\n" + *n.label));
        if (n.latent) attrs.push_back("style=dashed");
        if (highlights) {
            if (auto s = style_for(n.name, *highlights)) {
                attrs.push_back(std::string("style=") + (n.latent ? "\"filled,dashed\"" : "filled"));
                attrs.push_back(std::string("fillcolor=") + s->fill);
                attrs.push_back(std::string("tooltip=") + quote(s->role));
                if (n.latent) attrs.erase(std::find(attrs.begin(), attrs.end(), "style=dashed"));
            }
        }
        out << "  " << dot_id(n.name);
        if (!attrs.empty()) {
            out << " [";
            for (std::size_t i = 0; i < attrs.size(); ++i) out << (i ? ", " : "") << attrs[i];
            out << "]";
        }
        out << ";\n";
    }

    // Each moderated edge is split at an invisible midpoint node so that the
    // moderator's dashed arrow has something to land on.
    std::map<Edge, std::string> midpoint;
    for (const auto& m : dag.moderations()) {
        auto e = m.target();
        if (midpoint.count(e)) continue;
        std::string id = "mod_" + e.from + "_" + e.to;
        while (dag.contains(id)) id += "_";
        midpoint[e] = id;
    }

    for (const auto& e : dag.edges()) {
        auto label = lookup(doc.edge_labels, e);
        std::string label_attr = label ? "label=" + quote(*label) : "";
        if (auto mid = midpoint.find(e); mid != midpoint.end()) {
            out << "  " << mid->second << " [shape=point, width=0.05];\n";
            out << "  " << dot_id(e.from) << " -> " << mid->second << " [arrowhead=none"
                << (label ? ", " + label_attr : "") << "];\n";
            out << "  " << mid->second << " -> " << dot_id(e.to) << ";\n";
        } else {
            out << "  " << dot_id(e.from) << " -> " << dot_id(e.to);
            if (label) out << " [" << label_attr << "]";
            out << ";\n";
        }
    }
    for (const auto& m : dag.moderations()) {
        out << "  " << dot_id(m.moderator) << " -> " << midpoint.at(m.target()) << " [style=dashed";
        if (auto label = lookup(doc.moderation_labels, m)) out << ", label=" << quote(*label);
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace causal
