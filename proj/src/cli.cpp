#include "causal/cli.hpp"

#include "causal/corpus.hpp"
#include "causal/demo.hpp"
#include "causal/diagnostics.hpp"
#include "causal/dsl.hpp"
#include "causal/error.hpp"
#include "causal/identify.hpp"
#include "causal/report.hpp"
#include "causal/scm.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace causal::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20231;
constexpr std::string_view kCorpusPrefix = "corpus:";

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// `corpus:<id>` names a bundled diagram; anything else is a file path.
DagDocument load_document(const std::string& source) {
    if (source.rfind(kCorpusPrefix, 0) == 0) return load_corpus(source.substr(kCorpusPrefix.size()));
    return parse_document(read_file(source));
}

void write_output(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
    if (!path) {
        out << text;
        return;
    }
    std::ofstream file(*path, std::ios::binary);
    if (!file) throw IoError("cannot write '" + *path + "'");
    file << text;
    if (!file) throw IoError("write to '" + *path + "' failed");
}

struct Globals {
    std::string format = "text";
    std::optional<std::uint64_t> seed;

    bool structured() const { return format == "structured"; }
    std::uint64_t seed_or_default() const { return seed.value_or(kDefaultSeed); }
};

json envelope(std::string_view command) { return {{"format_version", kFormatVersion}, {"command", command}}; }

CausalQuery query_for(const DagDocument& doc, const std::string& exposure, const std::string& outcome) {
    CausalQuery q;
    q.exposure = !exposure.empty() ? exposure : doc.exposure.value_or("");
    q.outcome = !outcome.empty() ? outcome : doc.outcome.value_or("");
    if (q.exposure.empty() || q.outcome.empty()) {
        throw Error(ErrorCode::InvalidQuery, "no exposure/outcome given and the document has no markers");
    }
    return q;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

int cmd_validate(const Globals& g, const std::string& file, std::ostream& out) {
    auto doc = load_document(file);
    if (g.structured()) {
        auto j = envelope("validate");
        j["valid"] = true;
        j["name"] = doc.name;
        j["nodes"] = doc.dag.names();
        j["edges"] = doc.dag.edges().size();
        j["moderations"] = doc.dag.moderations().size();
        out << j.dump(2) << "\n";
    } else {
        out << "ok: " << doc.name << " (" << doc.dag.size() << " nodes, " << doc.dag.edges().size() << " edges, "
            << doc.dag.moderations().size() << " moderations)\n";
    }
    return kOk;
}

int cmd_paths(const Globals& g, const std::string& file, const std::string& x, const std::string& y,
              const std::vector<std::string>& conditioned, std::ostream& out) {
    auto doc = load_document(file);
    auto sep = d_separated(doc.dag, x, y, conditioned);
    auto paths = enumerate_paths(doc.dag, x, y);

    if (g.structured()) {
        auto j = envelope("paths");
        j["query"] = to_json(CausalQuery{x, y, conditioned});
        json list = json::array();
        for (const auto& p : paths) {
            auto cls = classify_path(p);
            list.push_back({{"path", to_json(p)},
                            {"kind", std::string(to_string(cls.kind))},
                            {"colliders", cls.colliders},
                            {"blocked", is_blocked(doc.dag, p, conditioned)}});
        }
        j["paths"] = list;
        j["d_separated"] = sep.separated;
        out << j.dump(2) << "\n";
        return kOk;
    }

    out << "paths between " << x << " and " << y << " given " << format_set(conditioned) << ":\n";
    std::size_t width = 4;
    for (const auto& p : paths) width = std::max(width, p.to_string().size() + 2);
    if (paths.empty()) out << "  (none)\n";
    for (std::size_t i = 0; i < paths.size(); ++i) {
        auto cls = classify_path(paths[i]);
        auto colliders = cls.colliders.empty() ? std::string("-") : format_set(cls.colliders);
        out << "  " << pad(std::to_string(i + 1) + ".", 4) << pad(paths[i].to_string(), width)
            << pad(std::string(to_string(cls.kind)), 11) << pad("colliders: " + colliders, 24)
            << (is_blocked(doc.dag, paths[i], conditioned) ? "blocked" : "open") << "\n";
    }
    if (sep.separated) {
        out << "verdict: " << x << " and " << y << " are d-separated\n";
    } else {
        out << "verdict: " << x << " and " << y << " are d-connected (" << sep.open_paths.size() << " open path"
            << (sep.open_paths.size() == 1 ? "" : "s") << ")\n";
        for (const auto& p : sep.open_paths) out << "  open: " << p.to_string() << "\n";
    }
    return kOk;
}

int cmd_roles(const Globals& g, const std::string& file, const std::string& exposure, const std::string& outcome,
              std::ostream& out) {
    auto doc = load_document(file);
    auto query = query_for(doc, exposure, outcome);
    auto report = classify_roles(doc.dag, query);
    if (g.structured()) {
        auto j = envelope("roles");
        j["report"] = to_json(report);
        out << j.dump(2) << "\n";
    } else {
        out << render_text(report);
    }
    return kOk;
}

std::vector<std::string> adjustment_warnings(const RoleReport& roles) {
    std::vector<std::string> warnings;
    for (const auto& c : roles.outcome_colliders) {
        const auto& other = c.path.steps.back().node;
        warnings.push_back(c.node + " is a common effect of " + roles.query.exposure + " and " + other +
                           "; conditioning on " + c.node + " opens a non-causal association between them");
    }
    for (const auto& c : roles.colliders) {
        warnings.push_back(c.node + " is a collider on " + c.path.to_string() +
                           "; conditioning on it or its descendants opens that path");
    }
    return warnings;
}

int cmd_adjust(const Globals& g, const std::string& file, const std::string& exposure, const std::string& outcome,
               std::ostream& out) {
    auto doc = load_document(file);
    auto query = query_for(doc, exposure, outcome);
    auto result = find_adjustment_sets(doc.dag, query);
    auto backdoor = backdoor_paths(doc.dag, query);
    auto warnings = adjustment_warnings(classify_roles(doc.dag, query));
    std::optional<bool> declared_ok;
    if (!doc.adjusted.empty()) declared_ok = satisfies_backdoor(doc.dag, query, doc.adjusted);

    if (g.structured()) {
        auto j = envelope("adjust");
        j["query"] = to_json(query);
        j["result"] = to_json(result);
        json paths = json::array();
        for (const auto& p : backdoor) paths.push_back(to_json(p));
        j["backdoor_paths"] = paths;
        j["warnings"] = warnings;
        if (declared_ok) j["declared_adjustment"] = {{"set", doc.adjusted}, {"valid", *declared_ok}};
        out << j.dump(2) << "\n";
        return kOk;
    }
    out << render_text(result, query);
    out << "backdoor paths:";
    if (backdoor.empty()) out << " none";
    out << "\n";
    for (const auto& p : backdoor) out << "  " << p.to_string() << "\n";
    if (declared_ok) {
        out << "declared adjustment " << format_set(doc.adjusted) << ": " << (*declared_ok ? "valid" : "invalid") << "\n";
    }
    for (const auto& w : warnings) out << "warning: " << w << "\n";
    return kOk;
}

int cmd_demo(const Globals& g, const std::string& case_id, std::size_t n, std::ostream& out) {
    auto report = bias_demo(case_id, {n, g.seed_or_default()});
    if (g.structured()) {
        auto j = envelope("demo");
        j["report"] = to_json(report);
        out << j.dump(2) << "\n";
    } else {
        out << render_text(report);
    }
    return report.passed() ? kOk : kExpectationMismatch;
}

int cmd_simulate(const Globals& g, const std::string& file, std::size_t n, const std::optional<std::string>& path,
                 std::ostream& out) {
    auto doc = load_document(file);
    auto data = simulate(Scm::from_document(doc), n, g.seed_or_default());
    std::ostringstream csv;
    write_csv(csv, data);
    write_output(path, csv.str(), out);
    if (path) {
        if (g.structured()) {
            auto j = envelope("simulate");
            j["rows"] = data.size();
            j["seed"] = data.seed;
            j["out"] = *path;
            out << j.dump(2) << "\n";
        } else {
            out << "wrote " << data.size() << " rows to " << *path << "\n";
        }
    }
    return kOk;
}

int cmd_regress(const Globals& g, const std::string& file, const std::string& response,
                const std::vector<std::string>& predictors, bool unordered, std::ostream& out) {
    std::istringstream in(read_file(file));
    auto data = read_csv(in);
    auto fit = ols(data, response, predictors);
    auto report = check_assumptions(data, fit, {unordered});
    if (g.structured()) {
        auto j = envelope("regress");
        j["fit"] = to_json(fit);
        j["diagnostics"] = to_json(report);
        out << j.dump(2) << "\n";
    } else {
        out << render_text(fit) << render_text(report);
    }
    return kOk;
}

int cmd_render(const std::string& file, const std::optional<std::string>& path, bool highlight,
               const std::string& exposure, const std::string& outcome, std::ostream& out) {
    auto doc = load_document(file);
    std::optional<DotHighlights> h;
    if (highlight) h = highlights_from(classify_roles(doc.dag, query_for(doc, exposure, outcome)));
    write_output(path, to_dot(doc, h ? &*h : nullptr), out);
    return kOk;
}

void report_error(const Globals& g, std::ostream& out, std::ostream& err, std::string_view command,
                  std::string_view code, const std::string& message, const ParseError* where = nullptr) {
    err << "error: " << message << "\n";
    if (!g.structured()) return;
    auto j = envelope(command);
    j["error"] = {{"code", code}, {"message", message}};
    if (where) {
        j["error"]["line"] = where->location().line;
        j["error"]["column"] = where->location().column;
    }
    out << j.dump(2) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Causal diagram toolkit: parse .dag files, classify paths and roles, find adjustment sets, and "
                 "check the claims on linear-Gaussian models.",
                 "causal"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
    app.add_option("--seed", g.seed, "Seed for simulations");

    std::string file, x, y, exposure, outcome, case_id, response;
    std::vector<std::string> conditioned, predictors;
    std::size_t demo_n = 100000;
    std::size_t sim_n = 1000;
    std::optional<std::string> out_path;
    bool unordered = false;
    bool highlight = false;

    auto* validate = app.add_subcommand("validate", "Check that a .dag file parses and is acyclic");
    validate->add_option("file", file, ".dag file or corpus:<id>")->required();

    auto* paths = app.add_subcommand("paths", "List and classify every path between two nodes");
    paths->add_option("file", file, ".dag file or corpus:<id>")->required();
    paths->add_option("x", x, "First node")->required();
    paths->add_option("y", y, "Second node")->required();
    paths->add_option("--conditioned,-c", conditioned, "Conditioning set")->delimiter(',');

    auto* roles = app.add_subcommand("roles", "Classify variable roles for an exposure/outcome query");
    auto* adjust = app.add_subcommand("adjust", "Minimal backdoor adjustment sets");
    auto* render = app.add_subcommand("render", "Export the diagram as Graphviz DOT");
    for (auto* sub : {roles, adjust, render}) {
        sub->add_option("file", file, ".dag file or corpus:<id>")->required();
        sub->add_option("--exposure", exposure, "Exposure (defaults to the document marker)");
        sub->add_option("--outcome", outcome, "Outcome (defaults to the document marker)");
    }
    render->add_option("--out,-o", out_path, "Output file (stdout when omitted)");
    render->add_flag("--highlight", highlight, "Colour nodes by role");

    auto* demo = app.add_subcommand("demo", "Run a scripted case-study contrast (flood, bridges, quake, fire)");
    demo->add_option("case", case_id, "Case id")->required();
    demo->add_option("--n", demo_n, "Simulated rows for Monte-Carlo cases")->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "Sample a dataset from the diagram's linear-Gaussian model");
    sim->add_option("file", file, ".dag file or corpus:<id>")->required();
    sim->add_option("--n", sim_n, "Rows")->capture_default_str();
    sim->add_option("--out,-o", out_path, "Output CSV (stdout when omitted)");

    auto* regress = app.add_subcommand("regress", "Least-squares fit plus assumption checks on a CSV");
    regress->add_option("csv", file, "CSV dataset with a header line")->required();
    regress->add_option("--response", response, "Response column")->required();
    regress->add_option("--predictors", predictors, "Predictor columns")->delimiter(',')->required();
    regress->add_flag("--unordered", unordered, "Rows have no meaningful order");

    std::vector<const char*> argv{"causal"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }

    auto* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    try {
        if (sub == validate) return cmd_validate(g, file, out);
        if (sub == paths) return cmd_paths(g, file, x, y, conditioned, out);
        if (sub == roles) return cmd_roles(g, file, exposure, outcome, out);
        if (sub == adjust) return cmd_adjust(g, file, exposure, outcome, out);
        if (sub == demo) return cmd_demo(g, case_id, demo_n, out);
        if (sub == sim) return cmd_simulate(g, file, sim_n, out_path, out);
        if (sub == regress) return cmd_regress(g, file, response, predictors, unordered, out);
        if (sub == render) return cmd_render(file, out_path, highlight, exposure, outcome, out);
    } catch (const IoError& e) {
        report_error(g, out, err, command, "IoError", e.what());
        return kIoError;
    } catch (const ParseError& e) {
        report_error(g, out, err, command, to_string(e.code()), file + ":" + e.what(), &e);
        return kDomainError;
    } catch (const Error& e) {
        report_error(g, out, err, command, to_string(e.code()), e.what());
        return kDomainError;
    }
    return kDomainError;
}

}  // namespace causal::cli
