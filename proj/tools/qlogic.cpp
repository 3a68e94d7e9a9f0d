// qlogic command-line front end: states, hull, quantum, verify.

#include "qlogic/builtin.hpp"
#include "qlogic/error.hpp"
#include "qlogic/logic.hpp"
#include "qlogic/operator.hpp"
#include "qlogic/polytope.hpp"
#include "qlogic/quantum.hpp"
#include "qlogic/realization.hpp"
#include "qlogic/vertex_gen.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace qlogic;
using json = nlohmann::ordered_json;

enum Exit { ok = 0, input_error = 1, no_states = 2, golden_mismatch = 3, verify_failed = 4 };

std::string sha256(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream s;
    for (unsigned i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return s.str();
}

// Inputs read during a run, for the optional run report.
struct Session {
    json inputs = json::array();

    std::string load(const std::string& source, DataKind kind) {
        std::string path = resolve_source(source, kind);
        std::string text = read_text_file(path);
        inputs.push_back({{"source", source}, {"sha256", sha256(text)}});
        return text;
    }
};

std::string fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(12) << x;
    return s.str();
}

std::string row_text(const HRow& r) {
    std::string s = to_string(r.b);
    for (const auto& x : r.a) s += " " + to_string(x);
    return s;
}

std::string point_text(const RatVec& p) {
    std::string s;
    for (const auto& x : p) s += (s.empty() ? "" : " ") + to_string(x);
    return s;
}

json rows_json(const std::vector<HRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        json row = json::array({to_string(r.b)});
        for (const auto& x : r.a) row.push_back(to_string(x));
        out.push_back(row);
    }
    return out;
}

void print_certificate(std::ostream& out, const Logic& logic) {
    auto cert = parity_certificate(logic);
    if (!cert) {
        out << "no parity certificate: the contradiction is not a counting argument\n";
        return;
    }
    out << "parity certificate: " << cert->context_count
        << " contexts (odd), every atom lies in an even number of contexts:\n";
    for (std::size_t a = 0; a < logic.atoms.size(); ++a)
        out << "  " << logic.atoms[a].name << " " << cert->atom_context_counts[a] << "\n";
}

json certificate_json(const Logic& logic) {
    auto cert = parity_certificate(logic);
    if (!cert) return nullptr;
    json counts = json::object();
    for (std::size_t a = 0; a < logic.atoms.size(); ++a) counts[logic.atoms[a].name] = cert->atom_context_counts[a];
    return {{"contexts", cert->context_count}, {"atom_context_counts", counts}};
}

// ---- states ----

struct StatesArgs {
    std::string source;
    std::string format = "table";
    bool check_separating = false;
    bool partition = false;
};

int cmd_states(const StatesArgs& a, unsigned jobs, Session& session, std::ostream& out, std::ostream& err) {
    Logic logic = parse_logic(session.load(a.source, DataKind::logic));
    for (const auto& w : logic.warnings) err << "warning: " << w << "\n";
    auto states = enumerate_states(logic, jobs);
    std::vector<std::pair<std::size_t, std::size_t>> unseparated;
    if (a.check_separating) unseparated = unseparated_pairs(logic, states);

    if (a.format == "json") {
        json j;
        j["logic"] = logic.name;
        j["atoms"] = json::array();
        for (const auto& at : logic.atoms) j["atoms"].push_back(at.name);
        j["count"] = states.size();
        j["states"] = json::array();
        for (std::size_t s = 0; s < states.size(); ++s) {
            json on = json::array();
            for (std::size_t i = 0; i < logic.atoms.size(); ++i)
                if (states[s].values[i]) on.push_back(logic.atoms[i].name);
            j["states"].push_back({{"index", s + 1}, {"values", states[s].values}, {"true_atoms", on}});
        }
        if (states.empty()) j["parity_certificate"] = certificate_json(logic);
        if (a.check_separating) {
            j["unseparated"] = json::array();
            for (auto [x, y] : unseparated) j["unseparated"].push_back({logic.atoms[x].name, logic.atoms[y].name});
        }
        if (a.partition && !states.empty()) {
            json p = json::object();
            auto pl = partition_logic(states, logic);
            for (std::size_t i = 0; i < logic.atoms.size(); ++i) p[logic.atoms[i].name] = pl.blocks[i];
            j["partition"] = p;
        }
        out << j.dump(2) << "\n";
    } else if (a.format == "dd") {
        VRep v{logic.atoms.size(), {}};
        for (const auto& s : states) {
            RatVec p;
            for (auto x : s.values) p.emplace_back(x);
            v.points.push_back(std::move(p));
        }
        std::string cols;
        for (const auto& at : logic.atoms) cols += (cols.empty() ? "" : " ") + at.name;
        out << emit_dd(v, {"two-valued states of " + logic.name, "columns: " + cols});
    } else {
        out << "logic " << logic.name << ": " << logic.atoms.size() << " atoms, " << logic.contexts.size()
            << " contexts\n";
        out << states.size() << " states\n";
        if (!states.empty()) {
            out << "#";
            for (const auto& at : logic.atoms) out << " " << at.name;
            out << "\n";
            for (std::size_t s = 0; s < states.size(); ++s) {
                out << s + 1;
                for (std::size_t i = 0; i < logic.atoms.size(); ++i)
                    out << " " << std::setw(static_cast<int>(logic.atoms[i].name.size())) << int(states[s].values[i]);
                out << "\n";
            }
        }
        if (a.check_separating) {
            out << "unseparated pairs: " << (unseparated.empty() ? "none" : std::to_string(unseparated.size())) << "\n";
            for (auto [x, y] : unseparated) out << "  " << logic.atoms[x].name << " " << logic.atoms[y].name << "\n";
        }
        if (a.partition && !states.empty()) {
            auto pl = partition_logic(states, logic);
            out << "partition logic:\n";
            for (std::size_t i = 0; i < logic.atoms.size(); ++i) {
                out << "  " << logic.atoms[i].name << " {";
                for (std::size_t k = 0; k < pl.blocks[i].size(); ++k) out << (k ? "," : "") << pl.blocks[i][k];
                out << "}\n";
            }
        }
        if (states.empty()) print_certificate(out, logic);
    }
    return states.empty() ? no_states : ok;
}

// ---- hull ----

struct HullArgs {
    std::string input, logic, terms, scenario, output, golden;
    std::string format = "dd";
    bool reverse = false;
    bool noncontextual = false;
};

std::string terms_source(const std::string& t) {
    const std::string preset = "preset:";
    return t.rfind(preset, 0) == 0 ? "builtin:" + t.substr(preset.size()) : t;
}

void print_diff(std::ostream& out, const HRepDiff& d) {
    for (const auto& r : d.missing_inequalities) out << "  missing inequality: " << row_text(r) << "\n";
    for (const auto& r : d.extra_inequalities) out << "  extra inequality:   " << row_text(r) << "\n";
    for (const auto& r : d.missing_linearities) out << "  missing linearity:  " << row_text(r) << "\n";
    for (const auto& r : d.extra_linearities) out << "  extra linearity:    " << row_text(r) << "\n";
}

int cmd_hull(const HullArgs& a, unsigned jobs, Session& session, std::ostream& out, std::ostream& err) {
    int sources = !a.input.empty() + !a.logic.empty() + !a.scenario.empty();
    if (sources != 1) throw FormatError("give exactly one of --input, --logic, --scenario");
    HullOptions hopt{jobs};
    std::vector<std::string> comments;
    std::optional<Scenario> scenario;
    std::variant<VRep, HRep> in;

    if (!a.input.empty()) {
        in = parse_dd(session.load(a.input, DataKind::scenario)).body;
        comments.push_back("input " + a.input);
    } else if (!a.logic.empty()) {
        Logic logic = parse_logic(session.load(a.logic, DataKind::logic));
        for (const auto& w : logic.warnings) err << "warning: " << w << "\n";
        if (a.noncontextual == !a.terms.empty()) throw FormatError("--logic needs exactly one of --terms, --noncontextual");
        try {
            if (a.noncontextual) {
                in = gen_noncontextual_vertices(logic, NoncontextualOptions{26, jobs});
                comments.push_back("noncontextual vertices of " + logic.name);
            } else {
                TermTable t = parse_terms(session.load(terms_source(a.terms), DataKind::terms));
                in = gen_state_vertices(logic, t, jobs);
                comments.push_back("terms " + a.terms + " over " + logic.name);
                std::string cols;
                for (const auto& l : t.labels()) cols += (cols.empty() ? "" : " ") + l;
                comments.push_back("columns: " + cols);
            }
        } catch (const DomainError& e) {
            if (!a.noncontextual && enumerate_states(logic, jobs).empty()) {
                err << "error: " << e.what() << "\n";
                print_certificate(err, logic);
                return no_states;
            }
            throw;
        }
    } else {
        scenario = builtin_scenario(a.scenario, jobs);
        session.inputs.push_back({{"source", "scenario:" + a.scenario}});
        in = scenario->v;
        comments.push_back("scenario " + a.scenario);
        for (const auto& d : scenario->description) comments.push_back(d);
    }

    const bool reverse = a.reverse;
    if (reverse != std::holds_alternative<HRep>(in))
        throw FormatError(reverse ? "--reverse needs an H-representation input"
                                  : "input is an H-representation; use --reverse for vertex enumeration");

    std::ostringstream summary;
    std::string doc;
    json j;
    int code = ok;
    if (!reverse) {
        const VRep& v = std::get<VRep>(in);
        HRep h = hull(v, hopt);
        summary << h.inequalities.size() << " facets, " << h.linearities.size() << " linearities (dimension "
                << h.dim << ", " << v.points.size() << " input points)";
        doc = emit_dd(h, comments);
        j = {{"facets", h.inequalities.size()}, {"linearities", h.linearities.size()}, {"dimension", h.dim},
             {"inequalities", rows_json(h.inequalities)}, {"equalities", rows_json(h.linearities)}};
        if (a.format == "table") {
            out << summary.str() << "\n";
            for (const auto& r : h.linearities) out << "= " << row_text(r) << "\n";
            for (const auto& r : h.inequalities) out << ">= " << row_text(r) << "\n";
        }
        if (!a.golden.empty()) {
            auto g = parse_dd(session.load(a.golden, DataKind::scenario));
            if (g.is_vrep()) throw FormatError("golden file for a forward hull must be an H-representation");
            const HRep& want = std::get<HRep>(g.body);
            if (want.dim != h.dim) {
                err << "golden mismatch against " << a.golden << ": dimension " << want.dim << ", computed " << h.dim
                    << "\n";
                code = golden_mismatch;
            } else if (auto d = compare_hreps(h, want); !d.empty()) {
                err << "golden mismatch against " << a.golden << ":\n";
                print_diff(err, d);
                code = golden_mismatch;
            }
        }
        if (scenario) {
            auto c = check_scenario(*scenario, h);
            if (!c.ok()) {
                err << "scenario " << scenario->name << " check failed:\n";
                for (const auto& p : c.problems) err << "  " << p << "\n";
                print_diff(err, c.golden_diff);
                code = golden_mismatch;
            }
        }
    } else {
        VRep v = vertices(std::get<HRep>(in), hopt);
        summary << v.points.size() << " vertices (dimension " << v.dim << ")";
        doc = emit_dd(v, comments);
        json pts = json::array();
        for (const auto& p : v.points) {
            json row = json::array();
            for (const auto& x : p) row.push_back(to_string(x));
            pts.push_back(row);
        }
        j = {{"vertices", v.points.size()}, {"dimension", v.dim}, {"points", pts}};
        if (a.format == "table") {
            out << summary.str() << "\n";
            for (const auto& p : v.points) out << point_text(p) << "\n";
        }
        if (!a.golden.empty()) {
            auto g = parse_dd(session.load(a.golden, DataKind::scenario));
            if (!g.is_vrep()) throw FormatError("golden file for --reverse must be a V-representation");
            VRep want = dedupe(std::get<VRep>(g.body));
            if (want.dim != v.dim) {
                err << "golden mismatch against " << a.golden << ": dimension " << want.dim << ", computed " << v.dim
                    << "\n";
                want.points.clear();
                code = golden_mismatch;
            }
            std::sort(want.points.begin(), want.points.end(), RatVecLess{});
            std::vector<RatVec> missing, extra;
            std::set_difference(want.points.begin(), want.points.end(), v.points.begin(), v.points.end(),
                                std::back_inserter(missing), RatVecLess{});
            std::set_difference(v.points.begin(), v.points.end(), want.points.begin(), want.points.end(),
                                std::back_inserter(extra), RatVecLess{});
            if (code == ok && (!missing.empty() || !extra.empty())) {
                err << "golden mismatch against " << a.golden << ":\n";
                for (const auto& p : missing) err << "  missing vertex: " << point_text(p) << "\n";
                for (const auto& p : extra) err << "  extra vertex:   " << point_text(p) << "\n";
                code = golden_mismatch;
            }
        }
    }

    if (!a.output.empty()) {
        std::ofstream f(a.output, std::ios::binary);
        if (!f) throw Error("cannot write '" + a.output + "'");
        f << doc;
        if (a.format == "dd") out << summary.str() << "\n";
    }
    if (a.format == "dd" && a.output.empty()) {
        out << doc;
        err << summary.str() << "\n";
    } else if (a.format == "json") {
        out << j.dump(2) << "\n";
    }
    return code;
}

// ---- quantum ----

struct QuantumArgs {
    std::string expr, preset, state;
    std::string format = "json";
    std::vector<std::string> params;
    bool optimize = false;
    OptimizeOptions opt;
};

int cmd_quantum(const QuantumArgs& a, Session& session, std::ostream& out) {
    if (a.expr.empty() == a.preset.empty()) throw FormatError("give exactly one of --expr, --preset");
    std::string source = a.preset.empty() ? a.expr : "builtin:" + a.preset;
    std::string path = resolve_source(source, DataKind::operators);
    OperatorSpec spec = parse_operator(session.load(source, DataKind::operators),
                                       std::filesystem::path(path).parent_path().string());
    if (spec.name.empty()) spec.name = std::filesystem::path(path).stem().string();

    std::vector<double> values = spec.default_params();
    for (const auto& kv : a.params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw FormatError("--param expects name=angle, got '" + kv + "'");
        std::string name = kv.substr(0, eq);
        auto names = spec.param_names();
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw FormatError("operator '" + spec.name + "' has no parameter '" + name + "'");
        AngleExpr e = parse_angle(kv.substr(eq + 1));
        if (!e.param.empty()) throw FormatError("--param values must be literal angles");
        values[static_cast<std::size_t>(it - names.begin())] = e.value;
    }

    json j;
    j["operator"] = spec.name;
    std::optional<OptimizeResult> best;
    if (a.optimize) {
        OperatorSpec start = spec;
        for (std::size_t i = 0; i < values.size(); ++i) start.params[i].value = values[i];
        best = maximize_bound(start, a.opt);
        values = best->params;
    }
    ComplexMatrix t = spec.build(values);
    auto ev = eigenvalues(t);
    j["dimension"] = t.size();
    j["eigenvalues"] = ev;
    j["lambda_min"] = ev.front();
    j["lambda_max"] = best ? best->lambda_max : ev.back();
    json p = json::object();
    for (std::size_t i = 0; i < values.size(); ++i) p[spec.params[i].name] = values[i];
    j["params"] = p;
    if (best)
        j["optimize"] = {{"lambda_max", best->lambda_max},     {"grid", a.opt.grid},
                         {"grid_points", best->grid_points},   {"full_grid", best->full_grid},
                         {"starts", a.opt.starts},             {"seed", a.opt.seed},
                         {"evaluations", best->evaluations}};
    if (!a.state.empty()) {
        double e = project_and_bound(t, bell_state(parse_bell_state(a.state)));
        j["state"] = {{"name", a.state}, {"expectation", e}};
    }

    if (a.format == "table") {
        out << "operator " << spec.name << " (" << t.size() << " x " << t.size() << ")\n";
        for (std::size_t i = 0; i < values.size(); ++i) out << "  " << spec.params[i].name << " = " << fmt(values[i]) << "\n";
        out << "eigenvalues:";
        for (double x : ev) out << " " << fmt(x);
        out << "\nlambda_min " << fmt(ev.front()) << "\nlambda_max " << fmt(j["lambda_max"].get<double>()) << "\n";
        if (best)
            out << "optimized over " << best->grid_points << (best->full_grid ? " grid" : " sampled grid")
                << " points, " << best->evaluations << " evaluations\n";
        if (!a.state.empty()) out << "<" << a.state << "|T|" << a.state << "> = " << fmt(j["state"]["expectation"].get<double>()) << "\n";
    } else {
        out << j.dump(2) << "\n";
    }
    return ok;
}

// ---- verify ----

struct VerifyArgs {
    std::string logic, vectors;
    std::string format = "table";
    double tol = 1e-10;
    bool derive = false;
    std::size_t dim = 0;
    std::size_t min_context_size = 0;
};

std::string kind_name(RealizationIssue::Kind k) {
    switch (k) {
        case RealizationIssue::Kind::non_orthogonal: return "non_orthogonal";
        case RealizationIssue::Kind::collinear: return "collinear";
        case RealizationIssue::Kind::context_size: return "context_size";
        case RealizationIssue::Kind::missing_vector: return "missing_vector";
        case RealizationIssue::Kind::zero_vector: return "zero_vector";
    }
    return "";
}

int cmd_verify(const VerifyArgs& a, Session& session, std::ostream& out, std::ostream& err) {
    if (a.vectors.empty()) throw FormatError("--vectors is required");
    Realization r = parse_vectors(session.load(a.vectors, DataKind::vectors));
    if (a.derive) {
        if (!a.logic.empty()) throw FormatError("--derive does not take --logic");
        std::size_t dim = a.dim ? a.dim : r.dim;
        Logic d = derive_logic(r.vectors, dim, a.tol, a.min_context_size);
        if (a.format == "json") {
            json ctx = json::array();
            for (const auto& c : d.contexts) {
                json names = json::array();
                for (auto i : c.atoms) names.push_back(d.atoms[i].name);
                ctx.push_back(names);
            }
            out << json{{"logic", d.name}, {"atoms", d.atoms.size()}, {"contexts", ctx}}.dump(2) << "\n";
        } else {
            out << "# " << d.contexts.size() << " contexts over " << d.atoms.size() << " of " << r.vectors.size()
                << " vectors, dimension " << dim << "\n";
            out << "logic " << d.name << "\n";
            for (const auto& c : d.contexts) {
                out << "context";
                for (auto i : c.atoms) out << " " << d.atoms[i].name;
                out << "\n";
            }
        }
        return ok;
    }
    if (a.logic.empty()) throw FormatError("verify needs --logic (or --derive)");
    Logic logic = parse_logic(session.load(a.logic, DataKind::logic));
    for (const auto& w : logic.warnings) err << "warning: " << w << "\n";
    auto rep = verify_realization(logic, r, a.tol);
    if (a.format == "json") {
        json issues = json::array();
        for (const auto& i : rep.issues)
            issues.push_back({{"kind", kind_name(i.kind)}, {"error", i.error}, {"atoms", i.atoms}, {"value", i.value},
                              {"message", i.message}});
        out << json{{"passed", rep.passed()}, {"exact", rep.exact}, {"errors", rep.error_count()}, {"issues", issues}}
                   .dump(2)
            << "\n";
    } else {
        for (const auto& i : rep.issues) out << (i.error ? "error: " : "warning: ") << i.message << "\n";
        if (rep.passed())
            out << "realization of " << logic.name << " passed" << (rep.exact ? " (exact)" : "") << "\n";
        else
            out << "realization of " << logic.name << " FAILED with " << rep.error_count() << " errors\n";
    }
    return rep.passed() ? ok : verify_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-valued states, correlation polytopes and quantum bounds for finite quantum logics", "qlogic"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned jobs = 1;
    std::string report;
    app.add_option("-j,--jobs", jobs, "Worker threads for enumeration and hulls")->check(CLI::Range(1u, 256u));
    app.add_option("--report", report, "Write a JSON run report to this file");

    StatesArgs sa;
    auto* states = app.add_subcommand("states", "Enumerate the two-valued states of a logic");
    states->add_option("logic", sa.source, "Logic file or builtin:<name>")->required();
    states->add_option("--format", sa.format)->check(CLI::IsMember({"table", "json", "dd"}));
    states->add_flag("--check-separating", sa.check_separating, "List atom pairs no state separates");
    states->add_flag("--partition", sa.partition, "Print the partition logic of the states");

    HullArgs ha;
    auto* hullc = app.add_subcommand("hull", "Facets of a correlation polytope, or vertices with --reverse");
    hullc->add_option("--input", ha.input, "DD file (.ext or .ine)");
    hullc->add_option("--logic", ha.logic, "Logic file or builtin:<name>");
    hullc->add_option("--terms", ha.terms, "Term table file or preset:<name>");
    hullc->add_flag("--noncontextual", ha.noncontextual, "Use the +-1 context-product vertices of --logic");
    hullc->add_option("--scenario", ha.scenario, "Catalogued scenario; checked against its expectations");
    hullc->add_option("--output", ha.output, "Write the DD result to this file");
    hullc->add_option("--golden", ha.golden, "Compare with this DD file; exit 3 on mismatch");
    hullc->add_flag("--reverse", ha.reverse, "Vertex enumeration of an H-representation");
    hullc->add_option("--format", ha.format)->check(CLI::IsMember({"dd", "table", "json"}));

    QuantumArgs qa;
    auto* quantum = app.add_subcommand("quantum", "Spectrum and bounds of a quantum operator");
    quantum->add_option("--expr", qa.expr, "Operator file");
    quantum->add_option("--preset", qa.preset, "Bundled operator (chsh, kcbs, cabelloT)");
    quantum->add_option("--param", qa.params, "Override a parameter, name=angle")->take_all();
    quantum->add_flag("--optimize", qa.optimize, "Maximize the largest eigenvalue over all parameters");
    quantum->add_option("--grid", qa.opt.grid, "Grid points per axis")->check(CLI::Range(1u, 1024u));
    quantum->add_option("--max-grid-points", qa.opt.max_grid_points, "Sample the grid beyond this many points");
    quantum->add_option("--starts", qa.opt.starts, "Pattern searches from the best grid points");
    quantum->add_option("--seed", qa.opt.seed, "Seed for grid sampling");
    quantum->add_option("--state", qa.state, "Expectation in a Bell state")
        ->check(CLI::IsMember({"psi-minus", "psi-plus", "phi-minus", "phi-plus"}));
    quantum->add_option("--format", qa.format)->check(CLI::IsMember({"json", "table"}));

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Check a vector realization or derive its logic");
    verify->add_option("--logic", va.logic, "Logic file or builtin:<name>");
    verify->add_option("--vectors", va.vectors, "Vector file or builtin:<name>");
    verify->add_option("--tol", va.tol, "Orthogonality tolerance; 0 demands exact coordinates")
        ->check(CLI::NonNegativeNumber);
    verify->add_flag("--derive", va.derive, "Print the logic of maximal orthogonal cliques");
    verify->add_option("--dim", va.dim, "Dimension for --derive (default: from the vector file)");
    verify->add_option("--min-context-size", va.min_context_size, "Smallest clique kept by --derive (default: dim)");
    verify->add_option("--format", va.format)->check(CLI::IsMember({"table", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return input_error;
    }

    const auto start = std::chrono::steady_clock::now();
    Session session;
    std::ostringstream out;
    int code = ok;
    try {
        if (*states) code = cmd_states(sa, jobs, session, out, std::cerr);
        else if (*hullc) code = cmd_hull(ha, jobs, session, out, std::cerr);
        else if (*quantum) code = cmd_quantum(qa, session, out);
        else if (*verify) code = cmd_verify(va, session, out, std::cerr);
    } catch (const Error& e) {
        std::cout << out.str();
        std::cerr << "error: " << e.what() << "\n";
        code = input_error;
    }
    if (code != input_error) std::cout << out.str();
    std::cout.flush();

    if (!report.empty()) {
        json cmd = json::array();
        for (int i = 1; i < argc; ++i) cmd.push_back(argv[i]);
        json outputs = {{"stdout_sha256", sha256(out.str())}};
        if (*hullc && !ha.output.empty()) outputs["file"] = ha.output;
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json r = {{"command", cmd}, {"inputs", session.inputs}, {"exit_code", code}, {"outputs", outputs},
                  {"wall_time_seconds", secs}};
        std::ofstream f(report);
        if (!f) {
            std::cerr << "error: cannot write report '" << report << "'\n";
            return input_error;
        }
        f << r.dump(2) << "\n";
    }
    return code;
}
