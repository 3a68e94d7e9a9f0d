#include "qlogic/vertex_gen.hpp"

#include "parallel.hpp"
#include "qlogic/builtin.hpp"
#include "qlogic/error.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <set>
#include <sstream>

namespace qlogic {

std::string to_string(TermKind k) {
    switch (k) {
        case TermKind::prob: return "prob";
        case TermKind::joint_prob: return "joint_prob";
        case TermKind::expect: return "expect";
        case TermKind::joint_expect: return "joint_expect";
        case TermKind::context_product: return "context_product";
    }
    return "?";
}

std::vector<std::string> TermTable::labels() const {
    std::vector<std::string> out;
    for (const auto& t : terms) out.push_back(t.label);
    return out;
}

TermTable parse_terms(std::string_view text) {
    TermTable table;
    std::set<std::string> labels;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        int column = static_cast<int>(line.find(kw)) + 1;
        if (kw != "term") throw FormatError("unknown keyword '" + kw + "'", lineno, column);
        TermSpec t;
        std::string kind;
        if (!(ls >> t.label >> kind)) throw FormatError("expected 'term <label> <kind> <atoms...>'", lineno, column);
        for (std::string a; ls >> a;) t.atoms.push_back(a);
        if (kind == "prob") t.kind = TermKind::prob;
        else if (kind == "joint_prob") t.kind = TermKind::joint_prob;
        else if (kind == "expect") t.kind = TermKind::expect;
        else if (kind == "joint_expect") t.kind = TermKind::joint_expect;
        else if (kind == "context_product") t.kind = TermKind::context_product;
        else throw FormatError("unknown term kind '" + kind + "'", lineno);
        if (!labels.insert(t.label).second) throw FormatError("duplicate term label '" + t.label + "'", lineno);
        bool single = t.kind == TermKind::prob || t.kind == TermKind::expect;
        if (single && t.atoms.size() != 1) throw FormatError(kind + " takes exactly one atom", lineno);
        if (!single && t.atoms.size() < 2) throw FormatError(kind + " takes at least two atoms", lineno);
        std::set<std::string> distinct(t.atoms.begin(), t.atoms.end());
        if (distinct.size() != t.atoms.size()) throw FormatError("term '" + t.label + "' repeats an atom", lineno);
        table.terms.push_back(std::move(t));
    }
    return table;
}

namespace {

std::string no_state_message(const Logic& logic) {
    std::string msg = "logic '" + logic.name + "' has no two-valued states";
    if (auto cert = parity_certificate(logic)) {
        msg += " (parity: " + std::to_string(cert->context_count) +
               " contexts, an odd number, while every atom lies in an even number of contexts)";
    }
    return msg;
}

}  // namespace

VRep gen_state_vertices(const Logic& logic, const TermTable& terms, const std::vector<TwoValuedState>& states) {
    if (terms.terms.empty()) throw DimensionError("empty term list gives a zero-dimensional polytope");
    std::vector<std::vector<std::size_t>> idx;
    for (const auto& t : terms.terms) {
        if (t.kind == TermKind::context_product)
            throw DomainError("term '" + t.label + "' is a context_product; use the noncontextual generator");
        std::vector<std::size_t> ix;
        for (const auto& a : t.atoms) ix.push_back(logic.index_of(a));
        idx.push_back(std::move(ix));
    }
    if (states.empty()) throw DomainError(no_state_message(logic));
    VRep v;
    v.dim = terms.terms.size();
    for (const auto& s : states) {
        RatVec p;
        p.reserve(v.dim);
        for (std::size_t k = 0; k < terms.terms.size(); ++k) {
            bool expect = terms.terms[k].kind == TermKind::expect || terms.terms[k].kind == TermKind::joint_expect;
            int x = 1;
            for (auto a : idx[k]) x *= expect ? 2 * s.values[a] - 1 : s.values[a];
            p.emplace_back(x);
        }
        v.points.push_back(std::move(p));
    }
    return v;
}

VRep gen_state_vertices(const Logic& logic, const TermTable& terms, unsigned jobs) {
    if (terms.terms.empty()) throw DimensionError("empty term list gives a zero-dimensional polytope");
    return gen_state_vertices(logic, terms, enumerate_states(logic, jobs));
}

namespace {

VRep noncontextual(const Logic& logic, const std::vector<std::vector<std::size_t>>& blocks,
                   const NoncontextualOptions& opt) {
    const std::size_t n = logic.atoms.size();
    if (n > opt.max_atoms)
        throw DomainError("noncontextual sweep over 2^" + std::to_string(n) + " sign assignments exceeds the limit of " +
                          std::to_string(opt.max_atoms) + " atoms");
    if (n > 62) throw DomainError("too many atoms for the noncontextual sweep");
    if (blocks.size() > 64) throw DimensionError("at most 64 contexts are supported");
    std::vector<std::uint64_t> masks;
    for (const auto& b : blocks) {
        std::uint64_t m = 0;
        for (auto a : b) m |= std::uint64_t{1} << a;
        masks.push_back(m);
    }
    // bit k of a pattern is set when the product over block k is -1
    const std::uint64_t total = std::uint64_t{1} << n;
    const std::size_t chunks = std::max<std::size_t>(1, opt.jobs) * 4;
    std::vector<std::set<std::uint64_t>> found(chunks);
    detail::parallel_chunks(chunks, opt.jobs, [&](std::size_t lo, std::size_t hi, std::size_t) {
        for (std::size_t c = lo; c < hi; ++c) {
            std::uint64_t b = total * c / chunks, e = total * (c + 1) / chunks;
            for (std::uint64_t s = b; s < e; ++s) {
                std::uint64_t pattern = 0;
                for (std::size_t k = 0; k < masks.size(); ++k)
                    pattern |= static_cast<std::uint64_t>(std::popcount(s & masks[k]) & 1) << k;
                found[c].insert(pattern);
            }
        }
    });
    std::set<std::uint64_t> all;
    for (auto& f : found) all.insert(f.begin(), f.end());
    std::set<RatVec, RatVecLess> pts;
    for (auto pattern : all) {
        RatVec p;
        for (std::size_t k = 0; k < masks.size(); ++k) p.emplace_back((pattern >> k & 1) ? -1 : 1);
        pts.insert(std::move(p));
    }
    VRep v;
    v.dim = blocks.size();
    v.points.assign(pts.begin(), pts.end());
    return v;
}

}  // namespace

VRep gen_noncontextual_vertices(const Logic& logic, const NoncontextualOptions& opt) {
    std::vector<std::vector<std::size_t>> blocks;
    for (const auto& c : logic.contexts) blocks.push_back(c.atoms);
    if (blocks.empty()) throw DimensionError("logic has no contexts");
    return noncontextual(logic, blocks, opt);
}

VRep gen_noncontextual_vertices(const Logic& logic, const TermTable& terms, const NoncontextualOptions& opt) {
    if (terms.terms.empty()) throw DimensionError("empty term list gives a zero-dimensional polytope");
    std::vector<std::set<std::size_t>> contexts;
    for (const auto& c : logic.contexts) contexts.emplace_back(c.atoms.begin(), c.atoms.end());
    std::vector<std::vector<std::size_t>> blocks;
    for (const auto& t : terms.terms) {
        if (t.kind != TermKind::context_product)
            throw DomainError("term '" + t.label + "' is not a context_product");
        std::set<std::size_t> s;
        for (const auto& a : t.atoms) s.insert(logic.index_of(a));
        if (std::find(contexts.begin(), contexts.end(), s) == contexts.end())
            throw DomainError("term '" + t.label + "' does not name a context of logic '" + logic.name + "'");
        blocks.emplace_back(s.begin(), s.end());
    }
    return noncontextual(logic, blocks, opt);
}

std::vector<std::string> scenario_names() { return builtin_names(DataKind::scenario); }

Scenario builtin_scenario(std::string_view name, unsigned jobs) {
    const std::string path = resolve_source("builtin:" + std::string(name), DataKind::scenario);
    const std::filesystem::path dir = std::filesystem::path(path).parent_path();
    auto sibling = [&](const std::string& f) { return read_text_file((dir / f).string()); };

    Scenario s;
    s.name = std::string(name);
    std::optional<Logic> logic;
    std::optional<TermTable> terms;
    bool noncontextual_source = false;
    std::string vrep_file;

    std::istringstream in(read_text_file(path));
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        std::string rest;
        std::getline(ls, rest);
        rest.erase(0, rest.find_first_not_of(" \t"));
        std::istringstream rs(rest);
        auto count = [&]() {
            std::size_t n;
            if (!(rs >> n)) throw FormatError("expected a count after '" + kw + "'", lineno);
            return n;
        };
        if (kw == "describe") {
            s.description.push_back(rest);
        } else if (kw == "vrep") {
            vrep_file = rest;
        } else if (kw == "logic") {
            logic = parse_logic(load_source("builtin:" + rest, DataKind::logic));
        } else if (kw == "terms") {
            terms = parse_terms(load_source("builtin:" + rest, DataKind::terms));
            s.source += (s.source.empty() ? "" : ", ") + std::string("terms ") + rest;
        } else if (kw == "noncontextual") {
            noncontextual_source = true;
        } else if (kw == "golden") {
            s.golden = std::get<HRep>(parse_dd(sibling(rest)).body);
        } else if (kw == "facets") {
            s.facets = count();
        } else if (kw == "linearities") {
            s.linearities = count();
        } else if (kw == "contains") {
            IntVec z;
            for (std::string t; rs >> t;) z.push_back(parse_rational(t).get_num());
            if (z.size() < 2) throw FormatError("'contains' needs b and at least one coefficient", lineno);
            s.contains.push_back(make_row(z));
        } else if (kw == "contains-file") {
            auto h = std::get<HRep>(parse_dd(sibling(rest)).body);
            s.contains.insert(s.contains.end(), h.inequalities.begin(), h.inequalities.end());
        } else {
            throw FormatError("unknown scenario keyword '" + kw + "'", lineno);
        }
    }

    if (!vrep_file.empty()) {
        s.v = std::get<VRep>(parse_dd(sibling(vrep_file)).body);
        s.source = "vertex file " + vrep_file;
    } else if (logic && noncontextual_source) {
        s.v = terms ? gen_noncontextual_vertices(*logic, *terms, {26, jobs}) : gen_noncontextual_vertices(*logic, {26, jobs});
        s.source = "noncontextual sign products on logic " + logic->name;
    } else if (logic && terms) {
        s.v = gen_state_vertices(*logic, *terms, jobs);
        s.source = "two-valued states of logic " + logic->name + ", " + s.source;
    } else {
        throw FormatError("scenario '" + s.name + "' names no vertex source");
    }
    for (const auto& r : s.contains)
        if (r.a.size() != s.v.dim)
            throw DimensionError("scenario '" + s.name + "': expected row of length " + std::to_string(r.a.size() + 1) +
                                 " in dimension " + std::to_string(s.v.dim));
    return s;
}

ScenarioCheck check_scenario(const Scenario& s, const HRep& computed) {
    ScenarioCheck c;
    if (s.golden) {
        c.golden_diff = compare_hreps(computed, *s.golden);
        if (!c.golden_diff.empty())
            c.problems.push_back("differs from the golden H-representation: " +
                                 std::to_string(c.golden_diff.missing_inequalities.size() +
                                                c.golden_diff.missing_linearities.size()) +
                                 " rows missing, " +
                                 std::to_string(c.golden_diff.extra_inequalities.size() +
                                                c.golden_diff.extra_linearities.size()) +
                                 " extra");
    }
    if (s.facets && computed.inequalities.size() != *s.facets)
        c.problems.push_back("expected " + std::to_string(*s.facets) + " facets, got " +
                             std::to_string(computed.inequalities.size()));
    if (s.linearities && computed.linearities.size() != *s.linearities)
        c.problems.push_back("expected " + std::to_string(*s.linearities) + " linearities, got " +
                             std::to_string(computed.linearities.size()));
    for (const auto& r : s.contains)
        if (!contains_inequality(computed, r) && !implied_equality(computed, r)) {
            std::string txt;
            for (const auto& x : row_vector(r)) txt += " " + to_string(x);
            c.problems.push_back("missing expected inequality" + txt);
        }
    return c;
}

}  // namespace qlogic
