#pragma once

#include "qlogic/logic.hpp"
#include "qlogic/polytope.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qlogic {

enum class TermKind { prob, joint_prob, expect, joint_expect, context_product };

std::string to_string(TermKind k);

// One coordinate of a correlation polytope, e.g. `term p13 joint_prob a1 a3`.
struct TermSpec {
    std::string label;
    TermKind kind = TermKind::prob;
    std::vector<std::string> atoms;
};

struct TermTable {
    std::vector<TermSpec> terms;

    std::vector<std::string> labels() const;
};

// One `term <label> <kind> <atoms...>` line per term; `#` comments. Labels must
// be unique, joint terms need distinct atoms, prob/expect take exactly one atom.
TermTable parse_terms(std::string_view text);

// One point per two-valued state, in state order (duplicates kept):
// prob -> v(a), joint_prob -> prod v(a_i), expect -> 2v(a) - 1,
// joint_expect -> prod (2v(a_i) - 1). Throws DimensionError for an empty term
// list, FormatError for an unknown atom, and DomainError when the logic has no
// two-valued state (the message carries the parity certificate if there is one)
// or a term is a context_product.
VRep gen_state_vertices(const Logic& logic, const TermTable& terms, unsigned jobs = 1);
VRep gen_state_vertices(const Logic& logic, const TermTable& terms, const std::vector<TwoValuedState>& states);

struct NoncontextualOptions {
    std::size_t max_atoms = 26;  // 2^n cost guard
    unsigned jobs = 1;
};

// All +-1 assignments to the atoms, admissible or not, mapped to the products of
// the signs within each context. Coordinates follow the contexts in logic order,
// or the context_product terms of `terms` when given. The points are distinct
// and sorted. Throws DomainError when the atom count exceeds max_atoms.
VRep gen_noncontextual_vertices(const Logic& logic, const NoncontextualOptions& opt = {});
VRep gen_noncontextual_vertices(const Logic& logic, const TermTable& terms, const NoncontextualOptions& opt = {});

// A catalogued hull computation with its expected outcome.
struct Scenario {
    std::string name;
    std::vector<std::string> description;
    std::string source;  // how the V-representation was obtained
    VRep v;
    std::optional<HRep> golden;              // complete expected H-representation
    std::optional<std::size_t> facets;       // expected number of inequalities
    std::optional<std::size_t> linearities;  // expected number of linearities
    std::vector<HRow> contains;              // inequalities that must be present
};

// Loads data/scenarios/<name>.scenario. Throws FormatError for an unknown name.
Scenario builtin_scenario(std::string_view name, unsigned jobs = 1);
std::vector<std::string> scenario_names();

struct ScenarioCheck {
    std::vector<std::string> problems;
    HRepDiff golden_diff;

    bool ok() const { return problems.empty(); }
};

ScenarioCheck check_scenario(const Scenario& s, const HRep& computed);

}  // namespace qlogic
