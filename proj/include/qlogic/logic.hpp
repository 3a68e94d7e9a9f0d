#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qlogic {

struct Atom {
    std::size_t index = 0;
    std::string name;
};

struct Context {
    std::vector<std::size_t> atoms;
};

// Atoms plus contexts (maximal co-measurable sets); a Greechie diagram skeleton.
struct Logic {
    std::string name;
    std::vector<Atom> atoms;
    std::vector<Context> contexts;
    std::vector<std::string> warnings;

    std::optional<std::size_t> find(std::string_view atom) const;
    std::size_t index_of(std::string_view atom) const;  // throws FormatError if unknown
    std::size_t max_context_size() const;
};

// Builds a logic from named contexts, registering atoms in first-appearance order
// and validating as parse_logic does.
Logic make_logic(std::string name, const std::vector<std::vector<std::string>>& contexts);

// `logic <name>` header, `context <atom> ...` lines, `#` comments.
Logic parse_logic(std::string_view text);

struct TwoValuedState {
    std::vector<std::uint8_t> values;

    friend auto operator<=>(const TwoValuedState&, const TwoValuedState&) = default;
};

// All two-valued states (exactly one 1 per context), lexicographically sorted.
std::vector<TwoValuedState> enumerate_states(const Logic& logic, unsigned jobs = 1);

// True when every context has exactly one atom with value 1.
bool is_admissible(const Logic& logic, const TwoValuedState& s);

struct ParityCertificate {
    std::vector<std::size_t> atom_context_counts;  // per atom
    std::size_t context_count = 0;
};

// Present when every atom lies in an even number of contexts and the number of
// contexts is odd: counting ones per context gives an odd total, counting per
// atom an even one, so no two-valued state exists.
std::optional<ParityCertificate> parity_certificate(const Logic& logic);

// Unordered pairs (x < y) with v(x) = v(y) in every state.
std::vector<std::pair<std::size_t, std::size_t>> unseparated_pairs(const Logic& logic,
                                                                   const std::vector<TwoValuedState>& states);

struct Coloring {
    std::vector<unsigned> colors;
    unsigned k = 0;

    friend auto operator<=>(const Coloring&, const Coloring&) = default;
};

struct ColoringOptions {
    bool up_to_color_permutation = false;
};

// Calls `visit` for each admissible k-coloring (colors pairwise distinct within
// every context) in lexicographic order. Returning false stops the search.
// Returns the number of colorings visited. Throws DomainError if k is smaller
// than the largest context.
std::size_t for_each_coloring(const Logic& logic, unsigned k, const ColoringOptions& opt,
                              const std::function<bool(const Coloring&)>& visit);

std::vector<Coloring> enumerate_colorings(const Logic& logic, unsigned k, const ColoringOptions& opt = {});

// Atom -> sorted 1-based indices (into `states`) of the states assigning it 1.
struct PartitionLogic {
    std::vector<std::vector<std::size_t>> blocks;
};

PartitionLogic partition_logic(const std::vector<TwoValuedState>& states, const Logic& logic);

}  // namespace qlogic
