#include "qlogic/logic.hpp"

#include "parallel.hpp"
#include "qlogic/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace qlogic {

std::optional<std::size_t> Logic::find(std::string_view atom) const {
    for (const auto& a : atoms)
        if (a.name == atom) return a.index;
    return std::nullopt;
}

std::size_t Logic::index_of(std::string_view atom) const {
    if (auto i = find(atom)) return *i;
    throw FormatError("unknown atom '" + std::string(atom) + "' in logic '" + name + "'");
}

std::size_t Logic::max_context_size() const {
    std::size_t m = 0;
    for (const auto& c : contexts) m = std::max(m, c.atoms.size());
    return m;
}

namespace {

struct Builder {
    Logic logic;
    std::map<std::string, std::size_t, std::less<>> index;
    std::set<std::vector<std::size_t>> seen;

    void add_context(const std::vector<std::string>& names, int line) {
        if (names.size() < 2)
            throw FormatError("context needs at least 2 atoms, got " + std::to_string(names.size()), line);
        Context c;
        std::set<std::string> local;
        for (const auto& n : names) {
            if (!local.insert(n).second) throw FormatError("atom '" + n + "' repeated within a context", line);
            auto it = index.find(n);
            if (it == index.end()) {
                std::size_t i = logic.atoms.size();
                logic.atoms.push_back({i, n});
                it = index.emplace(n, i).first;
            }
            c.atoms.push_back(it->second);
        }
        std::vector<std::size_t> key = c.atoms;
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second) throw FormatError("duplicate context", line);
        for (std::size_t j = 0; j < logic.contexts.size(); ++j) {
            std::size_t shared = 0;
            for (auto a : logic.contexts[j].atoms)
                if (std::binary_search(key.begin(), key.end(), a)) ++shared;
            if (shared > 1)
                logic.warnings.push_back("contexts " + std::to_string(j + 1) + " and " +
                                         std::to_string(logic.contexts.size() + 1) + " share " +
                                         std::to_string(shared) + " atoms");
        }
        logic.contexts.push_back(std::move(c));
    }
};

}  // namespace

Logic make_logic(std::string name, const std::vector<std::vector<std::string>>& contexts) {
    Builder b;
    b.logic.name = std::move(name);
    for (const auto& c : contexts) b.add_context(c, 0);
    return b.logic;
}

Logic parse_logic(std::string_view text) {
    Builder b;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    bool named = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        int column = static_cast<int>(line.find(kw)) + 1;
        std::vector<std::string> rest;
        for (std::string t; ls >> t;) rest.push_back(t);
        if (kw == "logic") {
            if (rest.size() != 1) throw FormatError("expected 'logic <name>'", lineno, column);
            if (named || !b.logic.contexts.empty())
                throw FormatError("'logic' header must come first and only once", lineno, column);
            b.logic.name = rest.front();
            named = true;
        } else if (kw == "context") {
            b.add_context(rest, lineno);
        } else {
            throw FormatError("unknown keyword '" + kw + "'", lineno, column);
        }
    }
    if (b.logic.contexts.empty()) throw FormatError("logic has no contexts");
    return b.logic;
}

namespace {

// Backtracking search over contexts with unit propagation.
class StateSearch {
public:
    explicit StateSearch(const Logic& logic) : logic_(logic), of_atom_(logic.atoms.size()) {
        for (std::size_t c = 0; c < logic.contexts.size(); ++c)
            for (auto a : logic.contexts[c].atoms) of_atom_[a].push_back(c);
    }

    struct Partial {
        std::vector<std::int8_t> value;     // -1 unknown
        std::vector<std::uint32_t> ones;    // per context
        std::vector<std::uint32_t> unknown; // per context
    };

    Partial root() const {
        Partial p;
        p.value.assign(logic_.atoms.size(), -1);
        p.ones.assign(logic_.contexts.size(), 0);
        for (const auto& c : logic_.contexts) p.unknown.push_back(static_cast<std::uint32_t>(c.atoms.size()));
        return p;
    }

    // Sets atom a to 1 and propagates; false on contradiction.
    bool assign_true(Partial& p, std::size_t a) const {
        std::vector<std::pair<std::size_t, std::int8_t>> queue{{a, 1}};
        while (!queue.empty()) {
            auto [x, v] = queue.back();
            queue.pop_back();
            if (p.value[x] != -1) {
                if (p.value[x] != v) return false;
                continue;
            }
            p.value[x] = v;
            for (auto c : of_atom_[x]) {
                --p.unknown[c];
                if (v == 1) {
                    if (++p.ones[c] > 1) return false;
                    for (auto y : logic_.contexts[c].atoms)
                        if (p.value[y] == -1) queue.emplace_back(y, 0);
                } else if (p.ones[c] == 0) {
                    if (p.unknown[c] == 0) return false;
                    if (p.unknown[c] == 1)
                        for (auto y : logic_.contexts[c].atoms)
                            if (p.value[y] == -1) queue.emplace_back(y, 1);
                }
            }
        }
        return true;
    }

    // First context without a 1, or npos.
    std::size_t open_context(const Partial& p) const {
        for (std::size_t c = 0; c < p.ones.size(); ++c)
            if (p.ones[c] == 0) return c;
        return npos;
    }

    void run(Partial p, std::vector<TwoValuedState>& out) const {
        std::size_t c = open_context(p);
        if (c == npos) {
            TwoValuedState s;
            s.values.reserve(p.value.size());
            for (auto v : p.value) s.values.push_back(v == 1 ? 1 : 0);
            out.push_back(std::move(s));
            return;
        }
        for (auto a : logic_.contexts[c].atoms) {
            if (p.value[a] != -1) continue;
            Partial q = p;
            if (assign_true(q, a)) run(std::move(q), out);
        }
    }

    const Logic& logic() const { return logic_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    const Logic& logic_;
    std::vector<std::vector<std::size_t>> of_atom_;
};

}  // namespace

std::vector<TwoValuedState> enumerate_states(const Logic& logic, unsigned jobs) {
    std::vector<TwoValuedState> out;
    if (logic.contexts.empty()) return out;
    StateSearch search(logic);
    auto root = search.root();
    const auto& first = logic.contexts.front().atoms;
    std::size_t chunks = detail::chunk_count(first.size(), jobs);
    std::vector<std::vector<TwoValuedState>> parts(chunks);
    detail::parallel_chunks(first.size(), jobs, [&](std::size_t lo, std::size_t hi, std::size_t c) {
        for (std::size_t i = lo; i < hi; ++i) {
            auto p = root;
            if (search.assign_true(p, first[i])) search.run(std::move(p), parts[c]);
        }
    });
    for (auto& part : parts)
        for (auto& s : part) out.push_back(std::move(s));
    std::sort(out.begin(), out.end());
    return out;
}

bool is_admissible(const Logic& logic, const TwoValuedState& s) {
    if (s.values.size() != logic.atoms.size()) return false;
    for (const auto& c : logic.contexts) {
        unsigned ones = 0;
        for (auto a : c.atoms) ones += s.values[a];
        if (ones != 1) return false;
    }
    return true;
}

std::optional<ParityCertificate> parity_certificate(const Logic& logic) {
    ParityCertificate cert;
    cert.atom_context_counts.assign(logic.atoms.size(), 0);
    for (const auto& c : logic.contexts)
        for (auto a : c.atoms) ++cert.atom_context_counts[a];
    cert.context_count = logic.contexts.size();
    if (cert.context_count % 2 == 0) return std::nullopt;
    for (auto n : cert.atom_context_counts)
        if (n % 2 != 0) return std::nullopt;
    return cert;
}

std::vector<std::pair<std::size_t, std::size_t>> unseparated_pairs(const Logic& logic,
                                                                   const std::vector<TwoValuedState>& states) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = logic.atoms.size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            bool same = std::all_of(states.begin(), states.end(),
                                    [&](const TwoValuedState& s) { return s.values[x] == s.values[y]; });
            if (same) out.emplace_back(x, y);
        }
    return out;
}

std::size_t for_each_coloring(const Logic& logic, unsigned k, const ColoringOptions& opt,
                              const std::function<bool(const Coloring&)>& visit) {
    if (k < logic.max_context_size())
        throw DomainError("k = " + std::to_string(k) + " is smaller than the largest context (" +
                          std::to_string(logic.max_context_size()) + ")");
    const std::size_t n = logic.atoms.size();
    std::vector<std::vector<std::size_t>> neighbours(n);
    for (const auto& c : logic.contexts)
        for (auto a : c.atoms)
            for (auto b : c.atoms)
                if (a != b) neighbours[a].push_back(b);
    for (auto& nb : neighbours) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }

    Coloring col;
    col.k = k;
    col.colors.assign(n, 0);
    std::vector<bool> set(n, false);
    std::size_t count = 0;
    bool stop = false;

    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned used) {
        if (stop) return;
        if (i == n) {
            ++count;
            if (!visit(col)) stop = true;
            return;
        }
        unsigned limit = opt.up_to_color_permutation ? std::min(k, used + 1) : k;
        for (unsigned c = 0; c < limit && !stop; ++c) {
            bool ok = true;
            for (auto b : neighbours[i])
                if (set[b] && col.colors[b] == c) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            col.colors[i] = c;
            set[i] = true;
            rec(i + 1, std::max(used, c + 1));
            set[i] = false;
        }
    };
    rec(0, 0);
    return count;
}

std::vector<Coloring> enumerate_colorings(const Logic& logic, unsigned k, const ColoringOptions& opt) {
    std::vector<Coloring> out;
    for_each_coloring(logic, k, opt, [&](const Coloring& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

PartitionLogic partition_logic(const std::vector<TwoValuedState>& states, const Logic& logic) {
    if (states.empty()) throw DomainError("partition logic needs at least one two-valued state");
    PartitionLogic p;
    p.blocks.resize(logic.atoms.size());
    for (std::size_t s = 0; s < states.size(); ++s) {
        if (states[s].values.size() != logic.atoms.size())
            throw DimensionError("state " + std::to_string(s + 1) + " has " +
                                 std::to_string(states[s].values.size()) + " entries, logic has " +
                                 std::to_string(logic.atoms.size()) + " atoms");
        for (std::size_t a = 0; a < logic.atoms.size(); ++a)
            if (states[s].values[a]) p.blocks[a].push_back(s + 1);
    }
    return p;
}

}  // namespace qlogic
