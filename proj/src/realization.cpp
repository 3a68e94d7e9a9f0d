#include "qlogic/realization.hpp"

#include "qlogic/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace qlogic {

const RealVector* Realization::find(std::string_view atom) const {
    for (const auto& v : vectors)
        if (v.atom == atom) return &v;
    return nullptr;
}

Realization parse_vectors(std::string_view text) {
    Realization r;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    bool have_dim = false;
    std::set<std::string> names;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        int column = static_cast<int>(line.find(kw)) + 1;
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        if (kw == "dim") {
            if (have_dim) throw FormatError("repeated 'dim'", lineno, column);
            if (toks.size() != 1 || toks[0].find_first_not_of("0123456789") != std::string::npos || toks[0] == "0")
                throw FormatError("expected 'dim <positive integer>'", lineno, column);
            r.dim = std::stoul(toks[0]);
            have_dim = true;
        } else if (kw == "vector") {
            if (!have_dim) throw FormatError("'vector' before 'dim'", lineno, column);
            if (toks.empty()) throw FormatError("expected 'vector <atom> <coordinates>'", lineno, column);
            if (toks.size() - 1 != r.dim)
                throw DimensionError("line " + std::to_string(lineno) + ": vector '" + toks[0] + "' has " +
                                     std::to_string(toks.size() - 1) + " coordinates, dim is " +
                                     std::to_string(r.dim));
            if (!names.insert(toks[0]).second) throw FormatError("atom '" + toks[0] + "' given twice", lineno, column);
            RealVector v;
            v.atom = toks[0];
            v.is_exact = true;
            for (std::size_t i = 1; i < toks.size(); ++i) v.is_exact = v.is_exact && is_exact_token(toks[i]);
            for (std::size_t i = 1; i < toks.size(); ++i) {
                Rat q;
                try {
                    q = parse_rational(toks[i]);
                } catch (const FormatError& e) {
                    throw FormatError(e.what(), lineno);
                }
                v.approx.push_back(q.get_d());
                if (v.is_exact) v.exact.push_back(q);
            }
            r.vectors.push_back(std::move(v));
        } else {
            throw FormatError("unknown keyword '" + kw + "'", lineno, column);
        }
    }
    if (!have_dim) throw FormatError("missing 'dim' header");
    return r;
}

bool RealizationReport::passed() const { return error_count() == 0; }

std::size_t RealizationReport::error_count() const {
    return static_cast<std::size_t>(std::count_if(issues.begin(), issues.end(), [](const auto& i) { return i.error; }));
}

namespace {

struct PairTest {
    double tol;

    double dot(const RealVector& x, const RealVector& y) const {
        double s = 0;
        for (std::size_t i = 0; i < x.approx.size(); ++i) s += x.approx[i] * y.approx[i];
        return s;
    }

    static Rat exact_dot(const RatVec& x, const RatVec& y) {
        Rat s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    }

    bool orthogonal(const RealVector& x, const RealVector& y) const {
        if (x.is_exact && y.is_exact) return sgn(exact_dot(x.exact, y.exact)) == 0;
        return std::abs(dot(x, y)) <= tol;
    }

    // |<x|y>|^2 = <x|x><y|y>, relative to the norms for floats.
    bool collinear(const RealVector& x, const RealVector& y) const {
        if (x.is_exact && y.is_exact) {
            Rat d = exact_dot(x.exact, y.exact);
            return d * d == exact_dot(x.exact, x.exact) * exact_dot(y.exact, y.exact);
        }
        double xx = dot(x, x), yy = dot(y, y), xy = dot(x, y);
        return xx * yy - xy * xy <= tol * xx * yy;
    }
};

bool is_zero_vector(const RealVector& v) {
    if (v.is_exact) return is_zero(v.exact);
    return std::all_of(v.approx.begin(), v.approx.end(), [](double x) { return x == 0.0; });
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

}  // namespace

RealizationReport verify_realization(const Logic& logic, const Realization& real, double tol) {
    if (tol < 0) throw DomainError("tolerance must be non-negative");
    for (const auto& v : real.vectors)
        if (v.approx.size() != real.dim)
            throw DimensionError("vector '" + v.atom + "' has " + std::to_string(v.approx.size()) +
                                 " coordinates, dimension is " + std::to_string(real.dim));
    bool all_exact = std::all_of(real.vectors.begin(), real.vectors.end(), [](const auto& v) { return v.is_exact; });
    if (tol == 0 && !all_exact)
        throw DomainError("tol = 0 selects exact mode, but some coordinates are decimal floats");

    RealizationReport rep;
    rep.exact = all_exact;
    PairTest t{tol};

    std::vector<const RealVector*> vec(logic.atoms.size(), nullptr);
    for (const auto& a : logic.atoms) {
        vec[a.index] = real.find(a.name);
        if (!vec[a.index]) {
            rep.issues.push_back({RealizationIssue::Kind::missing_vector, true, {a.name}, 0,
                                  "no vector given for atom " + a.name});
        } else if (is_zero_vector(*vec[a.index])) {
            rep.issues.push_back({RealizationIssue::Kind::zero_vector, true, {a.name}, 0,
                                  "atom " + a.name + " has the zero vector"});
            vec[a.index] = nullptr;
        }
    }

    for (std::size_t ci = 0; ci < logic.contexts.size(); ++ci) {
        const auto& c = logic.contexts[ci].atoms;
        if (c.size() != real.dim) {
            std::string names;
            for (auto a : c) names += (names.empty() ? "" : " ") + logic.atoms[a].name;
            rep.issues.push_back({RealizationIssue::Kind::context_size, false, {},
                                  static_cast<double>(c.size()),
                                  "context {" + names + "} has " + std::to_string(c.size()) +
                                      " atoms in dimension " + std::to_string(real.dim)});
        }
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = i + 1; j < c.size(); ++j) {
                const RealVector* x = vec[c[i]];
                const RealVector* y = vec[c[j]];
                if (!x || !y || t.orthogonal(*x, *y)) continue;
                double d = std::abs(t.dot(*x, *y));
                rep.issues.push_back({RealizationIssue::Kind::non_orthogonal, true, {x->atom, y->atom}, d,
                                      "atoms " + x->atom + " and " + y->atom + " share context " +
                                          std::to_string(ci + 1) + " but |<x|y>| = " + fmt(d)});
            }
    }

    for (std::size_t i = 0; i < vec.size(); ++i)
        for (std::size_t j = i + 1; j < vec.size(); ++j) {
            if (!vec[i] || !vec[j] || !t.collinear(*vec[i], *vec[j])) continue;
            rep.issues.push_back({RealizationIssue::Kind::collinear, true, {vec[i]->atom, vec[j]->atom}, 0,
                                  "atoms " + vec[i]->atom + " and " + vec[j]->atom + " lie on the same ray"});
        }
    return rep;
}

Logic derive_logic(const std::vector<RealVector>& vectors, std::size_t dim, double tol, std::size_t min_size) {
    const std::size_t n = vectors.size();
    if (min_size == 0) min_size = dim;
    min_size = std::max<std::size_t>(min_size, 2);
    for (const auto& v : vectors)
        if (v.approx.size() != dim)
            throw DimensionError("vector '" + v.atom + "' has " + std::to_string(v.approx.size()) +
                                 " coordinates, dimension is " + std::to_string(dim));
    PairTest t{tol};
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) adj[i][j] = adj[j][i] = t.orthogonal(vectors[i], vectors[j]);

    // Bron-Kerbosch with pivoting over index-ordered sets.
    std::vector<std::vector<std::size_t>> cliques;
    std::function<void(std::vector<std::size_t>&, std::vector<std::size_t>, std::vector<std::size_t>)> bk =
        [&](std::vector<std::size_t>& r, std::vector<std::size_t> p, std::vector<std::size_t> x) {
            if (p.empty() && x.empty()) {
                if (r.size() >= min_size) {
                    auto c = r;
                    std::sort(c.begin(), c.end());
                    cliques.push_back(std::move(c));
                }
                return;
            }
            std::size_t pivot = p.empty() ? x.front() : p.front();
            std::size_t best = 0;
            for (const auto* set : {&p, &x})
                for (auto u : *set) {
                    std::size_t deg = 0;
                    for (auto v : p) deg += adj[u][v];
                    if (deg > best) best = deg, pivot = u;
                }
            std::vector<std::size_t> candidates;
            for (auto v : p)
                if (!adj[pivot][v]) candidates.push_back(v);
            for (auto v : candidates) {
                std::vector<std::size_t> p2, x2;
                for (auto w : p)
                    if (adj[v][w]) p2.push_back(w);
                for (auto w : x)
                    if (adj[v][w]) x2.push_back(w);
                r.push_back(v);
                bk(r, std::move(p2), std::move(x2));
                r.pop_back();
                p.erase(std::find(p.begin(), p.end(), v));
                x.push_back(v);
            }
        };
    std::vector<std::size_t> r, all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    bk(r, all, {});
    std::sort(cliques.begin(), cliques.end());

    std::vector<std::vector<std::string>> named;
    for (const auto& c : cliques) {
        std::vector<std::string> names;
        for (auto i : c) names.push_back(vectors[i].atom);
        named.push_back(std::move(names));
    }
    Logic built = make_logic("derived", named);  // validation and shared-atom warnings
    // atoms in no context are dropped; the rest keep the vector order
    Logic ordered;
    ordered.name = "derived";
    ordered.warnings = built.warnings;
    std::vector<std::size_t> remap(n, static_cast<std::size_t>(-1));
    for (const auto& c : cliques)
        for (auto i : c) remap[i] = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (remap[i] == 0) {
            remap[i] = ordered.atoms.size();
            ordered.atoms.push_back({remap[i], vectors[i].atom});
        }
    for (const auto& c : cliques) {
        Context ctx;
        for (auto i : c) ctx.atoms.push_back(remap[i]);
        ordered.contexts.push_back(std::move(ctx));
    }
    return ordered;
}

}  // namespace qlogic
