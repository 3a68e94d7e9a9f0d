#include "qlogic/operator.hpp"

#include "qlogic/builtin.hpp"
#include "qlogic/error.hpp"
#include "qlogic/realization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>

namespace qlogic {

namespace {

constexpr double pi = 3.14159265358979323846;

// Whole-token double, accepting p/q fractions.
std::optional<double> parse_number(std::string_view token) {
    if (token.empty()) return std::nullopt;
    auto slash = token.find('/');
    if (slash != std::string_view::npos) {
        auto num = parse_number(token.substr(0, slash));
        auto den = parse_number(token.substr(slash + 1));
        if (!num || !den || *den == 0 || token.substr(slash + 1).find('/') != std::string_view::npos)
            return std::nullopt;
        return *num / *den;
    }
    std::string s(token);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

AngleExpr parse_angle(std::string_view token) {
    AngleExpr a;
    std::string_view t = token;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
        if (t[0] == '-') a.sign = -1;
        t.remove_prefix(1);
    }
    if (!t.empty() && t[0] == '$') {
        a.param = std::string(t.substr(1));
        if (a.param.empty()) throw FormatError("empty parameter name in angle '" + std::string(token) + "'");
        return a;
    }
    if (auto p = t.find("pi"); p != std::string_view::npos) {
        std::string_view before = t.substr(0, p), after = t.substr(p + 2);
        if (!before.empty() && before.back() == '*') before.remove_suffix(1);
        double k = 1, m = 1;
        if (!before.empty()) {
            auto v = parse_number(before);
            if (!v) throw FormatError("bad angle '" + std::string(token) + "'");
            k = *v;
        }
        if (!after.empty()) {
            auto v = after[0] == '/' ? parse_number(after.substr(1)) : std::nullopt;
            if (!v || *v == 0) throw FormatError("bad angle '" + std::string(token) + "'");
            m = *v;
        }
        a.value = a.sign * k * pi / m;
        a.sign = 1;
        return a;
    }
    auto v = parse_number(t);
    if (!v) throw FormatError("bad angle '" + std::string(token) + "'");
    a.value = a.sign * *v;
    a.sign = 1;
    return a;
}

ComplexMatrix build_operator(const OperatorExpr& expr, const std::map<std::string, ComplexMatrix>& bindings) {
    if (expr.sites == 0) throw DimensionError("operator has no sites");
    if (expr.terms.empty()) throw DimensionError("operator has no terms");
    std::vector<std::size_t> dims(expr.sites, 0);
    for (std::size_t t = 0; t < expr.terms.size(); ++t) {
        const auto& term = expr.terms[t];
        if (term.factors.size() != expr.sites)
            throw DimensionError("term " + std::to_string(t + 1) + " has " + std::to_string(term.factors.size()) +
                                 " factors, operator has " + std::to_string(expr.sites) + " sites");
        for (std::size_t s = 0; s < expr.sites; ++s) {
            const auto& label = term.factors[s];
            if (label.empty()) continue;
            auto it = bindings.find(label);
            if (it == bindings.end()) throw FormatError("unbound operator label '" + label + "'");
            if (dims[s] == 0) dims[s] = it->second.size();
            if (dims[s] != it->second.size())
                throw DimensionError("site " + std::to_string(s + 1) + " mixes factors of size " +
                                     std::to_string(dims[s]) + " and " + std::to_string(it->second.size()));
        }
    }
    for (std::size_t s = 0; s < expr.sites; ++s)
        if (dims[s] == 0) throw DimensionError("site " + std::to_string(s + 1) + " has no factor in any term");

    std::size_t total = 1;
    for (auto d : dims) total *= d;
    ComplexMatrix out(total);
    for (const auto& term : expr.terms) {
        ComplexMatrix p = ComplexMatrix::identity(1);
        for (std::size_t s = 0; s < expr.sites; ++s) {
            const auto& label = term.factors[s];
            p = kron(p, label.empty() ? ComplexMatrix::identity(dims[s]) : bindings.at(label));
        }
        out += Complex(term.coeff) * p;
    }
    return out;
}

std::vector<double> OperatorSpec::default_params() const {
    std::vector<double> v;
    for (const auto& p : params) v.push_back(p.value);
    return v;
}

std::vector<std::string> OperatorSpec::param_names() const {
    std::vector<std::string> v;
    for (const auto& p : params) v.push_back(p.name);
    return v;
}

std::map<std::string, ComplexMatrix> OperatorSpec::bind(const std::vector<double>& values) const {
    if (!values.empty() && values.size() != params.size())
        throw DimensionError("expected " + std::to_string(params.size()) + " parameter values, got " +
                             std::to_string(values.size()));
    auto eval = [&](const AngleExpr& a) {
        if (a.param.empty()) return a.value;
        for (std::size_t i = 0; i < params.size(); ++i)
            if (params[i].name == a.param) return a.sign * (values.empty() ? params[i].value : values[i]);
        throw FormatError("undeclared parameter '$" + a.param + "'");
    };
    std::map<std::string, ComplexMatrix> out;
    for (const auto& [label, b] : bindings) {
        switch (b.kind) {
            case Binding::Kind::spin:
                out[label] = spin_operator(b.j, {eval(b.theta), eval(b.phi)});
                break;
            case Binding::Kind::proj: {
                double nn = 0;
                StateVector v;
                for (double x : b.vector) {
                    nn += x * x;
                    v.emplace_back(x);
                }
                ComplexMatrix a = outer(v);
                a *= 2 / nn;
                out[label] = a - ComplexMatrix::identity(v.size());
                break;
            }
            case Binding::Kind::identity:
                out[label] = ComplexMatrix::identity(b.dim);
                break;
        }
    }
    return out;
}

ComplexMatrix OperatorSpec::build(const std::vector<double>& values) const { return build_operator(expr, bind(values)); }

OperatorSpec parse_operator(std::string_view text, const std::string& base_dir) {
    OperatorSpec spec;
    std::set<std::string> param_names, bound;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    std::vector<std::pair<std::string, int>> used_labels, used_params;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string& kw = tok[0];
        auto fail = [&](const std::string& what) -> FormatError {
            return FormatError(what, lineno, static_cast<int>(line.find(kw)) + 1);
        };
        auto angle = [&](const std::string& t) {
            try {
                AngleExpr a = parse_angle(t);
                if (!a.param.empty()) used_params.emplace_back(a.param, lineno);
                return a;
            } catch (const FormatError& e) {
                throw fail(e.what());
            }
        };

        if (kw == "name") {
            if (tok.size() != 2) throw fail("expected 'name <name>'");
            spec.name = tok[1];
        } else if (kw == "sites") {
            auto n = tok.size() == 2 ? parse_number(tok[1]) : std::nullopt;
            if (!n || *n < 1 || *n != std::floor(*n)) throw fail("expected 'sites <positive integer>'");
            if (spec.expr.sites != 0) throw fail("'sites' given twice");
            spec.expr.sites = static_cast<std::size_t>(*n);
        } else if (kw == "param") {
            if (tok.size() != 3) throw fail("expected 'param <name> <angle>'");
            if (!param_names.insert(tok[1]).second) throw fail("parameter '" + tok[1] + "' declared twice");
            AngleExpr a = angle(tok[2]);
            if (!a.param.empty()) throw fail("parameter default must be a literal angle");
            spec.params.push_back({tok[1], a.value});
        } else if (kw == "bind") {
            if (tok.size() < 3) throw fail("expected 'bind <label> <kind> ...'");
            const std::string& label = tok[1];
            if (label.find('@') != std::string::npos) throw fail("label '" + label + "' contains '@'");
            if (!bound.insert(label).second) throw fail("label '" + label + "' bound twice");
            Binding b;
            if (tok[2] == "spin") {
                if (tok.size() != 6) throw fail("expected 'bind <label> spin <j> <theta> <phi>'");
                auto j = parse_number(tok[3]);
                if (!j) throw fail("bad spin value '" + tok[3] + "'");
                b.kind = Binding::Kind::spin;
                b.j = *j;
                try {
                    spin_components(b.j);
                } catch (const DomainError& e) {
                    throw fail(e.what());
                }
                b.theta = angle(tok[4]);
                b.phi = angle(tok[5]);
            } else if (tok[2] == "proj") {
                if (tok.size() != 5) throw fail("expected 'bind <label> proj <vectors> <atom>'");
                b.kind = Binding::Kind::proj;
                std::string path = resolve_source(tok[3], DataKind::vectors);
                if (tok[3].rfind("builtin:", 0) != 0 && !base_dir.empty() && std::filesystem::path(path).is_relative())
                    path = (std::filesystem::path(base_dir) / path).string();
                Realization r = parse_vectors(read_text_file(path));
                const RealVector* v = r.find(tok[4]);
                if (!v) throw fail("atom '" + tok[4] + "' not found in '" + tok[3] + "'");
                b.vector = v->approx;
                if (std::all_of(b.vector.begin(), b.vector.end(), [](double x) { return x == 0; }))
                    throw fail("vector for atom '" + tok[4] + "' is zero");
            } else if (tok[2] == "identity") {
                auto d = tok.size() == 4 ? parse_number(tok[3]) : std::nullopt;
                if (!d || *d < 1 || *d != std::floor(*d)) throw fail("expected 'bind <label> identity <dim>'");
                b.kind = Binding::Kind::identity;
                b.dim = static_cast<std::size_t>(*d);
            } else {
                throw fail("unknown binding kind '" + tok[2] + "'");
            }
            spec.bindings.emplace_back(label, std::move(b));
        } else if (kw == "term") {
            if (spec.expr.sites == 0) throw fail("'term' before 'sites'");
            if (tok.size() < 3) throw fail("expected 'term <coeff> <label>@<site> ...'");
            auto c = parse_number(tok[1]);
            if (!c) throw fail("bad coefficient '" + tok[1] + "'");
            OperatorTerm term;
            term.coeff = *c;
            term.factors.assign(spec.expr.sites, "");
            for (std::size_t i = 2; i < tok.size(); ++i) {
                auto at = tok[i].find('@');
                auto site = at == std::string::npos ? std::nullopt : parse_number(tok[i].substr(at + 1));
                if (!site || at == 0 || *site != std::floor(*site)) throw fail("expected <label>@<site>, got '" + tok[i] + "'");
                if (*site < 1 || *site > static_cast<double>(spec.expr.sites))
                    throw fail("site " + tok[i].substr(at + 1) + " out of range 1.." + std::to_string(spec.expr.sites));
                auto s = static_cast<std::size_t>(*site) - 1;
                if (!term.factors[s].empty()) throw fail("site " + std::to_string(s + 1) + " used twice in one term");
                term.factors[s] = tok[i].substr(0, at);
                used_labels.emplace_back(term.factors[s], lineno);
            }
            spec.expr.terms.push_back(std::move(term));
        } else {
            throw fail("unknown keyword '" + kw + "'");
        }
    }
    if (spec.expr.sites == 0) throw FormatError("operator file has no 'sites' line");
    if (spec.expr.terms.empty()) throw FormatError("operator file has no terms");
    for (const auto& [label, line] : used_labels)
        if (!bound.count(label)) throw FormatError("unbound operator label '" + label + "'", line);
    for (const auto& [p, line] : used_params)
        if (!param_names.count(p)) throw FormatError("undeclared parameter '$" + p + "'", line);
    return spec;
}

OperatorSpec load_operator(const std::string& source) {
    std::string path = resolve_source(source, DataKind::operators);
    OperatorSpec spec = parse_operator(read_text_file(path), std::filesystem::path(path).parent_path().string());
    if (spec.name.empty()) spec.name = std::filesystem::path(path).stem().string();
    return spec;
}

namespace {

struct Objective {
    const OperatorSpec& spec;
    std::size_t evaluations = 0;

    double operator()(const std::vector<double>& x) {
        ++evaluations;
        return eigenvalues(spec.build(x)).back();
    }
};

double wrap_angle(double x) {
    double y = std::fmod(x, 2 * pi);
    return y < 0 ? y + 2 * pi : y;
}

}  // namespace

OptimizeResult maximize_bound(const OperatorSpec& spec, const OptimizeOptions& opt) {
    const std::size_t dim = spec.params.size();
    if (dim == 0) throw DomainError("operator '" + spec.name + "' has no parameters to optimize");
    if (opt.grid == 0) throw DomainError("optimizer grid needs at least one point per axis");
    Objective f{spec};
    OptimizeResult res;

    // Grid size g^dim, capped to detect overflow.
    std::size_t full = 1;
    for (std::size_t i = 0; i < dim && full <= opt.max_grid_points; ++i) full *= opt.grid;
    res.full_grid = full <= opt.max_grid_points;
    const std::size_t count = res.full_grid ? full : opt.max_grid_points;
    std::mt19937_64 rng(opt.seed);

    struct Candidate {
        double value;
        std::vector<double> x;
    };
    std::vector<Candidate> cands;
    cands.push_back({f(spec.default_params()), spec.default_params()});
    for (std::size_t n = 0; n < count; ++n) {
        std::vector<double> x(dim);
        std::size_t code = n;
        for (std::size_t i = 0; i < dim; ++i) {
            std::size_t k;
            if (res.full_grid) {
                k = code % opt.grid;
                code /= opt.grid;
            } else {
                k = static_cast<std::size_t>(rng() % opt.grid);
            }
            x[i] = 2 * pi * static_cast<double>(k) / opt.grid;
        }
        cands.push_back({f(x), std::move(x)});
    }
    res.grid_points = count;
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
    cands.resize(std::min(cands.size(), std::max<std::size_t>(1, opt.starts)));

    res.lambda_max = -INFINITY;
    for (auto& c : cands) {
        std::vector<double> x = c.x;
        double best = c.value;
        for (double step = opt.initial_step; step >= opt.min_step;) {
            bool improved = false;
            for (std::size_t i = 0; i < dim; ++i)
                for (double dir : {1.0, -1.0}) {
                    std::vector<double> y = x;
                    y[i] += dir * step;
                    double v = f(y);
                    if (v > best + 1e-14 * std::max(1.0, std::abs(best))) {
                        best = v;
                        x = std::move(y);
                        improved = true;
                        break;
                    }
                }
            if (!improved) step /= 2;
        }
        if (best > res.lambda_max) {
            res.lambda_max = best;
            res.params = x;
        }
    }
    for (auto& p : res.params) p = wrap_angle(p);
    res.evaluations = f.evaluations;
    return res;
}

}  // namespace qlogic
