#pragma once

#include "qlogic/quantum.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qlogic {

// One summand coeff * (M_1 x ... x M_sites). An empty label stands for the
// identity on that site.
struct OperatorTerm {
    double coeff = 1;
    std::vector<std::string> factors;  // one label per site
};

struct OperatorExpr {
    std::size_t sites = 0;
    std::vector<OperatorTerm> terms;
};

// Sum over terms of coeff times the Kronecker product of the bound factors.
// Throws FormatError for an unbound label and DimensionError when a term has the
// wrong arity or a site's factors disagree in size.
ComplexMatrix build_operator(const OperatorExpr& expr, const std::map<std::string, ComplexMatrix>& bindings);

// Angle literal or reference to a named parameter, times a sign.
struct AngleExpr {
    double value = 0;
    std::string param;  // empty for a literal
    double sign = 1;
};

// Parses "0.5", "-1/3", "pi", "3pi/4", "-pi/4", "3*pi/4", "$t1", "-$t1".
AngleExpr parse_angle(std::string_view token);

// Factor definitions:
//   spin      spin_operator(j, (theta, phi)) scaled by nothing
//   proj      2|a><a|/<a|a> - I for a vector from a realization file
//   identity  I of the given dimension
struct Binding {
    enum class Kind { spin, proj, identity };
    Kind kind = Kind::spin;
    double j = 0.5;
    AngleExpr theta, phi;
    std::vector<double> vector;  // proj
    std::size_t dim = 0;         // identity
};

struct Parameter {
    std::string name;
    double value = 0;
};

// A parsed operator file: `sites <n>`, `param <name> <angle>`,
// `bind <label> spin <j> <theta> <phi>`, `bind <label> proj <vectors> <atom>`,
// `bind <label> identity <d>`, and `term <coeff> <label>@<site> ...`.
struct OperatorSpec {
    std::string name;
    OperatorExpr expr;
    std::vector<std::pair<std::string, Binding>> bindings;  // file order
    std::vector<Parameter> params;                          // file order

    std::vector<double> default_params() const;
    std::vector<std::string> param_names() const;
    // Factor matrices at the given parameter values (file defaults if empty).
    std::map<std::string, ComplexMatrix> bind(const std::vector<double>& values = {}) const;
    ComplexMatrix build(const std::vector<double>& values = {}) const;
};

// Vector files named by `proj` bindings are resolved with resolve_source;
// relative paths are taken relative to base_dir when it is non-empty.
OperatorSpec parse_operator(std::string_view text, const std::string& base_dir = {});

// Loads "builtin:<name>" or a path.
OperatorSpec load_operator(const std::string& source);

struct OptimizeOptions {
    unsigned grid = 16;                   // points per axis on [0, 2 pi)
    std::size_t max_grid_points = 65536;  // larger grids are sampled
    std::size_t starts = 4;               // pattern searches from the best grid points
    double initial_step = 0.39269908169872414;  // pi / 8
    double min_step = 1e-7;
    std::uint64_t seed = 0;
};

struct OptimizeResult {
    double lambda_max = 0;
    std::vector<double> params;
    std::size_t grid_points = 0;  // grid points evaluated
    bool full_grid = true;        // false when the grid was sampled
    std::size_t evaluations = 0;
};

// Largest eigenvalue of spec.build(x) maximized over all parameters: grid
// scan, then cyclic coordinate pattern search with a halving step from the
// best starts. Deterministic for fixed options. Throws DomainError when the
// spec has no parameters.
OptimizeResult maximize_bound(const OperatorSpec& spec, const OptimizeOptions& opt = {});

}  // namespace qlogic
