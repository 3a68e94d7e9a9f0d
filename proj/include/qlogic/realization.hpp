#pragma once

#include "qlogic/exact.hpp"
#include "qlogic/logic.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qlogic {

// One atom's vector. Coordinates are exact when every entry was written as an
// integer or p/q; `approx` always holds the double values.
struct RealVector {
    std::string atom;
    RatVec exact;  // empty unless is_exact
    std::vector<double> approx;
    bool is_exact = false;
};

struct Realization {
    std::size_t dim = 0;
    std::vector<RealVector> vectors;

    const RealVector* find(std::string_view atom) const;
};

// `dim <d>` header, then `vector <atom> <c1> ... <cd>` lines; `#` comments.
Realization parse_vectors(std::string_view text);

struct RealizationIssue {
    enum class Kind { non_orthogonal, collinear, context_size, missing_vector, zero_vector };
    Kind kind;
    bool error = true;  // false for warnings
    std::vector<std::string> atoms;
    double value = 0;  // |<x|y>| for non_orthogonal, context size for context_size
    std::string message;
};

struct RealizationReport {
    std::vector<RealizationIssue> issues;
    bool exact = false;  // every pair was checked in exact arithmetic

    bool passed() const;
    std::size_t error_count() const;
};

// Checks that contexts map to orthogonal sets, flags contexts whose size differs
// from the dimension, and flags distinct atoms sharing a ray. Pairs of exact
// vectors are always compared exactly; tol = 0 requires every vector to be exact.
RealizationReport verify_realization(const Logic& logic, const Realization& real, double tol = 1e-10);

// Logic whose contexts are the maximal cliques of the orthogonality graph with
// at least `min_size` atoms. min_size = 0 means `dim`, i.e. only complete
// orthogonal bases; min_size = 2 keeps every maximal clique except singletons.
// Atoms in no context are dropped, the rest keep the vector order; each context
// lists atoms by index and the contexts are sorted.
Logic derive_logic(const std::vector<RealVector>& vectors, std::size_t dim, double tol = 1e-10,
                   std::size_t min_size = 0);

}  // namespace qlogic
