#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace qlogic {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// Parses "p/q", an integer, or a decimal such as "-0.125" or "1.5e-3" into an
// exact rational. Throws FormatError on anything else.
Rat parse_rational(std::string_view token);

// True when the token is an integer or p/q fraction (no decimal point or exponent).
bool is_exact_token(std::string_view token);

std::string to_string(const Rat& r);
std::string to_string(const Int& z);

// Multiplies by the lcm of denominators and divides by the gcd of numerators.
// The result is a primitive integer vector with the same direction (positive scaling only).
IntVec primitive(const RatVec& v);
IntVec primitive(IntVec v);

RatVec to_rat(const IntVec& v);

bool is_zero(const RatVec& v);
bool is_zero(const IntVec& v);

// Lexicographic comparison by numeric value.
int compare(const IntVec& a, const IntVec& b);
int compare(const RatVec& a, const RatVec& b);

struct IntVecLess {
    bool operator()(const IntVec& a, const IntVec& b) const { return compare(a, b) < 0; }
};
struct RatVecLess {
    bool operator()(const RatVec& a, const RatVec& b) const { return compare(a, b) < 0; }
};

// Row-reduces `rows` (all of equal length) to the unique basis of their span in
// which pivots are chosen from the last column backwards. Each returned row has
// coefficient 1 at its pivot and 0 at every other row's pivot. Rows are returned
// ordered by pivot column ascending; `pivots` receives the pivot columns.
std::vector<RatVec> reverse_echelon(std::vector<RatVec> rows, std::vector<std::size_t>* pivots = nullptr);

// Basis of {w : M w = 0} for a matrix with `cols` columns.
std::vector<RatVec> null_space(std::vector<RatVec> m, std::size_t cols);

// Rank of a rational matrix.
std::size_t rank(std::vector<RatVec> m);

}  // namespace qlogic
