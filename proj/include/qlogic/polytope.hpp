#pragma once

#include "qlogic/exact.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qlogic {

// Convex hull of finitely many points in Q^dim.
struct VRep {
    std::size_t dim = 0;
    std::vector<RatVec> points;
};

// One row b + a.x >= 0 (inequality) or b + a.x = 0 (linearity).
struct HRow {
    Rat b;
    RatVec a;

    friend bool operator==(const HRow& x, const HRow& y) { return x.b == y.b && x.a == y.a; }
};

struct HRep {
    std::size_t dim = 0;
    std::vector<HRow> inequalities;
    std::vector<HRow> linearities;
};

struct HullOptions {
    unsigned jobs = 1;
};

// Minimal H-representation: one linearity per codimension of the affine hull,
// then exactly the facets, in canonical form.
HRep hull(const VRep& v, const HullOptions& opt = {});

// Extreme points of a bounded, non-empty polytope, sorted and duplicate-free.
// Throws DomainError naming a ray for unbounded input and on infeasible input.
VRep vertices(const HRep& h, const HullOptions& opt = {});

// Coprime integer rows; equalities in reduced echelon form with the first nonzero
// coefficient of a positive; inequalities reduced modulo the equalities; rows
// deduplicated and sorted. Idempotent. Throws DomainError on an all-zero row.
HRep canonicalize(const HRep& h);

// Integer form (b, a1, ..., am) of a canonical row.
IntVec row_vector(const HRow& r);
HRow make_row(const IntVec& v);

// Extreme rays of the pointed cone {z : A z >= 0}, where A has full column rank.
// Rows of A are processed in input order. The result is independent of `jobs`.
std::vector<IntVec> cone_extreme_rays(const std::vector<IntVec>& a, unsigned jobs = 1);

// Exact membership checks.
bool satisfies(const HRow& row, const RatVec& x);   // b + a.x >= 0
bool on_hyperplane(const HRow& row, const RatVec& x);

// Canonical-set comparison. Both sides are canonicalized first.
struct HRepDiff {
    std::vector<HRow> missing_inequalities;  // in expected, not in actual
    std::vector<HRow> extra_inequalities;    // in actual, not in expected
    std::vector<HRow> missing_linearities;
    std::vector<HRow> extra_linearities;

    bool empty() const {
        return missing_inequalities.empty() && extra_inequalities.empty() && missing_linearities.empty() &&
               extra_linearities.empty();
    }
};
HRepDiff compare_hreps(const HRep& actual, const HRep& expected);

// Whether `h` (after canonicalization) contains the inequality `row`.
bool contains_inequality(const HRep& h, const HRow& row);

// Whether b + a.x = 0 follows from the linearities of `h` (row in their span).
bool implied_equality(const HRep& h, const HRow& row);

// DD interchange documents.
struct DdDocument {
    std::vector<std::string> comments;  // text after the leading '*'
    std::variant<VRep, HRep> body;

    bool is_vrep() const { return std::holds_alternative<VRep>(body); }
};

DdDocument parse_dd(std::string_view text);
std::string emit_dd(const VRep& v, const std::vector<std::string>& comments = {});
std::string emit_dd(const HRep& h, const std::vector<std::string>& comments = {});

// Deduplicated copy; first occurrence order is kept.
VRep dedupe(const VRep& v);

}  // namespace qlogic
