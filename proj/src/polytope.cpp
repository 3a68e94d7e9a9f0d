#include "qlogic/polytope.hpp"

#include "parallel.hpp"
#include "qlogic/error.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>

namespace qlogic {

namespace {

// Zero set of a ray over the constraints processed so far.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n) : w_((n + 63) / 64, 0) {}

    void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1u; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
        return c;
    }

    static Bits intersect(const Bits& a, const Bits& b) {
        Bits r;
        r.w_.resize(a.w_.size());
        for (std::size_t i = 0; i < a.w_.size(); ++i) r.w_[i] = a.w_[i] & b.w_[i];
        return r;
    }

    bool subset_of(const Bits& other) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~other.w_[i]) return false;
        return true;
    }

private:
    std::vector<std::uint64_t> w_;
};

struct Ray {
    IntVec z;
    Bits zeros;
    std::size_t nz = 0;
};

Int dot(const IntVec& a, const IntVec& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    return s;
}

// Greedy choice of linearly independent rows, in input order.
std::vector<std::size_t> independent_rows(const std::vector<IntVec>& a, std::size_t d) {
    std::vector<RatVec> basis;               // echelon rows
    std::vector<std::size_t> lead;           // leading column per basis row
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < a.size() && chosen.size() < d; ++i) {
        RatVec r = to_rat(a[i]);
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (sgn(r[lead[b]]) == 0) continue;
            Rat f = r[lead[b]];
            for (std::size_t k = 0; k < d; ++k)
                if (sgn(basis[b][k]) != 0) r[k] -= f * basis[b][k];
        }
        std::size_t c = 0;
        while (c < d && sgn(r[c]) == 0) ++c;
        if (c == d) continue;
        Rat inv = 1 / r[c];
        for (auto& x : r) x *= inv;
        for (auto& row : basis) {
            if (sgn(row[c]) == 0) continue;
            Rat f = row[c];
            for (std::size_t k = 0; k < d; ++k)
                if (sgn(r[k]) != 0) row[k] -= f * r[k];
        }
        basis.push_back(std::move(r));
        lead.push_back(c);
        chosen.push_back(i);
    }
    return chosen;
}

// Inverse of a square rational matrix (assumed nonsingular).
std::vector<RatVec> inverse(std::vector<RatVec> m) {
    const std::size_t n = m.size();
    std::vector<RatVec> inv(n, RatVec(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (sgn(m[p][c]) == 0) ++p;
        std::swap(m[p], m[c]);
        std::swap(inv[p], inv[c]);
        Rat f = 1 / m[c][c];
        for (auto& x : m[c]) x *= f;
        for (auto& x : inv[c]) x *= f;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || sgn(m[i][c]) == 0) continue;
            Rat g = m[i][c];
            for (std::size_t k = 0; k < n; ++k) {
                if (sgn(m[c][k]) != 0) m[i][k] -= g * m[c][k];
                if (sgn(inv[c][k]) != 0) inv[i][k] -= g * inv[c][k];
            }
        }
    }
    return inv;
}

std::string vec_text(const RatVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
    return s + ")";
}

}  // namespace

std::vector<IntVec> cone_extreme_rays(const std::vector<IntVec>& a, unsigned jobs) {
    if (a.empty()) throw DomainError("cone has no constraints");
    const std::size_t d = a.front().size();
    const std::size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != d) throw DimensionError("constraint rows differ in length");

    auto init = independent_rows(a, d);
    if (init.size() < d) throw DomainError("cone is not pointed: constraint matrix has rank " +
                                           std::to_string(init.size()) + " < " + std::to_string(d));

    std::vector<RatVec> b;
    for (auto i : init) b.push_back(to_rat(a[i]));
    auto binv = inverse(std::move(b));

    std::vector<Ray> rays;
    for (std::size_t j = 0; j < d; ++j) {
        RatVec col(d);
        for (std::size_t i = 0; i < d; ++i) col[i] = binv[i][j];
        Ray r;
        r.z = primitive(col);
        r.zeros = Bits(n);
        for (std::size_t i = 0; i < d; ++i)
            if (i != j) r.zeros.set(init[i]);
        r.nz = d - 1;
        rays.push_back(std::move(r));
    }

    std::vector<bool> done(n, false);
    for (auto i : init) done[i] = true;

    for (std::size_t k = 0; k < n; ++k) {
        if (done[k]) continue;
        done[k] = true;
        const IntVec& row = a[k];

        std::vector<Int> val(rays.size());
        std::vector<std::size_t> pos, neg, zer;
        for (std::size_t r = 0; r < rays.size(); ++r) {
            val[r] = dot(row, rays[r].z);
            int s = sgn(val[r]);
            (s > 0 ? pos : s < 0 ? neg : zer).push_back(r);
        }
        if (neg.empty()) {
            for (auto r : zer) {
                rays[r].zeros.set(k);
                ++rays[r].nz;
            }
            continue;
        }

        const std::size_t need = d >= 2 ? d - 2 : 0;
        std::size_t chunks = detail::chunk_count(pos.size(), jobs);
        std::vector<std::vector<Ray>> fresh(chunks);
        detail::parallel_chunks(pos.size(), jobs, [&](std::size_t lo, std::size_t hi, std::size_t c) {
            for (std::size_t pi = lo; pi < hi; ++pi) {
                const Ray& p = rays[pos[pi]];
                for (auto qi : neg) {
                    const Ray& q = rays[qi];
                    Bits common = Bits::intersect(p.zeros, q.zeros);
                    std::size_t cnt = common.count();
                    if (cnt < need) continue;
                    bool adjacent = true;
                    for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
                        if (r == pos[pi] || r == qi || rays[r].nz < cnt) continue;
                        if (common.subset_of(rays[r].zeros)) adjacent = false;
                    }
                    if (!adjacent) continue;
                    IntVec z(d);
                    const Int& vp = val[pos[pi]];
                    const Int& vq = val[qi];
                    for (std::size_t t = 0; t < d; ++t) z[t] = vp * q.z[t] - vq * p.z[t];
                    Ray nr;
                    nr.z = primitive(std::move(z));
                    nr.zeros = std::move(common);
                    nr.zeros.set(k);
                    nr.nz = cnt + 1;
                    fresh[c].push_back(std::move(nr));
                }
            }
        });

        std::vector<Ray> next;
        next.reserve(pos.size() + zer.size());
        for (auto r : pos) next.push_back(std::move(rays[r]));
        for (auto r : zer) {
            rays[r].zeros.set(k);
            ++rays[r].nz;
            next.push_back(std::move(rays[r]));
        }
        for (auto& chunk : fresh)
            for (auto& r : chunk) next.push_back(std::move(r));
        rays = std::move(next);
    }

    std::vector<IntVec> out;
    out.reserve(rays.size());
    for (auto& r : rays) out.push_back(std::move(r.z));
    return out;
}

IntVec row_vector(const HRow& r) {
    RatVec v;
    v.reserve(r.a.size() + 1);
    v.push_back(r.b);
    v.insert(v.end(), r.a.begin(), r.a.end());
    return primitive(v);
}

HRow make_row(const IntVec& v) {
    HRow r;
    r.b = v.front();
    for (std::size_t i = 1; i < v.size(); ++i) r.a.emplace_back(v[i]);
    return r;
}

bool satisfies(const HRow& row, const RatVec& x) {
    Rat s = row.b;
    for (std::size_t i = 0; i < row.a.size(); ++i) s += row.a[i] * x[i];
    return sgn(s) >= 0;
}

bool on_hyperplane(const HRow& row, const RatVec& x) {
    Rat s = row.b;
    for (std::size_t i = 0; i < row.a.size(); ++i) s += row.a[i] * x[i];
    return sgn(s) == 0;
}

VRep dedupe(const VRep& v) {
    VRep out;
    out.dim = v.dim;
    std::set<RatVec, RatVecLess> seen;
    for (const auto& p : v.points)
        if (seen.insert(p).second) out.points.push_back(p);
    return out;
}

HRep canonicalize(const HRep& h) {
    const std::size_t m = h.dim;
    auto full = [&](const HRow& r) {
        if (r.a.size() != m) throw DimensionError("row length " + std::to_string(r.a.size() + 1) +
                                                  " does not match dimension " + std::to_string(m));
        RatVec v;
        v.reserve(m + 1);
        v.push_back(r.b);
        v.insert(v.end(), r.a.begin(), r.a.end());
        if (is_zero(v)) throw DomainError("all-zero row");
        return v;
    };

    std::vector<RatVec> lin;
    for (const auto& r : h.linearities) lin.push_back(full(r));
    std::vector<std::size_t> piv;
    lin = reverse_echelon(std::move(lin), &piv);

    HRep out;
    out.dim = m;
    std::set<IntVec, IntVecLess> eq, ineq;
    for (const auto& l : lin) {
        IntVec z = primitive(l);
        std::size_t first = 1;
        while (first <= m && sgn(z[first]) == 0) ++first;
        const Int& lead = first <= m ? z[first] : z[0];
        if (sgn(lead) < 0)
            for (auto& x : z) x = -x;
        eq.insert(std::move(z));
    }
    for (const auto& r : h.inequalities) {
        RatVec v = full(r);
        for (std::size_t i = 0; i < lin.size(); ++i) {
            if (sgn(v[piv[i]]) == 0) continue;
            Rat f = v[piv[i]];
            for (std::size_t k = 0; k <= m; ++k)
                if (sgn(lin[i][k]) != 0) v[k] -= f * lin[i][k];
        }
        bool trivial = std::all_of(v.begin() + 1, v.end(), [](const Rat& x) { return sgn(x) == 0; });
        if (trivial && sgn(v[0]) >= 0) continue;  // 0 <= b holds on the whole affine hull
        ineq.insert(primitive(v));
    }
    for (const auto& z : ineq) out.inequalities.push_back(make_row(z));
    for (const auto& z : eq) out.linearities.push_back(make_row(z));
    return out;
}

HRep hull(const VRep& v, const HullOptions& opt) {
    if (v.points.empty()) throw DomainError("hull of an empty point set");
    const std::size_t m = v.dim;
    for (const auto& p : v.points)
        if (p.size() != m) throw DimensionError("point of length " + std::to_string(p.size()) +
                                                " in a " + std::to_string(m) + "-dimensional V-representation");
    VRep u = dedupe(v);

    std::vector<RatVec> lifted;
    for (const auto& p : u.points) {
        RatVec r;
        r.reserve(m + 1);
        r.emplace_back(1);
        r.insert(r.end(), p.begin(), p.end());
        lifted.push_back(std::move(r));
    }
    std::vector<std::size_t> piv;
    auto eqs = reverse_echelon(null_space(lifted, m + 1), &piv);

    HRep out;
    out.dim = m;
    for (const auto& e : eqs) out.linearities.push_back(make_row(primitive(e)));

    std::vector<bool> pivot(m + 1, false);
    for (auto c : piv) pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 1; c <= m; ++c)
        if (!pivot[c]) free_cols.push_back(c);
    if (free_cols.empty()) return canonicalize(out);

    std::vector<IntVec> cons;
    cons.reserve(lifted.size());
    for (const auto& p : lifted) {
        RatVec r;
        r.reserve(free_cols.size() + 1);
        r.emplace_back(1);
        for (auto c : free_cols) r.push_back(p[c]);
        cons.push_back(primitive(r));
    }
    for (const auto& ray : cone_extreme_rays(cons, opt.jobs)) {
        HRow row;
        row.b = ray[0];
        row.a.assign(m, Rat(0));
        for (std::size_t i = 0; i < free_cols.size(); ++i) row.a[free_cols[i] - 1] = ray[i + 1];
        out.inequalities.push_back(std::move(row));
    }
    return canonicalize(out);
}

VRep vertices(const HRep& h, const HullOptions& opt) {
    const std::size_t m = h.dim;
    std::vector<IntVec> cons;
    auto add = [&](const HRow& r, bool negate) {
        if (r.a.size() != m) throw DimensionError("row length does not match dimension " + std::to_string(m));
        IntVec z = row_vector(r);
        if (negate)
            for (auto& x : z) x = -x;
        cons.push_back(std::move(z));
    };
    for (const auto& r : h.inequalities) add(r, false);
    for (const auto& r : h.linearities) {
        add(r, false);
        add(r, true);
    }
    IntVec t(m + 1, Int(0));
    t[0] = 1;
    cons.push_back(t);

    std::vector<RatVec> rm;
    for (const auto& c : cons) rm.push_back(to_rat(c));
    if (rank(rm) < m + 1) {
        auto ns = null_space(rm, m + 1);
        RatVec dir(ns.front().begin() + 1, ns.front().end());
        throw DomainError("unbounded: the solution set contains the line along " + vec_text(dir));
    }

    auto rays = cone_extreme_rays(cons, opt.jobs);
    bool any_point = std::any_of(rays.begin(), rays.end(), [](const IntVec& r) { return sgn(r[0]) > 0; });
    if (!any_point) throw DomainError("infeasible: the inequalities admit no point");
    for (const auto& r : rays) {
        if (sgn(r[0]) == 0) {
            RatVec dir(r.begin() + 1, r.end());
            throw DomainError("unbounded: ray " + vec_text(dir));
        }
    }
    std::set<RatVec, RatVecLess> pts;
    for (const auto& r : rays) {
        RatVec p(m);
        for (std::size_t i = 0; i < m; ++i) {
            p[i] = Rat(r[i + 1], r[0]);
            p[i].canonicalize();
        }
        pts.insert(std::move(p));
    }
    VRep out;
    out.dim = m;
    out.points.assign(pts.begin(), pts.end());
    return out;
}

HRepDiff compare_hreps(const HRep& actual, const HRep& expected) {
    if (actual.dim != expected.dim)
        throw DimensionError("comparing H-representations of dimension " + std::to_string(actual.dim) + " and " +
                             std::to_string(expected.dim));
    HRep x = canonicalize(actual), y = canonicalize(expected);
    auto diff = [](const std::vector<HRow>& p, const std::vector<HRow>& q) {
        std::set<IntVec, IntVecLess> qs;
        for (const auto& r : q) qs.insert(row_vector(r));
        std::vector<HRow> out;
        for (const auto& r : p)
            if (!qs.count(row_vector(r))) out.push_back(r);
        return out;
    };
    HRepDiff d;
    d.missing_inequalities = diff(y.inequalities, x.inequalities);
    d.extra_inequalities = diff(x.inequalities, y.inequalities);
    d.missing_linearities = diff(y.linearities, x.linearities);
    d.extra_linearities = diff(x.linearities, y.linearities);
    return d;
}

bool contains_inequality(const HRep& h, const HRow& row) {
    HRep probe;
    probe.dim = h.dim;
    probe.linearities = h.linearities;
    probe.inequalities = {row};
    HRep c = canonicalize(probe);
    HRep ch = canonicalize(h);
    if (c.inequalities.empty()) return false;
    IntVec want = row_vector(c.inequalities.front());
    for (const auto& r : ch.inequalities)
        if (row_vector(r) == want) return true;
    return false;
}

bool implied_equality(const HRep& h, const HRow& row) {
    if (h.linearities.empty()) return false;
    std::vector<RatVec> rows;
    for (const auto& l : h.linearities) rows.push_back(to_rat(row_vector(l)));
    std::size_t r = rank(rows);
    rows.push_back(to_rat(row_vector(row)));
    return rank(rows) == r;
}

}  // namespace qlogic
