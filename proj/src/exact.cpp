#include "qlogic/exact.hpp"

#include "qlogic/error.hpp"

#include <algorithm>
#include <cctype>

namespace qlogic {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

Int parse_integer(std::string_view s, std::string_view whole) {
    std::string_view body = s;
    if (!body.empty() && (body.front() == '+' || body.front() == '-')) body.remove_prefix(1);
    if (!all_digits(body)) throw FormatError("not a number: '" + std::string(whole) + "'");
    std::string text(s.front() == '+' ? s.substr(1) : s);
    return Int(text, 10);
}

Int pow10(unsigned long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

}  // namespace

bool is_exact_token(std::string_view token) {
    return token.find_first_of(".eE") == std::string_view::npos;
}

Rat parse_rational(std::string_view token) {
    if (token.empty()) throw FormatError("empty number");
    if (auto slash = token.find('/'); slash != std::string_view::npos) {
        Int num = parse_integer(token.substr(0, slash), token);
        Int den = parse_integer(token.substr(slash + 1), token);
        if (den == 0) throw FormatError("zero denominator in '" + std::string(token) + "'");
        Rat r(num, den);
        r.canonicalize();
        return r;
    }

    std::string_view s = token;
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_part = s.substr(e + 1);
        Int ex = parse_integer(exp_part, token);
        if (!ex.fits_slong_p() || abs(ex) > 100000) throw FormatError("exponent out of range: '" + std::string(token) + "'");
        exponent = ex.get_si();
        s = s.substr(0, e);
    }
    std::string digits;
    long frac = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
            throw FormatError("not a number: '" + std::string(token) + "'");
        digits = std::string(ip) + std::string(fp);
        frac = static_cast<long>(fp.size());
    } else {
        if (!all_digits(s)) throw FormatError("not a number: '" + std::string(token) + "'");
        digits = std::string(s);
    }
    Int num(digits, 10);
    if (negative) num = -num;
    long shift = exponent - frac;
    Rat r;
    if (shift >= 0) {
        r = Rat(num * pow10(static_cast<unsigned long>(shift)));
    } else {
        r = Rat(num, pow10(static_cast<unsigned long>(-shift)));
        r.canonicalize();
    }
    return r;
}

std::string to_string(const Int& z) { return z.get_str(); }

std::string to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_str();
}

IntVec primitive(const RatVec& v) {
    Int l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    IntVec out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(Int(x.get_num() * (l / x.get_den())));
    return primitive(std::move(out));
}

IntVec primitive(IntVec v) {
    Int g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return v;
}

RatVec to_rat(const IntVec& v) {
    RatVec out;
    out.reserve(v.size());
    for (const auto& x : v) out.emplace_back(x);
    return out;
}

bool is_zero(const RatVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return sgn(x) == 0; });
}

bool is_zero(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return sgn(x) == 0; });
}

int compare(const IntVec& a, const IntVec& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0 ? -1 : 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

int compare(const RatVec& a, const RatVec& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0 ? -1 : 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

std::vector<RatVec> reverse_echelon(std::vector<RatVec> rows, std::vector<std::size_t>* pivots) {
    std::vector<std::size_t> piv;
    if (rows.empty()) {
        if (pivots) pivots->clear();
        return rows;
    }
    const std::size_t cols = rows.front().size();
    std::size_t r = 0;
    for (std::size_t c = cols; c-- > 0 && r < rows.size();) {
        std::size_t p = r;
        while (p < rows.size() && sgn(rows[p][c]) == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        Rat inv = 1 / rows[r][c];
        for (auto& x : rows[r]) x *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || sgn(rows[i][c]) == 0) continue;
            Rat f = rows[i][c];
            for (std::size_t k = 0; k < cols; ++k)
                if (sgn(rows[r][k]) != 0) rows[i][k] -= f * rows[r][k];
        }
        piv.push_back(c);
        ++r;
    }
    rows.resize(r);
    std::reverse(rows.begin(), rows.end());
    std::reverse(piv.begin(), piv.end());
    if (pivots) *pivots = std::move(piv);
    return rows;
}

namespace {

// Forward reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(std::vector<RatVec>& m, std::size_t cols) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && sgn(m[p][c]) == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[r], m[p]);
        Rat inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || sgn(m[i][c]) == 0) continue;
            Rat f = m[i][c];
            for (std::size_t k = c; k < cols; ++k)
                if (sgn(m[r][k]) != 0) m[i][k] -= f * m[r][k];
        }
        piv.push_back(c);
        ++r;
    }
    m.resize(r);
    return piv;
}

}  // namespace

std::vector<RatVec> null_space(std::vector<RatVec> m, std::size_t cols) {
    auto piv = rref(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<RatVec> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        RatVec w(cols, Rat(0));
        w[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) w[piv[i]] = -m[i][f];
        basis.push_back(std::move(w));
    }
    return basis;
}

std::size_t rank(std::vector<RatVec> m) {
    if (m.empty()) return 0;
    std::size_t cols = m.front().size();
    return rref(m, cols).size();
}

}  // namespace qlogic
