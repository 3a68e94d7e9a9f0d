#include "qlogic/error.hpp"
#include "qlogic/polytope.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qlogic {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::size_t parse_count(const std::string& tok, int line) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw FormatError("expected a non-negative integer, got '" + tok + "'", line);
    return std::stoul(tok);
}

std::string render_rows(const std::vector<std::vector<std::string>>& rows) {
    std::size_t w = 1;
    for (const auto& r : rows)
        for (const auto& s : r) w = std::max(w, s.size());
    std::string out;
    for (const auto& r : rows) {
        for (const auto& s : r) {
            out += ' ';
            out.append(w - s.size(), ' ');
            out += s;
        }
        out += '\n';
    }
    return out;
}

std::string render_comments(const std::vector<std::string>& comments) {
    std::string out;
    for (const auto& c : comments) out += c.empty() ? "*\n" : "* " + c + "\n";
    return out;
}

}  // namespace

DdDocument parse_dd(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;

    DdDocument doc;
    bool is_v = false;
    std::vector<std::size_t> lin_idx;
    bool in_body = false, seen_header = false, ended = false;
    std::size_t rows = 0, cols = 0;
    std::vector<std::pair<int, std::vector<std::string>>> data;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (ended) continue;  // trailing options are ignored
        if (line.empty()) continue;
        if (line.front() == '*') {
            if (!in_body) doc.comments.push_back(trim(line.substr(1)));
            continue;
        }
        if (!in_body) {
            if (line == "V-representation") {
                is_v = true;
            } else if (line == "H-representation") {
                is_v = false;
            } else if (line.rfind("linearity", 0) == 0) {
                auto toks = split_ws(line);
                if (toks.size() < 2) throw FormatError("linearity needs a count", lineno);
                std::size_t k = parse_count(toks[1], lineno);
                if (toks.size() != k + 2)
                    throw FormatError("linearity declares " + std::to_string(k) + " rows but lists " +
                                          std::to_string(toks.size() - 2),
                                      lineno);
                for (std::size_t i = 2; i < toks.size(); ++i) lin_idx.push_back(parse_count(toks[i], lineno));
            } else if (line == "begin") {
                in_body = true;
            } else {
                throw FormatError("unexpected line before 'begin': '" + line + "'", lineno);
            }
            continue;
        }
        if (line == "end") {
            ended = true;
            continue;
        }
        auto toks = split_ws(line);
        if (!seen_header) {
            if (toks.size() != 3) throw FormatError("malformed header, expected '<rows> <cols> <numbertype>'", lineno);
            rows = parse_count(toks[0], lineno);
            cols = parse_count(toks[1], lineno);
            if (toks[2] != "real" && toks[2] != "integer" && toks[2] != "rational")
                throw FormatError("unknown number type '" + toks[2] + "'", lineno);
            if (cols < 2) throw FormatError("a representation needs at least 2 columns", lineno);
            seen_header = true;
            continue;
        }
        if (toks.size() != cols)
            throw FormatError("row has " + std::to_string(toks.size()) + " entries, header says " +
                                  std::to_string(cols),
                              lineno);
        data.emplace_back(lineno, std::move(toks));
    }
    if (!in_body) throw FormatError("missing 'begin'");
    if (!ended) throw FormatError("missing 'end'");
    if (!seen_header) throw FormatError("empty body: no '<rows> <cols> <numbertype>' header");
    if (rows == 0 || data.empty()) throw FormatError("empty body: no data rows");
    if (data.size() != rows)
        throw FormatError("header declares " + std::to_string(rows) + " rows, body has " + std::to_string(data.size()));

    if (is_v) {
        if (!lin_idx.empty()) throw FormatError("linearity is not supported in a V-representation");
        VRep v;
        v.dim = cols - 1;
        for (auto& [ln, toks] : data) {
            Rat lead = parse_rational(toks[0]);
            if (lead != 1) throw FormatError("leading marker must be 1 (vertices only), got " + toks[0], ln);
            RatVec p;
            for (std::size_t i = 1; i < cols; ++i) p.push_back(parse_rational(toks[i]));
            v.points.push_back(std::move(p));
        }
        doc.body = std::move(v);
    } else {
        std::set<std::size_t> lin(lin_idx.begin(), lin_idx.end());
        for (auto i : lin)
            if (i == 0 || i > rows) throw FormatError("linearity index " + std::to_string(i) + " out of range");
        HRep h;
        h.dim = cols - 1;
        for (std::size_t r = 0; r < data.size(); ++r) {
            HRow row;
            row.b = parse_rational(data[r].second[0]);
            for (std::size_t i = 1; i < cols; ++i) row.a.push_back(parse_rational(data[r].second[i]));
            (lin.count(r + 1) ? h.linearities : h.inequalities).push_back(std::move(row));
        }
        doc.body = std::move(h);
    }
    return doc;
}

std::string emit_dd(const VRep& v, const std::vector<std::string>& comments) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : v.points) {
        std::vector<std::string> r{"1"};
        for (const auto& x : p) r.push_back(to_string(x));
        rows.push_back(std::move(r));
    }
    std::string out = render_comments(comments);
    out += "V-representation\nbegin\n";
    out += " " + std::to_string(v.points.size()) + " " + std::to_string(v.dim + 1) + " real\n";
    out += render_rows(rows);
    out += "end\n";
    return out;
}

std::string emit_dd(const HRep& h, const std::vector<std::string>& comments) {
    std::vector<std::vector<std::string>> rows;
    auto push = [&](const HRow& row) {
        std::vector<std::string> r{to_string(row.b)};
        for (const auto& x : row.a) r.push_back(to_string(x));
        rows.push_back(std::move(r));
    };
    for (const auto& r : h.inequalities) push(r);
    for (const auto& r : h.linearities) push(r);
    std::string out = render_comments(comments);
    out += "H-representation\n";
    if (!h.linearities.empty()) {
        out += "linearity " + std::to_string(h.linearities.size()) + " ";
        for (std::size_t i = 0; i < h.linearities.size(); ++i)
            out += " " + std::to_string(h.inequalities.size() + i + 1);
        out += "\n";
    }
    out += "begin\n";
    out += " " + std::to_string(rows.size()) + " " + std::to_string(h.dim + 1) + " real\n";
    out += render_rows(rows);
    out += "end\n";
    return out;
}

}  // namespace qlogic
