#include "qlogic/builtin.hpp"

#include "qlogic/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qlogic {

namespace {

struct KindInfo {
    const char* dir;
    const char* ext;
};

KindInfo info(DataKind k) {
    switch (k) {
        case DataKind::logic: return {"logics", ".logic"};
        case DataKind::vectors: return {"vectors", ".vec"};
        case DataKind::terms: return {"terms", ".terms"};
        case DataKind::scenario: return {"scenarios", ".scenario"};
        case DataKind::operators: return {"operators", ".op"};
    }
    return {"", ""};
}

constexpr std::string_view prefix = "builtin:";

}  // namespace

std::string data_dir() {
    if (const char* env = std::getenv("QLOGIC_DATA"); env && *env) return env;
    return QLOGIC_DATA_DIR;
}

std::string resolve_source(std::string_view source, DataKind kind) {
    if (source.substr(0, prefix.size()) != prefix) return std::string(source);
    std::string name(source.substr(prefix.size()));
    auto [dir, ext] = info(kind);
    std::filesystem::path p = std::filesystem::path(data_dir()) / dir / (name + ext);
    if (name.empty() || name.find('/') != std::string::npos || !std::filesystem::exists(p)) {
        std::string known;
        for (const auto& n : builtin_names(kind)) known += (known.empty() ? "" : ", ") + n;
        throw FormatError("unknown built-in " + std::string(dir) + " entry '" + name + "' (known: " + known + ")");
    }
    return p.string();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string load_source(std::string_view source, DataKind kind) { return read_text_file(resolve_source(source, kind)); }

std::vector<std::string> builtin_names(DataKind kind) {
    auto [dir, ext] = info(kind);
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(data_dir()) / dir, ec))
        if (e.path().extension() == ext) out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace qlogic
