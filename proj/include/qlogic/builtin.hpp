#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qlogic {

// Kinds of bundled data files, each in its own subdirectory of the data dir.
enum class DataKind { logic, vectors, terms, scenario, operators };

// Directory of the bundled data files. The QLOGIC_DATA environment variable
// overrides the location compiled into the library.
std::string data_dir();

// Resolves "builtin:<name>" to the bundled file of the given kind; any other
// source is returned unchanged as a path. Throws FormatError for an unknown name.
std::string resolve_source(std::string_view source, DataKind kind);

// Reads a whole file; throws Error if it cannot be opened.
std::string read_text_file(const std::string& path);

// resolve_source followed by read_text_file.
std::string load_source(std::string_view source, DataKind kind);

// Names of the bundled files of one kind, sorted.
std::vector<std::string> builtin_names(DataKind kind);

}  // namespace qlogic
