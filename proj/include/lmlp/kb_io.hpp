#pragma once
// Line-delimited fact files.
//
// Each non-blank line is one record, either `subject<TAB>relation<TAB>object`
// or a JSON object {"s":..,"p":..,"o":..}. A JSON line of the form
// {"query":{"s":..,"p":..,"o":..}} marks the query of an instance file.
// Lines starting with '#' are comments.

#include "lmlp/knowledge_base.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lmlp {

// Parses one record. Throws UnparsableText with the offending line.
Triple parse_fact_line(std::string_view line);

struct FactFile {
    std::vector<Triple> facts;
    std::optional<Triple> query;
};

FactFile read_fact_stream(std::istream& in);
FactFile read_fact_file(const std::string& path);
KnowledgeBase load_kb(const std::string& path);

enum class FactEncoding { Tsv, Json };

void write_fact_stream(std::ostream& out, const std::vector<Triple>& facts,
                       const std::optional<Triple>& query = std::nullopt,
                       FactEncoding encoding = FactEncoding::Tsv);

// Whole-file helpers used by the CLI and split writer.
std::string read_text_file(const std::string& path);
// Fails with Io if the file exists and overwrite is false.
void write_text_file(const std::string& path, std::string_view text, bool overwrite);

}  // namespace lmlp
