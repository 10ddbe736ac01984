#include "lmlp/kb_io.hpp"

#include "lmlp/error.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace lmlp {

namespace {

Triple triple_from_json(const nlohmann::json& j, std::string_view line) {
    for (const char* key : {"s", "p", "o"}) {
        if (!j.contains(key) || !j[key].is_string()) {
            throw Error(ErrorKind::UnparsableText, "missing string field '" + std::string(key) +
                                                       "' in: " + std::string(line));
        }
    }
    return Triple::make(j["s"].get<std::string>(), j["p"].get<std::string>(),
                        j["o"].get<std::string>());
}

nlohmann::json triple_to_json(const Triple& t) {
    return {{"s", t.subject.text()}, {"p", t.relation.text()}, {"o", t.object.text()}};
}

}  // namespace

Triple parse_fact_line(std::string_view raw) {
    const std::string_view line = trim(raw);
    if (line.starts_with('{')) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorKind::UnparsableText, std::string(line));
        }
        return triple_from_json(j, line);
    }
    const auto a = line.find('\t');
    const auto b = a == std::string_view::npos ? a : line.find('\t', a + 1);
    if (b == std::string_view::npos || line.find('\t', b + 1) != std::string_view::npos) {
        throw Error(ErrorKind::UnparsableText, std::string(line));
    }
    const auto s = trim(line.substr(0, a));
    const auto p = trim(line.substr(a + 1, b - a - 1));
    const auto o = trim(line.substr(b + 1));
    if (s.empty() || p.empty() || o.empty()) throw Error(ErrorKind::UnparsableText, std::string(line));
    return Triple::make(s, p, o);
}

FactFile read_fact_stream(std::istream& in) {
    FactFile out;
    std::string line;
    while (std::getline(in, line)) {
        const std::string_view view = trim(line);
        if (view.empty() || view.starts_with('#')) continue;
        if (view.starts_with("{\"query\"")) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(view);
            } catch (const nlohmann::json::exception&) {
                throw Error(ErrorKind::UnparsableText, std::string(view));
            }
            out.query = triple_from_json(j["query"], view);
            continue;
        }
        out.facts.push_back(parse_fact_line(view));
    }
    return out;
}

FactFile read_fact_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return read_fact_stream(in);
}

KnowledgeBase load_kb(const std::string& path) { return KnowledgeBase(read_fact_file(path).facts); }

void write_fact_stream(std::ostream& out, const std::vector<Triple>& facts,
                       const std::optional<Triple>& query, FactEncoding encoding) {
    if (query) out << nlohmann::json{{"query", triple_to_json(*query)}}.dump() << "\n";
    for (const Triple& t : facts) {
        if (encoding == FactEncoding::Tsv) {
            out << to_tsv(t) << "\n";
        } else {
            out << triple_to_json(t).dump() << "\n";
        }
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text, bool overwrite) {
    namespace fs = std::filesystem;
    if (!overwrite && fs::exists(path)) {
        throw Error(ErrorKind::Io, path + " exists (use --force to overwrite)");
    }
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << text;
}

}  // namespace lmlp
