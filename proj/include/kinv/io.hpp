#pragma once

#include "kinv/cuntz_krieger.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <fstream>
#include <istream>
#include <string>
#include <string_view>

namespace kinv {
namespace io {

using json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 digest failed");
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

inline Int parse_int(const std::string& token, std::size_t line_no = 0) {
    try {
        return Int(token);
    } catch (const std::exception&) {
        std::ostringstream os;
        if (line_no) os << "line " << line_no << ": ";
        os << "'" << token << "' is not an integer";
        throw ParseError(os.str());
    }
}

// Matrix text format: a header line "N" (or "N M" for rectangular input),
// then N lines of M whitespace-separated integer tokens. Lines starting
// with '#' are ignored; so is trailing whitespace.
inline IntMatrix parse_matrix_text(std::istream& in) {
    std::vector<std::pair<std::size_t, std::string>> lines;  // (line number, text)
    std::string raw;
    for (std::size_t no = 1; std::getline(in, raw); ++no) {
        std::size_t start = raw.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (raw[start] == '#') continue;
        lines.emplace_back(no, raw);
    }
    if (lines.empty()) throw ParseError("empty matrix file");

    auto tokens_of = [](const std::string& s) {
        std::istringstream ss(s);
        std::vector<std::string> toks;
        std::string t;
        while (ss >> t) toks.push_back(t);
        return toks;
    };

    auto header = tokens_of(lines[0].second);
    if (header.size() != 1 && header.size() != 2) {
        std::ostringstream os;
        os << "line " << lines[0].first << ": header must be 'N' or 'N M'";
        throw ParseError(os.str());
    }
    Int rows_i = parse_int(header[0], lines[0].first);
    Int cols_i = header.size() == 2 ? parse_int(header[1], lines[0].first) : rows_i;
    if (rows_i < 0 || cols_i < 0 || rows_i > 4096 || cols_i > 4096)
        throw ParseError("matrix dimensions out of range");
    const auto rows = rows_i.convert_to<std::size_t>();
    const auto cols = cols_i.convert_to<std::size_t>();

    if (lines.size() != rows + 1) {
        std::ostringstream os;
        os << "expected " << rows << " matrix rows, found " << lines.size() - 1;
        throw ParseError(os.str());
    }
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& [no, text] = lines[i + 1];
        auto toks = tokens_of(text);
        if (toks.size() != cols) {
            std::ostringstream os;
            os << "line " << no << ": row has " << toks.size() << " entries, expected " << cols;
            throw ParseError(os.str());
        }
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = parse_int(toks[j], no);
    }
    return m;
}

// ---- JSON forms ------------------------------------------------------------
// Group and element integers are serialized as decimal strings so that the
// formats carry arbitrary precision.

inline json group_to_json(const FgAbelianGroup& g) {
    json j;
    j["rank"] = g.free_rank;
    json factors = json::array();
    for (const Int& d : g.invariant_factors) factors.push_back(d.str());
    j["factors"] = std::move(factors);
    j["text"] = g.to_string();
    return j;
}

inline json element_to_json(const std::vector<Int>& coords) {
    json j = json::array();
    for (const Int& c : coords) j.push_back(c.str());
    return j;
}

inline Int json_int(const json& v, const char* what) {
    if (v.is_number_unsigned()) return Int(v.get<unsigned long long>());
    if (v.is_number_integer()) return Int(v.get<long long>());
    if (v.is_string()) {
        try {
            return Int(v.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    throw ParseError(std::string(what) + ": expected an integer or decimal string");
}

inline std::pair<std::size_t, std::vector<Int>> group_fields_from_json(const json& j,
                                                                       const char* what) {
    if (!j.is_object() || !j.contains("rank") || !j.contains("factors"))
        throw ParseError(std::string(what) + ": expected {rank, factors}");
    Int rank = json_int(j["rank"], what);
    if (rank < 0 || rank > 4096) throw ParseError(std::string(what) + ": rank out of range");
    if (!j["factors"].is_array())
        throw ParseError(std::string(what) + ": factors must be an array");
    std::vector<Int> factors;
    for (const auto& f : j["factors"]) {
        Int d = json_int(f, what);
        if (d < 1) throw ParseError(std::string(what) + ": factors must be positive");
        factors.push_back(std::move(d));
    }
    return {rank.convert_to<std::size_t>(), std::move(factors)};
}

// Triple document: {"k0": {rank, factors}, "unit": [coords], "k1": {rank,
// factors}} with unit coordinates listed free part first, then one
// coordinate per factor. Factor lists that are not divisibility chains are
// renormalized on load, carrying the unit through the transformation.
inline KTriple parse_triple_json(const json& j) {
    if (!j.is_object() || !j.contains("k0") || !j.contains("unit") || !j.contains("k1"))
        throw ParseError("triple document must contain k0, unit, k1");
    auto [rank0, factors0] = group_fields_from_json(j["k0"], "k0");
    auto [rank1, factors1] = group_fields_from_json(j["k1"], "k1");
    if (!j["unit"].is_array()) throw ParseError("unit must be an array of coordinates");
    std::vector<Int> unit;
    for (const auto& c : j["unit"]) unit.push_back(json_int(c, "unit"));
    if (unit.size() != rank0 + factors0.size()) {
        std::ostringstream os;
        os << "unit has " << unit.size() << " coordinates, expected "
           << rank0 + factors0.size();
        throw ParseError(os.str());
    }

    auto diag_presentation = [](std::size_t rank, const std::vector<Int>& factors) {
        IntMatrix rel(rank + factors.size(), factors.size());
        for (std::size_t k = 0; k < factors.size(); ++k) rel(rank + k, k) = factors[k];
        return GroupPresentation(rank + factors.size(), std::move(rel));
    };
    PointedGroup pg(diag_presentation(rank0, factors0), std::move(unit));
    FgAbelianGroup k1 = cokernel(diag_presentation(rank1, factors1).relations);
    return KTriple::from_presentation(pg, std::move(k1));
}

inline json triple_to_json(const KTriple& t) {
    json j;
    j["k0"] = group_to_json(t.k0);
    j["unit"] = element_to_json(t.unit);
    j["k1"] = group_to_json(t.k1);
    return j;
}

// ---- input loading ---------------------------------------------------------

struct ParsedInput {
    enum class Kind { Matrix, Triple };
    Kind kind;
    IntMatrix matrix;  // raw, unvalidated (Kind::Matrix)
    KTriple triple;    // Kind::Triple
    std::string path;
    std::string content_sha256;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A document whose first meaningful character is '{' is a triple document;
// anything else is matrix text.
inline ParsedInput load_input(const std::string& path) {
    ParsedInput p;
    p.path = path;
    std::string content = read_file(path);
    p.content_sha256 = sha256_hex(content);
    std::size_t start = content.find_first_not_of(" \t\r\n");
    if (start != std::string::npos && content[start] == '{') {
        p.kind = ParsedInput::Kind::Triple;
        json j = json::parse(content, nullptr, false);
        if (j.is_discarded()) throw ParseError("'" + path + "': invalid JSON");
        p.triple = parse_triple_json(j);
    } else {
        p.kind = ParsedInput::Kind::Matrix;
        std::istringstream ss(content);
        try {
            p.matrix = parse_matrix_text(ss);
        } catch (const ParseError& e) {
            throw ParseError("'" + path + "': " + e.what());
        }
    }
    return p;
}

// Normalizes any input to its K-triple; matrices are validated first.
inline KTriple as_triple(const ParsedInput& p) {
    if (p.kind == ParsedInput::Kind::Triple) return p.triple;
    return ck::k_triple(ck::validate(p.matrix));
}

}  // namespace io
}  // namespace kinv
