#include "stackkit/text_format.hpp"

#include <cstdio>
#include <cstdlib>

namespace stackkit {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view text) {
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw SchemaError("malformed number: '" + s + "'");
    }
    return v;
}

long long parse_int(std::string_view text) {
    const std::string s(text);
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw SchemaError("malformed integer: '" + s + "'");
    }
    return v;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t parse_hex64(std::string_view text) {
    if (text.size() != 16) throw SchemaError("malformed hash: '" + std::string(text) + "'");
    const std::string s(text);
    char* end = nullptr;
    const std::uint64_t v = std::strtoull(s.c_str(), &end, 16);
    if (end != s.c_str() + s.size()) {
        throw SchemaError("malformed hash: '" + s + "'");
    }
    return v;
}

KeyValueDoc KeyValueDoc::parse(std::string_view text) {
    KeyValueDoc doc;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        const std::size_t sep = line.find(' ');
        if (sep == std::string_view::npos) {
            doc.entries_.emplace_back(std::string(line), std::string());
        } else {
            doc.entries_.emplace_back(std::string(line.substr(0, sep)),
                                      std::string(line.substr(sep + 1)));
        }
    }
    return doc;
}

void KeyValueDoc::add(std::string_view key, std::string_view value) {
    entries_.emplace_back(std::string(key), std::string(value));
}

void KeyValueDoc::add_int(std::string_view key, long long value) {
    add(key, std::to_string(value));
}

void KeyValueDoc::add_double(std::string_view key, double value) {
    add(key, format_double(value));
}

void KeyValueDoc::add_bool(std::string_view key, bool value) {
    add(key, value ? "true" : "false");
}

bool KeyValueDoc::has(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return true;
    }
    return false;
}

const std::string& KeyValueDoc::get(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    throw SchemaError("missing key: '" + std::string(key) + "'");
}

long long KeyValueDoc::get_int(std::string_view key) const { return parse_int(get(key)); }

double KeyValueDoc::get_double(std::string_view key) const { return parse_double(get(key)); }

bool KeyValueDoc::get_bool(std::string_view key) const {
    const std::string& v = get(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw SchemaError("malformed bool for key '" + std::string(key) + "': '" + v + "'");
}

std::string KeyValueDoc::serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        if (!v.empty()) {
            out += ' ';
            out += v;
        }
        out += '\n';
    }
    return out;
}

}  // namespace stackkit
