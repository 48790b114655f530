#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stackkit/errors.hpp"

namespace stackkit {

// Shortest decimal with up to 17 significant digits; parses back to the
// identical binary value.
std::string format_double(double v);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);
std::uint64_t parse_hex64(std::string_view text);

// One "key value..." record per line; keys are unique per document here.
// Order-preserving so canonical serializations stay byte-stable.
class KeyValueDoc {
  public:
    static KeyValueDoc parse(std::string_view text);

    void add(std::string_view key, std::string_view value);
    void add_int(std::string_view key, long long value);
    void add_double(std::string_view key, double value);
    void add_bool(std::string_view key, bool value);

    bool has(std::string_view key) const;
    // Throw SchemaError when the key is missing.
    const std::string& get(std::string_view key) const;
    long long get_int(std::string_view key) const;
    double get_double(std::string_view key) const;
    bool get_bool(std::string_view key) const;

    std::string serialize() const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace stackkit
