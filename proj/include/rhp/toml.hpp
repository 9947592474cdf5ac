#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

namespace rhp {

class TomlError : public std::runtime_error {
 public:
  TomlError(const std::string& msg, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}
  int line, column;
};

// Subset used by scenario files: comments, [dotted.table] headers, key = value with strings,
// integers, booleans and (nested, multi-line) arrays. Tables keep declaration order.
nlohmann::ordered_json parse_toml(const std::string& text);

}  // namespace rhp
