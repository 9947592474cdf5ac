#include "rhp/toml.hpp"

#include <cctype>

namespace rhp {

namespace {

using nlohmann::ordered_json;

class TomlParser {
 public:
  explicit TomlParser(const std::string& t) : s_(t) {}

  ordered_json parse() {
    ordered_json root = ordered_json::object();
    ordered_json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        get();
        if (peek() == '[') fail("arrays of tables are not supported");
        auto path = parse_key_path();
        skip_inline_space();
        expect(']');
        end_of_line();
        table = &root;
        for (std::size_t i = 0; i < path.size(); ++i) {
          auto& next = (*table)[path[i]];
          if (next.is_null()) next = ordered_json::object();
          if (!next.is_object()) fail("'" + path[i] + "' is not a table");
          table = &next;
        }
        continue;
      }
      auto path = parse_key_path();
      skip_inline_space();
      expect('=');
      skip_inline_space();
      int line = line_, col = col_;
      ordered_json v = parse_value();
      end_of_line();
      ordered_json* t = table;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto& next = (*t)[path[i]];
        if (next.is_null()) next = ordered_json::object();
        t = &next;
      }
      if (t->contains(path.back())) throw TomlError("duplicate key '" + path.back() + "'", line, col);
      (*t)[path.back()] = std::move(v);
    }
    return root;
  }

 private:
  bool eof() const { return i_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[i_]; }
  char get() {
    char c = s_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw TomlError(msg, line_, col_); }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }
  void skip_inline_space() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) get();
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') get();
  }
  void skip_blank_lines() {
    while (!eof()) {
      skip_inline_space();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') get();
      else break;
    }
  }
  // Whitespace, comments and newlines inside arrays.
  void skip_any_space() {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') get();
      else if (c == '#') skip_comment();
      else break;
    }
  }
  void end_of_line() {
    skip_inline_space();
    skip_comment();
    if (peek() == '\r') get();
    if (!eof() && peek() != '\n') fail("unexpected text after value");
    if (!eof()) get();
  }

  std::string parse_key() {
    if (peek() == '"') return parse_string();
    std::string k;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) k += get();
    if (k.empty()) fail("expected a key");
    return k;
  }
  std::vector<std::string> parse_key_path() {
    std::vector<std::string> path;
    skip_inline_space();
    path.push_back(parse_key());
    while (true) {
      skip_inline_space();
      if (peek() != '.') break;
      get();
      skip_inline_space();
      path.push_back(parse_key());
    }
    return path;
  }

  std::string parse_string() {
    expect('"');
    std::string r;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) fail("unterminated string");
        char e = get();
        switch (e) {
          case 'n': r += '\n'; break;
          case 't': r += '\t'; break;
          case '"': r += '"'; break;
          case '\\': r += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
        continue;
      }
      r += c;
    }
    return r;
  }

  ordered_json parse_value() {
    char c = peek();
    if (c == '"') return parse_string();
    if (c == '[') {
      get();
      ordered_json arr = ordered_json::array();
      skip_any_space();
      while (peek() != ']') {
        arr.push_back(parse_value());
        skip_any_space();
        if (peek() == ',') {
          get();
          skip_any_space();
        } else if (peek() != ']') {
          fail("expected ',' or ']' in array");
        }
      }
      get();
      return arr;
    }
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      if (c == '-' || c == '+') num += get();
      while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_'))
        if (get() != '_') num += s_[i_ - 1];
      if (num.empty() || num == "-" || num == "+") fail("malformed integer");
      if (peek() == '.' || peek() == 'e' || peek() == 'E') fail("floating-point values are not supported");
      try {
        return std::stoll(num);
      } catch (const std::exception&) {
        fail("integer out of range");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string w;
      while (!eof() && std::isalpha(static_cast<unsigned char>(peek()))) w += get();
      if (w == "true") return true;
      if (w == "false") return false;
      fail("unexpected '" + w + "'");
    }
    fail("expected a value");
  }

  const std::string& s_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace

nlohmann::ordered_json parse_toml(const std::string& text) { return TomlParser(text).parse(); }

}  // namespace rhp
