#include "config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace rauzy::config {
namespace {

class TomlReader {
 public:
  explicit TomlReader(std::string_view text) : text_(text) {}

  nlohmann::json parse() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* current = &root;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        current = table_header(root);
      } else {
        key_value(*current);
      }
      expect_line_end();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("config line " + std::to_string(line_) + ": " + what);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  char take() {
    char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_inline_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) take();
  }

  void skip_comment() {
    if (peek() == '#')
      while (!at_end() && peek() != '\n') take();
  }

  void skip_blank_lines() {
    while (!at_end()) {
      skip_inline_space();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        take();
      } else {
        return;
      }
    }
  }

  // Whitespace, newlines and comments are all insignificant inside arrays.
  void skip_all_space() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        take();
      } else if (c == '#') {
        skip_comment();
      } else {
        return;
      }
    }
  }

  void expect_line_end() {
    skip_inline_space();
    skip_comment();
    if (at_end()) return;
    if (peek() == '\r') take();
    if (peek() != '\n') fail(std::string("unexpected character '") + peek() + "'");
    take();
  }

  std::string key() {
    skip_inline_space();
    if (peek() == '"') return basic_string();
    std::string k;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                         peek() == '-'))
      k.push_back(take());
    if (k.empty()) fail("expected a key");
    return k;
  }

  nlohmann::json* table_header(nlohmann::json& root) {
    take();
    bool array_table = false;
    if (peek() == '[') {
      take();
      array_table = true;
    }
    std::string name = key();
    skip_inline_space();
    if (take() != ']') fail("expected ']'");
    if (array_table && take() != ']') fail("expected ']]'");
    if (array_table) {
      nlohmann::json& arr = root[name];
      if (arr.is_null()) arr = nlohmann::json::array();
      if (!arr.is_array()) fail("'" + name + "' is not an array of tables");
      arr.push_back(nlohmann::json::object());
      return &arr.back();
    }
    nlohmann::json& table = root[name];
    if (!table.is_null()) fail("table '" + name + "' defined twice");
    table = nlohmann::json::object();
    return &table;
  }

  void key_value(nlohmann::json& table) {
    std::string k = key();
    skip_inline_space();
    if (peek() != '=') fail("expected '=' after key '" + k + "'");
    take();
    skip_inline_space();
    if (table.contains(k)) fail("duplicate key '" + k + "'");
    table[k] = value();
  }

  nlohmann::json value() {
    char c = peek();
    if (c == '"') return basic_string();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return number();
  }

  std::string basic_string() {
    take();
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      char c = take();
      if (c == '"') break;
      if (c == '\\') {
        char e = take();
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  nlohmann::json number() {
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                         peek() == '-' || peek() == '.' || peek() == '_'))
      take();
    std::string token;
    for (char c : text_.substr(start, pos_ - start))
      if (c != '_') token.push_back(c);
    if (token.empty()) fail("expected a value");
    bool is_float = token.find_first_of(".eE") != std::string::npos;
    try {
      std::size_t used = 0;
      if (is_float) {
        double v = std::stod(token, &used);
        if (used == token.size()) return v;
      } else {
        long long v = std::stoll(token, &used);
        if (used == token.size()) return v;
      }
    } catch (const std::exception&) {
    }
    fail("invalid value '" + token + "'");
  }

  nlohmann::json array() {
    take();
    nlohmann::json arr = nlohmann::json::array();
    while (true) {
      skip_all_space();
      if (peek() == ']') {
        take();
        return arr;
      }
      arr.push_back(value());
      skip_all_space();
      if (peek() == ',') {
        take();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  nlohmann::json inline_table() {
    take();
    nlohmann::json table = nlohmann::json::object();
    skip_inline_space();
    if (peek() == '}') {
      take();
      return table;
    }
    while (true) {
      key_value(table);
      skip_inline_space();
      char c = take();
      if (c == '}') return table;
      if (c != ',') fail("expected ',' or '}' in inline table");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

nlohmann::json parse_toml(std::string_view text) { return TomlReader(text).parse(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rauzy::config
