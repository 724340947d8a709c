#include "minfind/sexpr.hpp"

#include <cctype>
#include <optional>

#include "minfind/error.hpp"

namespace minfind {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() const { return pos_ >= text_.size(); }
  std::size_t position() const { return pos_; }

  // nullopt means the input ended in the middle of an expression.
  std::optional<SExpr> read() {
    skip_space();
    if (at_end()) return std::nullopt;
    SExpr node;
    node.line = line_;
    node.column = column_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      node.kind = SExpr::Kind::List;
      while (true) {
        skip_space();
        if (at_end()) return std::nullopt;
        if (text_[pos_] == ')') {
          advance();
          return node;
        }
        auto child = read();
        if (!child) return std::nullopt;
        node.items.push_back(std::move(*child));
      }
    }
    if (c == ')') throw ParseError("unexpected ')'", line_, column_);
    if (c == '|') {
      advance();
      std::string name;
      while (!at_end() && text_[pos_] != '|') {
        if (text_[pos_] == '\\') throw ParseError("backslash in quoted symbol", line_, column_);
        name.push_back(text_[pos_]);
        advance();
      }
      if (at_end()) return std::nullopt;
      advance();
      node.kind = SExpr::Kind::Symbol;
      node.text = std::move(name);
      node.quoted = true;
      return node;
    }
    if (c == '"') {
      advance();
      std::string body;
      while (true) {
        if (at_end()) return std::nullopt;
        if (text_[pos_] == '"') {
          advance();
          if (!at_end() && text_[pos_] == '"') {
            body.push_back('"');
            advance();
            continue;
          }
          break;
        }
        body.push_back(text_[pos_]);
        advance();
      }
      node.kind = SExpr::Kind::String;
      node.text = std::move(body);
      return node;
    }
    std::string atom;
    while (!at_end()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';' ||
          d == '"' || d == '|')
        break;
      atom.push_back(d);
      advance();
    }
    // An atom touching the end of a partial buffer might continue.
    if (at_end() && partial_) return std::nullopt;
    if (atom.front() == ':') {
      node.kind = SExpr::Kind::Keyword;
    } else if (std::isdigit(static_cast<unsigned char>(atom.front())) || atom.front() == '#') {
      node.kind = SExpr::Kind::Numeral;
    } else {
      node.kind = SExpr::Kind::Symbol;
    }
    node.text = std::move(atom);
    return node;
  }

  void set_partial(bool partial) { partial_ = partial; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  bool partial_ = false;
};

void append_symbol(std::string& out, const SExpr& e) {
  if (e.quoted) {
    out += '|';
    out += e.text;
    out += '|';
  } else {
    out += e.text;
  }
}

void render(const SExpr& e, std::string& out) {
  switch (e.kind) {
    case SExpr::Kind::List: {
      out += '(';
      bool first = true;
      for (const auto& item : e.items) {
        if (!first) out += ' ';
        first = false;
        render(item, out);
      }
      out += ')';
      break;
    }
    case SExpr::Kind::Symbol:
      append_symbol(out, e);
      break;
    case SExpr::Kind::String:
      out += '"';
      for (char c : e.text) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
      break;
    default:
      out += e.text;
  }
}

}  // namespace

std::string SExpr::to_string() const {
  std::string out;
  render(*this, out);
  return out;
}

std::vector<SExpr> read_sexprs(std::string_view text) {
  Reader reader(text);
  std::vector<SExpr> result;
  while (true) {
    reader.skip_space();
    if (reader.at_end()) break;
    int line = reader.line();
    int column = reader.column();
    auto e = reader.read();
    if (!e) throw ParseError("unbalanced parentheses or unterminated token", line, column);
    result.push_back(std::move(*e));
  }
  return result;
}

bool try_read_sexpr(std::string_view buffer, SExpr& out, std::size_t& consumed) {
  Reader reader(buffer);
  reader.set_partial(true);
  auto e = reader.read();
  if (!e) return false;
  out = std::move(*e);
  consumed = reader.position();
  return true;
}

}  // namespace minfind
