#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace minfind {

/// A parsed S-expression node with its source position.
struct SExpr {
  enum class Kind { List, Symbol, Keyword, Numeral, String };

  Kind kind = Kind::List;
  std::string text;  // symbol name with bars stripped, keyword, numeral or string body
  bool quoted = false;
  std::vector<SExpr> items;
  int line = 1;
  int column = 1;

  bool is_list() const { return kind == Kind::List; }
  bool is_symbol() const { return kind == Kind::Symbol; }
  bool is_symbol(std::string_view name) const { return kind == Kind::Symbol && text == name; }

  std::string to_string() const;
};

/// Reads every top-level S-expression in `text`. ";" starts a line comment.
/// Throws ParseError with line/column on unbalanced input.
std::vector<SExpr> read_sexprs(std::string_view text);

/// Incremental reader: returns true and fills `out` once `buffer` holds one
/// complete top-level expression; `consumed` is the number of bytes used.
bool try_read_sexpr(std::string_view buffer, SExpr& out, std::size_t& consumed);

}  // namespace minfind
