#include "minfind/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "minfind/error.hpp"

namespace minfind {

namespace {

const std::set<std::string, std::less<>> kUnsupportedHeads = {
    "let", "!", "match", "ite", "xor", "par", "_", "as", "define-fun", "define-fun-rec", "define-funs-rec",
    "define-sort", "declare-datatype", "declare-datatypes", "push", "pop", "get-model", "get-value",
    "check-sat-assuming", "reset", "reset-assertions", "echo", "get-assertions", "get-info", "get-option",
    "get-proof", "get-unsat-core", "get-assignment", "declare-fun-rec"};

const std::set<std::string, std::less<>> kInterpretedSorts = {"Int", "Real", "String", "RegLan", "Array", "BitVec",
                                                             "FloatingPoint", "RoundingMode", "Seq"};

const std::set<std::string, std::less<>> kReservedWords = {
    "true", "false", "and", "or", "not", "=>", "=", "distinct", "exists", "forall", "let", "!", "match",
    "ite", "xor", "par", "_", "as", "Bool", "NUMERAL", "DECIMAL", "STRING"};

[[noreturn]] void fail(const SExpr& at, const std::string& message) { throw ParseError(message, at.line, at.column); }

[[noreturn]] void unknown_sort(const SExpr& at) {
  if (at.is_list()) fail(at, "unsupported SMT-LIB feature: parametric sort");
  if (kInterpretedSorts.count(at.text) != 0) fail(at, "unsupported SMT-LIB feature: interpreted sort " + at.text);
  fail(at, "unknown sort " + at.text);
}

class TheoryParser {
 public:
  TheoryParser(const ParseOptions& options, Signature sig = {}) : options_(options) { theory_.signature = std::move(sig); }

  void command(const SExpr& cmd) {
    if (!cmd.is_list() || cmd.items.empty() || !cmd.items[0].is_symbol()) fail(cmd, "expected a command");
    const auto& head = cmd.items[0].text;
    if (head == "declare-sort") {
      declare_sort(cmd);
    } else if (head == "declare-fun") {
      declare_fun(cmd);
    } else if (head == "declare-const") {
      declare_const(cmd);
    } else if (head == "assert") {
      if (cmd.items.size() != 2) fail(cmd, "assert takes one formula");
      Scope scope;
      auto f = formula(cmd.items[1], scope);
      theory_.axioms.push_back({std::move(f), Provenance::User});
    } else if (head == "set-logic" || head == "set-info" || head == "set-option" || head == "check-sat" ||
               head == "exit") {
      // Harmless in a theory file.
    } else if (kUnsupportedHeads.count(head) != 0) {
      fail(cmd, "unsupported SMT-LIB feature: " + head);
    } else {
      fail(cmd, "unknown command: " + head);
    }
  }

  Theory take() { return std::move(theory_); }
  const Signature& signature() const { return theory_.signature; }

  using Scope = std::vector<Binding>;

  Formula formula(const SExpr& e, Scope& scope) {
    if (e.kind == SExpr::Kind::Numeral || e.kind == SExpr::Kind::String) fail(e, "unsupported SMT-LIB feature: literal " + e.text);
    if (e.kind == SExpr::Kind::Keyword) fail(e, "unexpected keyword " + e.text);
    if (e.is_symbol()) {
      if (!e.quoted && e.text == "true") return Formula::truth();
      if (!e.quoted && e.text == "false") return Formula::falsity();
      if (lookup_var(e.text, scope)) fail(e, "variable " + e.text + " used as a formula");
      const auto* decl = theory_.signature.find(e.text);
      if (decl == nullptr) fail(e, "unknown symbol " + e.text);
      if (!decl->is_predicate()) fail(e, "term " + e.text + " used where a formula is expected");
      if (!decl->args.empty()) fail(e, "predicate " + e.text + " needs " + std::to_string(decl->args.size()) + " arguments");
      return Formula::pred(e.text);
    }
    if (e.items.empty()) fail(e, "empty application");
    const auto& h = e.items[0];
    if (h.is_list()) fail(h, "unsupported SMT-LIB feature: indexed or qualified identifier");
    const std::string& head = h.text;
    std::size_t n = e.items.size() - 1;
    if (!h.quoted) {
      if (head == "and" || head == "or") {
        std::vector<Formula> parts;
        for (std::size_t i = 1; i <= n; ++i) parts.push_back(formula(e.items[i], scope));
        return head == "and" ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
      }
      if (head == "not") {
        if (n != 1) fail(e, "not takes one argument");
        return Formula::negate(formula(e.items[1], scope));
      }
      if (head == "=>") {
        if (n < 2) fail(e, "=> takes at least two arguments");
        auto result = formula(e.items[n], scope);
        for (std::size_t i = n - 1; i >= 1; --i) result = Formula::implies(formula(e.items[i], scope), result);
        return result;
      }
      if (head == "=" || head == "distinct") {
        if (n < 2) fail(e, head + " takes at least two arguments");
        if (is_boolean(e.items[1], scope)) fail(e, "unsupported SMT-LIB feature: equality between formulas");
        std::vector<Term> ts;
        for (std::size_t i = 1; i <= n; ++i) ts.push_back(term(e.items[i], scope));
        for (std::size_t i = 1; i < ts.size(); ++i)
          if (ts[i].sort() != ts[0].sort()) fail(e.items[i + 1], "ill-sorted: " + head + " between sorts " + ts[0].sort() + " and " + ts[i].sort());
        std::vector<Formula> parts;
        if (head == "=") {
          for (std::size_t i = 0; i + 1 < ts.size(); ++i) parts.push_back(Formula::eq(ts[i], ts[i + 1]));
        } else {
          for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = i + 1; j < ts.size(); ++j) parts.push_back(Formula::negate(Formula::eq(ts[i], ts[j])));
        }
        return Formula::conj(std::move(parts));
      }
      if (head == "exists" || head == "forall") {
        if (n != 2 || !e.items[1].is_list()) fail(e, head + " expects a variable list and a body");
        std::vector<Binding> vars;
        for (const auto& v : e.items[1].items) {
          if (!v.is_list() || v.items.size() != 2 || !v.items[0].is_symbol() || !v.items[1].is_symbol())
            fail(v, "malformed sorted variable");
          const auto& sort = v.items[1].text;
          if (sort == kBoolSort) fail(v, "unsupported SMT-LIB feature: quantified Bool variable " + v.items[0].text);
          if (!theory_.signature.is_uninterpreted(sort)) unknown_sort(v.items[1]);
          check_name(v.items[0]);
          vars.push_back({v.items[0].text, sort});
        }
        if (vars.empty()) fail(e, head + " binds no variables");
        scope.insert(scope.end(), vars.begin(), vars.end());
        auto body = formula(e.items[2], scope);
        scope.resize(scope.size() - vars.size());
        return head == "exists" ? Formula::exists(std::move(vars), body) : Formula::forall(std::move(vars), body);
      }
      if (kUnsupportedHeads.count(head) != 0) fail(h, "unsupported SMT-LIB feature: " + head);
    }
    const auto* decl = theory_.signature.find(head);
    if (decl == nullptr) fail(h, "unknown symbol " + head);
    if (!decl->is_predicate()) fail(e, "term " + head + " used where a formula is expected");
    return Formula::pred(head, arguments(e, *decl, scope));
  }

  Term term(const SExpr& e, Scope& scope) {
    if (e.kind == SExpr::Kind::Numeral || e.kind == SExpr::Kind::String)
      fail(e, "unsupported SMT-LIB feature: literal " + e.text);
    if (e.kind == SExpr::Kind::Keyword) fail(e, "unexpected keyword " + e.text);
    if (e.is_symbol()) {
      if (auto v = lookup_var(e.text, scope)) return Term::var(e.text, v->sort);
      const auto* decl = theory_.signature.find(e.text);
      if (decl == nullptr) fail(e, "unknown symbol " + e.text);
      if (decl->is_predicate()) fail(e, "formula " + e.text + " used where a term is expected");
      if (!decl->args.empty()) fail(e, "function " + e.text + " needs " + std::to_string(decl->args.size()) + " arguments");
      return Term::constant(e.text, decl->result);
    }
    if (e.items.empty()) fail(e, "empty application");
    const auto& h = e.items[0];
    if (h.is_list()) fail(h, "unsupported SMT-LIB feature: indexed or qualified identifier");
    if (!h.quoted && kUnsupportedHeads.count(h.text) != 0) fail(h, "unsupported SMT-LIB feature: " + h.text);
    const auto* decl = theory_.signature.find(h.text);
    if (decl == nullptr) {
      if (!h.quoted && kReservedWords.count(h.text) != 0) fail(e, "formula used where a term is expected");
      fail(h, "unknown symbol " + h.text);
    }
    if (decl->is_predicate()) fail(e, "formula " + h.text + " used where a term is expected");
    return Term::app(h.text, arguments(e, *decl, scope), decl->result);
  }

 private:
  std::vector<Term> arguments(const SExpr& e, const SymbolDecl& decl, Scope& scope) {
    std::size_t n = e.items.size() - 1;
    if (n != decl.args.size())
      fail(e, decl.name + " expects " + std::to_string(decl.args.size()) + " arguments, got " + std::to_string(n));
    std::vector<Term> args;
    for (std::size_t i = 0; i < n; ++i) {
      auto t = term(e.items[i + 1], scope);
      if (t.sort() != decl.args[i])
        fail(e.items[i + 1], "ill-sorted: argument " + std::to_string(i + 1) + " of " + decl.name + " has sort " +
                                 t.sort() + ", expected " + decl.args[i]);
      args.push_back(std::move(t));
    }
    return args;
  }

  bool is_boolean(const SExpr& e, const Scope& scope) const {
    if (e.is_symbol()) {
      if (e.quoted) {
        const auto* d = theory_.signature.find(e.text);
        return d != nullptr && d->is_predicate();
      }
      if (e.text == "true" || e.text == "false") return true;
      if (lookup_var(e.text, scope)) return false;
      const auto* d = theory_.signature.find(e.text);
      return d != nullptr && d->is_predicate();
    }
    if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol()) return false;
    const auto& head = e.items[0].text;
    if (!e.items[0].quoted && kReservedWords.count(head) != 0 && head != "ite") return true;
    const auto* d = theory_.signature.find(head);
    return d != nullptr && d->is_predicate();
  }

  static std::optional<Binding> lookup_var(const std::string& name, const Scope& scope) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->name == name) return *it;
    return std::nullopt;
  }

  bool check_name(const SExpr& e) {
    if (e.text.empty()) fail(e, "empty symbol");
    bool reserved = e.text.front() == kReservedPrefix;
    if (reserved && !options_.allow_reserved) fail(e, "symbol " + e.text + " uses the reserved prefix '@'");
    if (!e.quoted && kReservedWords.count(e.text) != 0) fail(e, "reserved word " + e.text + " used as a name");
    return reserved;
  }

  void declare_sort(const SExpr& cmd) {
    if (cmd.items.size() != 3 || !cmd.items[1].is_symbol()) fail(cmd, "malformed declare-sort");
    if (cmd.items[2].kind != SExpr::Kind::Numeral || cmd.items[2].text != "0")
      fail(cmd.items[2], "unsupported SMT-LIB feature: sort arity other than 0");
    bool generated = check_name(cmd.items[1]);
    try {
      theory_.signature.add_sort(cmd.items[1].text, generated);
    } catch (const LogicError& err) {
      fail(cmd, err.what());
    }
  }

  void declare_fun(const SExpr& cmd) {
    if (cmd.items.size() != 4 || !cmd.items[1].is_symbol() || !cmd.items[2].is_list() || !cmd.items[3].is_symbol())
      fail(cmd, "malformed declare-fun");
    std::vector<std::string> args;
    for (const auto& a : cmd.items[2].items) {
      if (!a.is_symbol()) fail(a, "unsupported SMT-LIB feature: parametric sort");
      if (a.text == kBoolSort) fail(a, "unsupported SMT-LIB feature: Bool-sorted argument");
      if (!theory_.signature.is_uninterpreted(a.text)) unknown_sort(a);
      args.push_back(a.text);
    }
    add(cmd, cmd.items[1], std::move(args), cmd.items[3]);
  }

  void declare_const(const SExpr& cmd) {
    if (cmd.items.size() != 3 || !cmd.items[1].is_symbol() || !cmd.items[2].is_symbol()) fail(cmd, "malformed declare-const");
    add(cmd, cmd.items[1], {}, cmd.items[2]);
  }

  void add(const SExpr& cmd, const SExpr& name, std::vector<std::string> args, const SExpr& result) {
    bool generated = check_name(name);
    if (!result.is_symbol() || !theory_.signature.has_sort(result.text)) unknown_sort(result);
    try {
      theory_.signature.add_symbol({name.text, std::move(args), result.text, generated});
    } catch (const LogicError& err) {
      fail(cmd, err.what());
    }
  }

  ParseOptions options_;
  Theory theory_;
};

bool is_simple_symbol(std::string_view s) {
  static const std::string_view extra = "~!@$%^&*_-+=<>.?/";
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || extra.find(c) != std::string_view::npos;
  });
}

void render_term(const Term& t, std::string& out) {
  if (t.args().empty()) {
    out += quote_symbol(t.name());
    return;
  }
  out += '(';
  out += quote_symbol(t.name());
  for (const auto& a : t.args()) {
    out += ' ';
    render_term(a, out);
  }
  out += ')';
}

void render_formula(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  auto nary = [&](std::string_view op) {
    out += '(';
    out += op;
    for (const auto& c : f.children()) {
      out += ' ';
      render_formula(c, out);
    }
    out += ')';
  };
  switch (f.kind()) {
    case K::True:
      out += "true";
      return;
    case K::False:
      out += "false";
      return;
    case K::Pred:
      if (f.terms().empty()) {
        out += quote_symbol(f.name());
        return;
      }
      out += '(';
      out += quote_symbol(f.name());
      for (const auto& a : f.terms()) {
        out += ' ';
        render_term(a, out);
      }
      out += ')';
      return;
    case K::Eq:
      out += "(= ";
      render_term(f.terms()[0], out);
      out += ' ';
      render_term(f.terms()[1], out);
      out += ')';
      return;
    case K::And:
      nary("and");
      return;
    case K::Or:
      nary("or");
      return;
    case K::Not:
      nary("not");
      return;
    case K::Implies:
      nary("=>");
      return;
    case K::Exists:
    case K::Forall:
      out += f.is(K::Exists) ? "(exists (" : "(forall (";
      for (std::size_t i = 0; i < f.bound().size(); ++i) {
        if (i) out += ' ';
        out += '(' + quote_symbol(f.bound()[i].name) + ' ' + quote_symbol(f.bound()[i].sort) + ')';
      }
      out += ") ";
      render_formula(f.body(), out);
      out += ')';
      return;
  }
}

// Recognises forall x:S. x = @S!1 or ... or x = @S!n over generated constants.
std::optional<std::pair<std::string, std::vector<std::string>>> covering_axiom(const Formula& f, const Signature& sig) {
  if (!f.is(Formula::Kind::Forall) || f.bound().size() != 1) return std::nullopt;
  const auto& var = f.bound()[0];
  std::vector<Formula> cases;
  if (f.body().is(Formula::Kind::Or)) {
    cases.assign(f.body().children().begin(), f.body().children().end());
  } else {
    cases.push_back(f.body());
  }
  std::vector<std::string> names;
  for (const auto& c : cases) {
    if (!c.is(Formula::Kind::Eq)) return std::nullopt;
    const auto& l = c.terms()[0];
    const auto& r = c.terms()[1];
    if (!l.is_var() || l.name() != var.name || r.is_var() || !r.args().empty()) return std::nullopt;
    const auto* d = sig.function(r.name());
    if (d == nullptr || !d->generated) return std::nullopt;
    if (r.name() != fresh_constant_name(var.sort, static_cast<int>(names.size()) + 1)) return std::nullopt;
    names.push_back(r.name());
  }
  return std::make_pair(var.sort, std::move(names));
}

}  // namespace

Theory parse_theory(std::string_view text, const ParseOptions& options) {
  TheoryParser parser(options);
  for (const auto& cmd : read_sexprs(text)) parser.command(cmd);
  return parser.take();
}

Formula parse_formula(std::string_view text, const Signature& sig, const ParseOptions& options) {
  auto exprs = read_sexprs(text);
  if (exprs.size() != 1) throw ParseError("expected exactly one formula", 1, 1);
  TheoryParser parser(options, sig);
  TheoryParser::Scope scope;
  return parser.formula(exprs[0], scope);
}

Term parse_term(std::string_view text, const Signature& sig, const ParseOptions& options) {
  auto exprs = read_sexprs(text);
  if (exprs.size() != 1) throw ParseError("expected exactly one term", 1, 1);
  TheoryParser parser(options, sig);
  TheoryParser::Scope scope;
  return parser.term(exprs[0], scope);
}

std::string quote_symbol(std::string_view name) {
  // '@'-prefixed symbols are reserved for solvers by the standard; bars keep them legal.
  if (is_simple_symbol(name) && name.front() != kReservedPrefix && kReservedWords.count(name) == 0)
    return std::string(name);
  return "|" + std::string(name) + "|";
}

std::string print_term(const Term& t) {
  std::string out;
  render_term(t, out);
  return out;
}

std::string print_formula(const Formula& f) {
  std::string out;
  render_formula(f, out);
  return out;
}

std::string print_declarations(const Signature& sig) {
  std::string out;
  for (const auto& s : sig.sorts()) out += "(declare-sort " + quote_symbol(s) + " 0)\n";
  for (const auto& d : sig.symbols()) {
    out += "(declare-fun " + quote_symbol(d.name) + " (";
    for (std::size_t i = 0; i < d.args.size(); ++i) {
      if (i) out += ' ';
      out += quote_symbol(d.args[i]);
    }
    out += ") " + quote_symbol(d.result) + ")\n";
  }
  return out;
}

std::string to_term_form(const Theory& t) {
  std::string out = print_declarations(t.signature);
  for (const auto& a : t.axioms) out += "(assert " + print_formula(a.formula) + ")\n";
  return out;
}

Theory from_term_form(std::string_view text) {
  auto t = parse_theory(text, ParseOptions{.allow_reserved = true});
  for (auto& a : t.axioms) {
    auto cover = covering_axiom(a.formula, t.signature);
    if (!cover || t.bounding.count(cover->first) != 0) continue;
    a.provenance = Provenance::Bounding;
    t.bounding.emplace(cover->first, std::move(cover->second));
  }
  return t;
}

}  // namespace minfind
