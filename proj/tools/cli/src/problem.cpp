#include "symkit/cli/problem.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace symkit::cli {

// ---------------------------------------------------------------------------
// Expr

Expr Expr::number(std::string digits) {
  Expr e;
  e.kind = Kind::Number;
  e.text = std::move(digits);
  return e;
}

Expr Expr::imag() {
  Expr e;
  e.kind = Kind::Imag;
  return e;
}

Expr Expr::symbol(std::string name) {
  Expr e;
  e.kind = Kind::Symbol;
  e.text = std::move(name);
  return e;
}

Expr Expr::derivative(std::string unknown, std::vector<std::string> vars) {
  Expr e;
  e.kind = Kind::Derivative;
  e.text = std::move(unknown);
  e.vars = std::move(vars);
  return e;
}

Expr Expr::unary(Kind kind, Expr a) {
  Expr e;
  e.kind = kind;
  e.args.push_back(std::move(a));
  return e;
}

Expr Expr::binary(Kind kind, Expr a, Expr b) {
  Expr e;
  e.kind = kind;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

Expr Expr::power(Expr base, unsigned exponent) {
  Expr e;
  e.kind = Kind::Pow;
  e.args.push_back(std::move(base));
  e.exponent = exponent;
  return e;
}

namespace {

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Neg:
      return 3;
    case Expr::Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string render(const Expr& e, int min_prec) {
  std::string s;
  switch (e.kind) {
    case Expr::Kind::Number:
      s = e.text;
      break;
    case Expr::Kind::Imag:
      s = "i";
      break;
    case Expr::Kind::Symbol:
      s = e.text;
      break;
    case Expr::Kind::Derivative:
      s = "D[" + e.text;
      for (const auto& v : e.vars) s += "," + v;
      s += "]";
      break;
    case Expr::Kind::Neg:
      s = "-" + render(e.args[0], 3);
      break;
    case Expr::Kind::Add:
      s = render(e.args[0], 1) + " + " + render(e.args[1], 2);
      break;
    case Expr::Kind::Sub:
      s = render(e.args[0], 1) + " - " + render(e.args[1], 2);
      break;
    case Expr::Kind::Mul:
      s = render(e.args[0], 2) + "*" + render(e.args[1], 3);
      break;
    case Expr::Kind::Div:
      s = render(e.args[0], 2) + "/" + render(e.args[1], 3);
      break;
    case Expr::Kind::Pow:
      s = render(e.args[0], 5) + "^" + std::to_string(e.exponent);
      break;
  }
  return precedence(e.kind) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string render(const Expr& e) { return render(e, 0); }

// ---------------------------------------------------------------------------
// Errors

namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::vector<std::string> expected,
                         const std::string& found)
    : ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": expected " +
                 join(expected, " or ") + ", found " + found),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&] {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    Token t{Tok::Punct, "", line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Ident;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        t.text += src[i];
        advance();
      }
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Int;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        t.text += src[i];
        advance();
      }
    } else if (std::string_view(";,=()[]+-*/^").find(c) != std::string_view::npos) {
      t.text = std::string(1, c);
      advance();
    } else {
      throw SyntaxError(line, col, {"a token"}, "'" + std::string(1, c) + "'");
    }
    out.push_back(std::move(t));
  }
  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

const std::set<std::string> kKeywords = {"vars", "unknowns", "translations", "eq", "operator", "field", "task"};
const std::set<std::string> kTaskKinds = {"solve", "evolution", "adjoint", "schrodinger", "bracket"};
const std::vector<std::string> kPrimaryExpected = {"integer", "identifier", "'i'", "'D['", "'('", "'-'"};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  ProblemFile problem() {
    ProblemFile p;
    std::set<std::string> seen;
    while (peek().kind != Tok::End) {
      const Token& kw = peek();
      if (kw.kind != Tok::Ident || !kKeywords.count(kw.text)) {
        fail({"vars", "unknowns", "translations", "eq", "operator", "field", "task"});
      }
      const std::size_t line = kw.line;
      const std::string word = next().text;
      bool once = word != "eq";
      if (once && !seen.insert(word).second) {
        throw SemanticError("line " + std::to_string(line) + ": duplicate '" + word + "' statement");
      }
      if (word == "vars") {
        p.vars = ident_list();
        declare(p, p.vars, line);
      } else if (word == "unknowns") {
        p.unknowns = ident_list();
        declare(p, p.unknowns, line);
      } else if (word == "translations") {
        p.translations = ident_list();
        for (const auto& t : p.translations) {
          if (!is_var(p, t) && !is_unknown(p, t)) {
            throw SemanticError("line " + std::to_string(line) + ": translation '" + t + "' is not declared");
          }
        }
      } else if (word == "eq") {
        Equation eq;
        eq.line = line;
        eq.lhs = expr();
        expect("=");
        eq.rhs = expr();
        check_names(p, eq.lhs, line);
        check_names(p, eq.rhs, line);
        p.equations.push_back(std::move(eq));
      } else if (word == "operator") {
        p.op = expr();
        check_names(p, *p.op, line);
      } else if (word == "field") {
        do {
          FieldComponent fc;
          fc.name = ident();
          if (!is_var(p, fc.name) && !is_unknown(p, fc.name)) {
            throw SemanticError("line " + std::to_string(line) + ": field component '" + fc.name +
                                "' is not a declared variable");
          }
          expect("=");
          fc.value = expr();
          check_names(p, fc.value, line);
          p.field.push_back(std::move(fc));
        } while (accept(","));
      } else {
        p.task = task(line);
      }
      expect(";");
    }
    return p;
  }

  Expr single_expression() {
    Expr e = expr();
    expect_end();
    return e;
  }

  std::vector<LambdaItem> lambda_list_only() {
    auto out = lambda_list();
    expect_end();
    return out;
  }

  std::vector<unsigned> caps_only() {
    auto out = int_list();
    expect_end();
    return out;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool accept(const std::string& punct) {
    if (peek().kind == Tok::Punct && peek().text == punct) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.line, t.column, std::move(expected), found);
  }

  void expect(const std::string& punct) {
    if (!accept(punct)) fail({"'" + punct + "'"});
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail({"end of input"});
  }

  std::string ident() {
    if (peek().kind != Tok::Ident) fail({"identifier"});
    return next().text;
  }

  unsigned integer() {
    if (peek().kind != Tok::Int) fail({"integer"});
    const Token& t = peek();
    if (t.text.size() > 9) throw SemanticError("line " + std::to_string(t.line) + ": integer too large");
    return static_cast<unsigned>(std::stoul(next().text));
  }

  std::vector<std::string> ident_list() {
    std::vector<std::string> out{ident()};
    while (accept(",")) out.push_back(ident());
    return out;
  }

  std::vector<unsigned> int_list() {
    std::vector<unsigned> out{integer()};
    while (accept(",")) out.push_back(integer());
    return out;
  }

  Task task(std::size_t line) {
    Task t;
    t.kind = ident();
    if (!kTaskKinds.count(t.kind)) {
      throw SemanticError("line " + std::to_string(line) + ": unknown task '" + t.kind + "'");
    }
    std::set<std::string> seen;
    while (peek().kind == Tok::Ident) {
      std::string key = next().text;
      if (!seen.insert(key).second) {
        throw SemanticError("line " + std::to_string(line) + ": option '" + key + "' given twice");
      }
      expect("=");
      if (key == "order") {
        t.order = integer();
      } else if (key == "qmax") {
        t.qmax = integer();
      } else if (key == "caps") {
        t.caps = int_list();
      } else if (key == "lambda") {
        t.lambdas = lambda_list();
      } else {
        throw SemanticError("line " + std::to_string(line) + ": unknown task option '" + key + "'");
      }
    }
    return t;
  }

  std::vector<LambdaItem> lambda_list() {
    std::vector<LambdaItem> out{lambda_item()};
    while (accept(",")) out.push_back(lambda_item());
    return out;
  }

  LambdaItem lambda_item() {
    if (peek().kind == Tok::Punct && peek().text == "(") {
      const std::size_t save = pos_;
      ++pos_;
      Expr first = expr();
      if (accept(",")) {
        LambdaItem tuple{std::move(first)};
        do {
          tuple.push_back(expr());
        } while (accept(","));
        expect(")");
        return tuple;
      }
      pos_ = save;
    }
    return LambdaItem{expr()};
  }

  Expr expr() {
    Expr left = term();
    while (peek().kind == Tok::Punct && (peek().text == "+" || peek().text == "-")) {
      auto kind = next().text == "+" ? Expr::Kind::Add : Expr::Kind::Sub;
      left = Expr::binary(kind, std::move(left), term());
    }
    return left;
  }

  Expr term() {
    Expr left = unary();
    while (peek().kind == Tok::Punct && (peek().text == "*" || peek().text == "/")) {
      auto kind = next().text == "*" ? Expr::Kind::Mul : Expr::Kind::Div;
      left = Expr::binary(kind, std::move(left), unary());
    }
    return left;
  }

  Expr unary() {
    if (accept("-")) return Expr::unary(Expr::Kind::Neg, unary());
    Expr base = primary();
    if (accept("^")) return Expr::power(std::move(base), integer());
    return base;
  }

  Expr primary() {
    const Token& t = peek();
    if (t.kind == Tok::Int) return Expr::number(next().text);
    if (t.kind == Tok::Ident) {
      std::string name = next().text;
      if (name == "i") return Expr::imag();
      if (name == "D" && accept("[")) {
        std::string unknown = ident();
        std::vector<std::string> vars;
        while (accept(",")) vars.push_back(ident());
        if (vars.empty()) fail({"','"});
        expect("]");
        return Expr::derivative(std::move(unknown), std::move(vars));
      }
      return Expr::symbol(std::move(name));
    }
    if (accept("(")) {
      Expr inner = expr();
      expect(")");
      return inner;
    }
    fail(kPrimaryExpected);
  }

  static bool is_var(const ProblemFile& p, const std::string& n) {
    return std::find(p.vars.begin(), p.vars.end(), n) != p.vars.end();
  }
  static bool is_unknown(const ProblemFile& p, const std::string& n) {
    return std::find(p.unknowns.begin(), p.unknowns.end(), n) != p.unknowns.end();
  }

  static void declare(const ProblemFile& p, const std::vector<std::string>& names, std::size_t line) {
    std::set<std::string> all;
    for (const auto& n : p.vars) all.insert(n);
    std::size_t total = p.vars.size();
    for (const auto& n : p.unknowns) all.insert(n);
    total += p.unknowns.size();
    if (all.size() != total) {
      throw SemanticError("line " + std::to_string(line) + ": a name is declared twice");
    }
    for (const auto& n : names) {
      if (n == "i" || n == "D" || kKeywords.count(n)) {
        throw SemanticError("line " + std::to_string(line) + ": '" + n + "' is reserved");
      }
    }
  }

  static void check_names(const ProblemFile& p, const Expr& e, std::size_t line) {
    auto where = "line " + std::to_string(line) + ": ";
    switch (e.kind) {
      case Expr::Kind::Symbol:
        if (!is_var(p, e.text) && !is_unknown(p, e.text)) {
          throw SemanticError(where + "undeclared variable '" + e.text + "'");
        }
        break;
      case Expr::Kind::Derivative:
        if (!is_unknown(p, e.text)) throw SemanticError(where + "'" + e.text + "' is not an unknown");
        for (const auto& v : e.vars) {
          if (!is_var(p, v)) throw SemanticError(where + "'" + v + "' is not an independent variable");
        }
        break;
      default:
        for (const auto& a : e.args) check_names(p, a, line);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string render_lambda(const LambdaItem& item) {
  if (item.size() == 1) return render(item[0]);
  std::vector<std::string> parts;
  for (const auto& e : item) parts.push_back(render(e));
  return "(" + join(parts, ", ") + ")";
}

unsigned max_order(const Expr& e) {
  if (e.kind == Expr::Kind::Derivative) return static_cast<unsigned>(e.vars.size());
  unsigned m = 0;
  for (const auto& a : e.args) m = std::max(m, max_order(a));
  return m;
}

}  // namespace

ProblemFile parse_problem(std::string_view text) { return Parser(text).problem(); }

Expr parse_expression(std::string_view text) { return Parser(text).single_expression(); }

std::vector<LambdaItem> parse_lambda_list(std::string_view text) { return Parser(text).lambda_list_only(); }

std::vector<unsigned> parse_caps(std::string_view text) { return Parser(text).caps_only(); }

std::string render_problem(const ProblemFile& p) {
  std::string out;
  if (!p.vars.empty()) out += "vars " + join(p.vars, ", ") + ";\n";
  if (!p.unknowns.empty()) out += "unknowns " + join(p.unknowns, ", ") + ";\n";
  if (!p.translations.empty()) out += "translations " + join(p.translations, ", ") + ";\n";
  for (const auto& eq : p.equations) out += "eq " + render(eq.lhs) + " = " + render(eq.rhs) + ";\n";
  if (p.op) out += "operator " + render(*p.op) + ";\n";
  if (!p.field.empty()) {
    std::vector<std::string> parts;
    for (const auto& fc : p.field) parts.push_back(fc.name + " = " + render(fc.value));
    out += "field " + join(parts, ", ") + ";\n";
  }
  if (p.task) {
    const Task& t = *p.task;
    out += "task " + t.kind;
    if (t.order) out += " order=" + std::to_string(*t.order);
    if (t.qmax) out += " qmax=" + std::to_string(*t.qmax);
    if (!t.caps.empty()) {
      std::vector<std::string> caps;
      for (unsigned c : t.caps) caps.push_back(std::to_string(c));
      out += " caps=" + join(caps, ",");
    }
    if (!t.lambdas.empty()) {
      std::vector<std::string> items;
      for (const auto& l : t.lambdas) items.push_back(render_lambda(l));
      out += " lambda=" + join(items, ", ");
    }
    out += ";\n";
  }
  return out;
}

unsigned max_derivative_order(const ProblemFile& p) {
  unsigned m = 0;
  for (const auto& eq : p.equations) m = std::max({m, max_order(eq.lhs), max_order(eq.rhs)});
  if (p.op) m = std::max(m, max_order(*p.op));
  for (const auto& fc : p.field) m = std::max(m, max_order(fc.value));
  return m;
}

}  // namespace symkit::cli
