#include "lpt/parser.hpp"

#include <cctype>
#include <map>

#include "lpt/error.hpp"

namespace lpt {

namespace {

enum class Tok { Var, Ident, Int, LParen, RParen, LBrack, RBrack, Bar, Comma, Dot, Neck, Leq, Lt, Eq, Gt, Geq, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::Var: return "variable";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Bar: return "'|'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Neck: return "':-'";
    case Tok::Leq: return "'=<'";
    case Tok::Lt: return "'<'";
    case Tok::Eq: return "'='";
    case Tok::Gt: return "'>'";
    case Tok::Geq: return "'>='";
    case Tok::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t{Tok::End, "", line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Var;
        t.text = take_word();
      } else if (std::islower(static_cast<unsigned char>(c))) {
        t.kind = Tok::Ident;
        t.text = take_word();
        while (pos_ < src_.size() && src_[pos_] == '\'') t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        t.kind = Tok::Int;
        t.text += advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += advance();
      } else {
        t.kind = punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string take_word() {
    std::string w;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      w += advance();
    }
    // Trailing primes, as in append'.
    while (!w.empty() && pos_ < src_.size() && src_[pos_] == '\'') w += advance();
    return w;
  }

  bool next_is(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  Tok punct(Token& t) {
    struct P {
      std::string_view s;
      Tok k;
    };
    static const P table[] = {{":-", Tok::Neck}, {"=<", Tok::Leq}, {">=", Tok::Geq}, {"(", Tok::LParen},
                              {")", Tok::RParen}, {"[", Tok::LBrack}, {"]", Tok::RBrack}, {"|", Tok::Bar},
                              {",", Tok::Comma},  {".", Tok::Dot},    {"<", Tok::Lt},      {">", Tok::Gt},
                              {"=", Tok::Eq}};
    for (const auto& p : table) {
      if (next_is(p.s)) {
        for (std::size_t i = 0; i < p.s.size(); ++i) t.text += advance();
        return p.k;
      }
    }
    throw SyntaxError(line_, col_, "token",
                      "unexpected character '" + std::string(1, src_[pos_]) + "' at line " +
                          std::to_string(line_) + ", column " + std::to_string(col_));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Program program(std::string name) {
    Program p(std::move(name));
    std::map<std::string, int> counters;
    while (peek().kind != Tok::End) {
      auto [head, body] = clause();
      std::string id = p.fresh_id(head.predicate() + "." + std::to_string(++counters[head.predicate()]));
      p.add(Clause{std::move(id), std::move(head), std::move(body)});
    }
    return p;
  }

  std::pair<Literal, std::vector<Literal>> clause() {
    const Token& at = peek();
    Literal head = literal();
    if (head.is_builtin()) fail(at, "user atom", "a clause head cannot be a builtin comparison");
    std::vector<Literal> body;
    if (accept(Tok::Neck)) body = conjunction();
    expect(Tok::Dot);
    return {std::move(head), std::move(body)};
  }

  std::vector<Literal> conjunction() {
    std::vector<Literal> out;
    out.push_back(literal());
    while (accept(Tok::Comma)) out.push_back(literal());
    return out;
  }

  Literal literal() {
    const Token& at = peek();
    Term lhs = term();
    switch (peek().kind) {
      case Tok::Leq: next(); return Literal::builtin(BuiltinOp::Leq, lhs, term());
      case Tok::Lt: next(); return Literal::builtin(BuiltinOp::Lt, lhs, term());
      case Tok::Eq: next(); return Literal::builtin(BuiltinOp::Eq, lhs, term());
      case Tok::Gt: next(); return Literal::builtin(BuiltinOp::Lt, term(), lhs);
      case Tok::Geq: next(); return Literal::builtin(BuiltinOp::Leq, term(), lhs);
      default: break;
    }
    if (!lhs.is_compound() || lhs.is_nil() || lhs.is_cons()) fail(at, "atom", "expected an atom");
    if (lhs.arity() == 2) {
      static const std::map<std::string, BuiltinOp> ops = {
          {"leq", BuiltinOp::Leq}, {"lt", BuiltinOp::Lt}, {"eq", BuiltinOp::Eq}};
      if (auto it = ops.find(lhs.functor()); it != ops.end()) {
        return Literal::builtin(it->second, lhs.args()[0], lhs.args()[1]);
      }
    }
    return Literal::atom(lhs.functor(), lhs.args());
  }

  Term term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var: next(); return Term::var(t.text);
      case Tok::Int: next(); return Term::integer(std::stoll(t.text));
      case Tok::LBrack: return list();
      case Tok::Ident: {
        next();
        if (t.text == "neg_inf") return Term::neg_inf();
        std::vector<Term> args;
        if (accept(Tok::LParen)) {
          args.push_back(term());
          while (accept(Tok::Comma)) args.push_back(term());
          expect_one_of(Tok::RParen, Tok::Comma);
        }
        return Term::compound(t.text, std::move(args));
      }
      default: fail(t, "term", "expected a term but found " + describe(t.kind));
    }
  }

  Term list() {
    expect(Tok::LBrack);
    if (accept(Tok::RBrack)) return Term::nil();
    std::vector<Term> items;
    items.push_back(term());
    while (accept(Tok::Comma)) items.push_back(term());
    std::optional<Term> tail;
    if (accept(Tok::Bar)) tail = term();
    expect_one_of(Tok::RBrack, Tok::Comma);
    return Term::list(items, tail);
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k) {
    if (!accept(k)) fail(peek(), describe(k), "expected " + describe(k) + " but found " + describe(peek().kind));
  }
  // Used where either token would have been acceptable; the first is consumed.
  void expect_one_of(Tok k, Tok alt) {
    if (accept(k)) return;
    fail(peek(), describe(k) + " or " + describe(alt),
         "expected " + describe(k) + " or " + describe(alt) + " but found " + describe(peek().kind));
  }
  void expect_end() {
    accept(Tok::Dot);
    if (peek().kind != Tok::End) fail(peek(), "end of input", "unexpected " + describe(peek().kind));
  }

  [[noreturn]] void fail(const Token& at, const std::string& expected, const std::string& msg) const {
    throw SyntaxError(at.line, at.column, expected,
                      "line " + std::to_string(at.line) + ", column " + std::to_string(at.column) + ": " + msg);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse_program(std::string_view text, std::string name) { return Parser(text).program(std::move(name)); }

std::vector<Literal> parse_conjunction(std::string_view text) {
  Parser p(text);
  auto out = p.conjunction();
  p.expect_end();
  return out;
}

Literal parse_literal(std::string_view text) {
  Parser p(text);
  auto out = p.literal();
  p.expect_end();
  return out;
}

Term parse_term(std::string_view text) {
  Parser p(text);
  auto out = p.term();
  p.expect_end();
  return out;
}

Clause parse_clause(std::string_view text, std::string id) {
  Parser p(text);
  auto [head, body] = p.clause();
  p.expect_end();
  return Clause{std::move(id), std::move(head), std::move(body)};
}

}  // namespace lpt
