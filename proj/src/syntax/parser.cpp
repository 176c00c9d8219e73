#include "normlog/error.hpp"
#include "normlog/syntax.hpp"

#include <cctype>
#include <optional>

namespace normlog {

namespace {

enum class Tok {
  Ident,
  Nat,
  Less,
  Equal,
  Bang,
  Amp,
  Bar,
  Arrow,
  Dot,
  LParen,
  RParen,
  Comma,
  LBrace,
  RBrace,
  RBracket,
  Greater,
  Plus,
  Minus,
  Keyword, // name[ for specials and modalities
  StitOpen,
  APath,
  EPath,
  Temporal,
  True,
  False,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos = 0;
  TimeValue value = 0;
  char op = 0; // X, F, G, U for temporal tokens
  Direction dir = Direction::Forward;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

const char* const keywords[] = {"V", "D", "R", "P", "VIOLA", "VIOLO", "VIOL", "RVIOL", "PVIOL", "FORB", "OBL"};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t at, std::string text = {}) {
    out.push_back(Token{k, std::move(text), at});
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (ident_start(c)) {
      while (i < src.size() && ident_char(src[i])) ++i;
      std::string word(src.substr(start, i - start));
      char next = i < src.size() ? src[i] : '\0';
      if (word.size() == 1 && std::string_view("XFGU").find(word[0]) != std::string_view::npos &&
          (next == '+' || (next == '-' && !(i + 1 < src.size() && src[i + 1] == '>')))) {
        Token t{Tok::Temporal, word + next, start};
        t.op = word[0];
        t.dir = next == '+' ? Direction::Forward : Direction::Backward;
        out.push_back(t);
        ++i;
      } else if (word == "E" && next == '<') {
        push(Tok::StitOpen, start, "E<");
        ++i;
      } else if (next == '[') {
        bool known = false;
        for (const char* k : keywords) known = known || word == k;
        if (!known) throw ParseError("unknown modality keyword '" + word + "'", start);
        push(Tok::Keyword, start, word);
        ++i;
      } else if (word == "Apath") {
        push(Tok::APath, start, word);
      } else if (word == "Epath") {
        push(Tok::EPath, start, word);
      } else if (word == "true") {
        push(Tok::True, start, word);
      } else if (word == "false") {
        push(Tok::False, start, word);
      } else {
        push(Tok::Ident, start, word);
      }
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      TimeValue v = 0;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        v = v * 10 + static_cast<TimeValue>(src[i] - '0');
        ++i;
      }
      Token t{Tok::Nat, std::string(src.substr(start, i - start)), start};
      t.value = v;
      out.push_back(t);
      continue;
    }
    ++i;
    switch (c) {
    case '<': push(Tok::Less, start, "<"); break;
    case '=': push(Tok::Equal, start, "="); break;
    case '!': push(Tok::Bang, start, "!"); break;
    case '&': push(Tok::Amp, start, "&"); break;
    case '|': push(Tok::Bar, start, "|"); break;
    case '.': push(Tok::Dot, start, "."); break;
    case '(': push(Tok::LParen, start, "("); break;
    case ')': push(Tok::RParen, start, ")"); break;
    case ',': push(Tok::Comma, start, ","); break;
    case '{': push(Tok::LBrace, start, "{"); break;
    case '}': push(Tok::RBrace, start, "}"); break;
    case ']': push(Tok::RBracket, start, "]"); break;
    case '>': push(Tok::Greater, start, ">"); break;
    case '+': push(Tok::Plus, start, "+"); break;
    case '-':
      if (i < src.size() && src[i] == '>') {
        ++i;
        push(Tok::Arrow, start, "->");
      } else {
        push(Tok::Minus, start, "-");
      }
      break;
    default: throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }
  push(Tok::End, src.size());
  return out;
}

const StateFormula* as_state(const PathFormula& f) {
  if (auto* l = std::get_if<pf::Lift>(&f.node().value)) return &l->formula;
  return nullptr;
}

// Path builders that fold connectives over lifted state formulas back into
// the state layer, so that every maximal state subtree is a single Lift.
PathFormula mk_not(PathFormula a) {
  if (auto* s = as_state(a)) return p::lift(f::neg(*s));
  return p::neg(std::move(a));
}

PathFormula mk_and(PathFormula a, PathFormula b) {
  auto *x = as_state(a), *y = as_state(b);
  if (x && y) return p::lift(f::conj(*x, *y));
  return p::conj(std::move(a), std::move(b));
}

PathFormula mk_or(PathFormula a, PathFormula b) {
  auto *x = as_state(a), *y = as_state(b);
  if (x && y) return p::lift(f::disj(*x, *y));
  return p::disj(std::move(a), std::move(b));
}

PathFormula mk_implies(PathFormula a, PathFormula b) {
  auto *x = as_state(a), *y = as_state(b);
  if (x && y) return p::lift(f::implies(*x, *y));
  return p::implies(std::move(a), std::move(b));
}

PathFormula mk_freeze(std::string v, PathFormula body) {
  if (auto* s = as_state(body)) return p::lift(f::freeze(std::move(v), *s));
  return p::freeze(std::move(v), std::move(body));
}

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  PathFormula parse_all() {
    PathFormula f = parse_implies();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(at_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  Token take() {
    Token t = peek();
    if (at_ < toks_.size() - 1) ++at_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.kind == Tok::End ? msg + " (end of input)" : msg, t.pos);
  }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return take();
  }

  PathFormula parse_implies() {
    PathFormula lhs = parse_or();
    if (peek().kind == Tok::Arrow) {
      take();
      return mk_implies(lhs, parse_implies());
    }
    return lhs;
  }

  PathFormula parse_or() {
    PathFormula lhs = parse_and();
    while (peek().kind == Tok::Bar) {
      take();
      lhs = mk_or(lhs, parse_and());
    }
    return lhs;
  }

  PathFormula parse_and() {
    PathFormula lhs = parse_until();
    while (peek().kind == Tok::Amp) {
      take();
      lhs = mk_and(lhs, parse_until());
    }
    return lhs;
  }

  PathFormula parse_until() {
    PathFormula lhs = parse_unary();
    if (peek().kind == Tok::Temporal && peek().op == 'U') {
      Direction d = take().dir;
      return p::until(d, lhs, parse_until());
    }
    return lhs;
  }

  StateFormula state_of(const PathFormula& f, std::size_t pos, const char* where) {
    if (auto* s = as_state(f)) return *s;
    throw ParseError(std::string("path formula not allowed ") + where, pos);
  }

  PathFormula parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
    case Tok::Bang:
      take();
      return mk_not(parse_unary());
    case Tok::Temporal: {
      if (t.op == 'U') fail("'" + t.text + "' needs a left operand");
      Token op = take();
      PathFormula operand = parse_unary();
      if (op.op == 'X') return p::next(op.dir, operand);
      if (op.op == 'F') return p::finally(op.dir, operand);
      return p::globally(op.dir, operand);
    }
    case Tok::APath:
      take();
      return p::lift(f::all(parse_unary()));
    case Tok::EPath:
      take();
      return p::lift(f::exists(parse_unary()));
    case Tok::StitOpen: {
      take();
      std::string agent = expect(Tok::Ident, "agent name").text;
      expect(Tok::Greater, "'>'");
      std::size_t pos = peek().pos;
      return p::lift(f::stit(agent, state_of(parse_unary(), pos, "under E<agent>")));
    }
    case Tok::Ident:
      if (peek(1).kind == Tok::Dot) {
        std::string v = take().text;
        take();
        return mk_freeze(v, parse_implies());
      }
      return parse_primary();
    default: return parse_primary();
    }
  }

  TimeTerm parse_term() {
    std::string v = expect(Tok::Ident, "time variable").text;
    if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool plus = take().kind == Tok::Plus;
      TimeValue c = expect(Tok::Nat, "natural constant").value;
      return plus ? TimeTerm::plus(v, c) : TimeTerm::minus(v, c);
    }
    return TimeTerm::var(v);
  }

  // Arguments of a keyword bracket: identifiers for norm/agent slots, time
  // terms for the rest. Arity is checked against the keyword.
  struct Args {
    std::string norm, agent;
    std::vector<TimeTerm> terms;
  };

  Args parse_args(const Token& kw, std::size_t n_terms) {
    Args a;
    std::size_t count = 0;
    auto arity_error = [&](std::size_t got) {
      throw ParseError("arity mismatch: " + kw.text + " expects " + std::to_string(2 + n_terms) +
                           " arguments, got " + std::to_string(got),
                       kw.pos);
    };
    if (peek().kind == Tok::RBracket) arity_error(0);
    while (true) {
      if (count == 0) {
        a.norm = expect(Tok::Ident, "norm id").text;
      } else if (count == 1) {
        a.agent = expect(Tok::Ident, "agent name").text;
      } else {
        a.terms.push_back(parse_term());
      }
      ++count;
      if (peek().kind == Tok::Comma) {
        take();
        continue;
      }
      break;
    }
    expect(Tok::RBracket, "']'");
    if (count != 2 + n_terms) arity_error(count);
    return a;
  }

  StateFormula parse_braced() {
    expect(Tok::LBrace, "'{'");
    std::size_t pos = peek().pos;
    PathFormula body = parse_implies();
    expect(Tok::RBrace, "'}'");
    return state_of(body, pos, "inside a modality");
  }

  PathFormula parse_keyword() {
    Token kw = take();
    const std::string& k = kw.text;
    if (k == "V" || k == "D" || k == "R" || k == "P") {
      Args a = parse_args(kw, 0);
      SpecialKind kind = k == "V"   ? SpecialKind::Violation
                         : k == "D" ? SpecialKind::Deadline
                         : k == "R" ? SpecialKind::Repair
                                    : SpecialKind::Punish;
      return p::lift(f::special(kind, a.norm, a.agent));
    }
    if (k == "VIOLA" || k == "VIOLO" || k == "VIOL") {
      Args a = parse_args(kw, 2);
      ViolationKind kind = k == "VIOLA"   ? ViolationKind::Act
                           : k == "VIOLO" ? ViolationKind::Omission
                                          : ViolationKind::Either;
      StateFormula cond = parse_braced();
      return p::lift(f::violation(kind, a.norm, a.agent, a.terms[0], a.terms[1], cond));
    }
    if (k == "RVIOL" || k == "PVIOL") {
      Args a = parse_args(kw, 3);
      StateFormula cond = parse_braced();
      return p::lift(f::resolved(k == "RVIOL" ? Resolution::Repair : Resolution::Punish, a.norm,
                                 a.agent, a.terms[0], a.terms[1], a.terms[2], cond));
    }
    if (k == "FORB") {
      Args a = parse_args(kw, 1);
      StateFormula cond = parse_braced();
      return p::lift(f::forbidden(a.norm, a.agent, a.terms[0], cond));
    }
    Args a = parse_args(kw, 1);
    StateFormula cond = parse_braced();
    StateFormula deadline = parse_braced();
    return p::lift(f::obliged(a.norm, a.agent, a.terms[0], cond, deadline));
  }

  PathFormula parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
    case Tok::LParen: {
      take();
      PathFormula inner = parse_implies();
      expect(Tok::RParen, "')'");
      return inner;
    }
    case Tok::True: take(); return p::lift(f::constant(true));
    case Tok::False: take(); return p::lift(f::constant(false));
    case Tok::Keyword: return parse_keyword();
    case Tok::Ident: {
      Tok next = peek(1).kind;
      if (next == Tok::Less || next == Tok::Equal || next == Tok::Plus || next == Tok::Minus) {
        TimeTerm lhs = parse_term();
        bool less = peek().kind == Tok::Less;
        if (!less && peek().kind != Tok::Equal) fail("expected '<' or '='");
        take();
        TimeTerm rhs = parse_term();
        return p::lift(less ? f::less(lhs, rhs) : f::equal(lhs, rhs));
      }
      std::string name = take().text;
      std::vector<std::string> args;
      if (peek().kind == Tok::LParen) {
        take();
        args.push_back(expect(Tok::Ident, "atom argument").text);
        while (peek().kind == Tok::Comma) {
          take();
          args.push_back(expect(Tok::Ident, "atom argument").text);
        }
        expect(Tok::RParen, "')'");
      }
      return p::lift(f::atom(name, args));
    }
    default: fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }
};

StateFormula to_state(const PathFormula& f) {
  if (auto* s = as_state(f)) return *s;
  throw ParseError("expected a state formula, got a path formula", 0);
}

} // namespace

PathFormula parse_path_formula_raw(std::string_view text) { return Parser(text).parse_all(); }

StateFormula parse_state_formula_raw(std::string_view text) {
  return to_state(parse_path_formula_raw(text));
}

PathFormula parse_path_formula(std::string_view text) {
  return normalize(parse_path_formula_raw(text));
}

StateFormula parse_state_formula(std::string_view text) {
  return normalize(parse_state_formula_raw(text));
}

} // namespace normlog
