#include "rhp/ltl.hpp"

#include <cctype>

namespace rhp {

FormulaPtr Formula::make_true() {
  static const FormulaPtr t = std::make_shared<Formula>(Formula{Op::True, {}, nullptr, nullptr});
  return t;
}

FormulaPtr Formula::make_false() {
  static const FormulaPtr f = std::make_shared<Formula>(Formula{Op::False, {}, nullptr, nullptr});
  return f;
}

FormulaPtr Formula::make_atom(std::string name) {
  return std::make_shared<Formula>(Formula{Op::Atom, std::move(name), nullptr, nullptr});
}

FormulaPtr Formula::make_unary(Op op, FormulaPtr a) {
  return std::make_shared<Formula>(Formula{op, {}, std::move(a), nullptr});
}

FormulaPtr Formula::make_binary(Op op, FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(Formula{op, {}, std::move(a), std::move(b)});
}

namespace {

enum class Tok { Ident, True, False, Not, And, Or, X, F, G, U, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      std::string w = s.substr(start, i - start);
      Tok k = Tok::Ident;
      if (w == "true") k = Tok::True;
      else if (w == "false") k = Tok::False;
      else if (w == "X") k = Tok::X;
      else if (w == "F") k = Tok::F;
      else if (w == "G") k = Tok::G;
      else if (w == "U") k = Tok::U;
      out.push_back({k, w, start});
      continue;
    }
    switch (c) {
      case '!': out.push_back({Tok::Not, "!", start}); break;
      case '&': out.push_back({Tok::And, "&", start}); break;
      case '|': out.push_back({Tok::Or, "|", start}); break;
      case '(': out.push_back({Tok::LParen, "(", start}); break;
      case ')': out.push_back({Tok::RParen, ")", start}); break;
      default: throw LtlSyntaxError(std::string("unexpected character '") + c + "'", start);
    }
    ++i;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, const std::set<std::string>& alphabet)
      : toks_(tokenize(text)), alphabet_(alphabet) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_or();
    if (peek().kind != Tok::End) throw LtlSyntaxError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& take() { return toks_[i_++]; }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (peek().kind == Tok::Or) {
      take();
      f = Formula::make_binary(Op::Or, f, parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_until();
    while (peek().kind == Tok::And) {
      take();
      f = Formula::make_binary(Op::And, f, parse_until());
    }
    return f;
  }

  FormulaPtr parse_until() {
    FormulaPtr f = parse_unary();
    if (peek().kind == Tok::U) {
      take();
      return Formula::make_binary(Op::Until, f, parse_until());
    }
    return f;
  }

  FormulaPtr parse_unary() {
    switch (peek().kind) {
      case Tok::Not: take(); return Formula::make_unary(Op::Not, parse_unary());
      case Tok::X: take(); return Formula::make_unary(Op::Next, parse_unary());
      case Tok::F: take(); return Formula::make_unary(Op::Eventually, parse_unary());
      case Tok::G: take(); return Formula::make_unary(Op::Always, parse_unary());
      default: return parse_primary();
    }
  }

  FormulaPtr parse_primary() {
    const Token& t = take();
    switch (t.kind) {
      case Tok::True: return Formula::make_true();
      case Tok::False: return Formula::make_false();
      case Tok::Ident:
        if (!alphabet_.empty() && !alphabet_.count(t.text)) throw LtlUnknownAtom(t.text, t.pos);
        return Formula::make_atom(t.text);
      case Tok::LParen: {
        FormulaPtr f = parse_or();
        if (peek().kind != Tok::RParen) throw LtlSyntaxError("expected ')'", peek().pos);
        take();
        return f;
      }
      case Tok::End: throw LtlSyntaxError("unexpected end of formula", t.pos);
      default: throw LtlSyntaxError("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  const std::set<std::string>& alphabet_;
};

FormulaPtr nnf(const FormulaPtr& f, bool negated);

FormulaPtr nnf_pos(const FormulaPtr& f) { return nnf(f, false); }
FormulaPtr nnf_neg(const FormulaPtr& f) { return nnf(f, true); }

FormulaPtr nnf(const FormulaPtr& f, bool neg) {
  switch (f->op) {
    case Op::True: return neg ? Formula::make_false() : f;
    case Op::False: return neg ? Formula::make_true() : f;
    case Op::Atom: return neg ? Formula::make_unary(Op::Not, f) : f;
    case Op::Not: return nnf(f->lhs, !neg);
    case Op::And:
      return Formula::make_binary(neg ? Op::Or : Op::And, nnf(f->lhs, neg), nnf(f->rhs, neg));
    case Op::Or:
      return Formula::make_binary(neg ? Op::And : Op::Or, nnf(f->lhs, neg), nnf(f->rhs, neg));
    case Op::Next: return Formula::make_unary(Op::Next, nnf(f->lhs, neg));
    case Op::Until:
      return Formula::make_binary(neg ? Op::Release : Op::Until, nnf(f->lhs, neg), nnf(f->rhs, neg));
    case Op::Release:
      return Formula::make_binary(neg ? Op::Until : Op::Release, nnf(f->lhs, neg), nnf(f->rhs, neg));
    case Op::Eventually:
      // F a = true U a ; !F a = false R !a
      return neg ? Formula::make_binary(Op::Release, Formula::make_false(), nnf_neg(f->lhs))
                 : Formula::make_binary(Op::Until, Formula::make_true(), nnf_pos(f->lhs));
    case Op::Always:
      // G a = false R a ; !G a = true U !a
      return neg ? Formula::make_binary(Op::Until, Formula::make_true(), nnf_neg(f->lhs))
                 : Formula::make_binary(Op::Release, Formula::make_false(), nnf_pos(f->lhs));
  }
  return f;
}

}  // namespace

FormulaPtr parse_ltl(const std::string& text, const std::set<std::string>& alphabet) {
  return Parser(text, alphabet).parse();
}

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf(f, false); }

bool is_nnf(const FormulaPtr& f) {
  switch (f->op) {
    case Op::True:
    case Op::False:
    case Op::Atom: return true;
    case Op::Not: return f->lhs->op == Op::Atom;
    case Op::Eventually:
    case Op::Always: return false;
    case Op::Next: return is_nnf(f->lhs);
    default: return is_nnf(f->lhs) && is_nnf(f->rhs);
  }
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->op != b->op || a->atom != b->atom) return false;
  return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
}

namespace {
void collect_atoms(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->op == Op::Atom) out.insert(f->atom);
  collect_atoms(f->lhs, out);
  collect_atoms(f->rhs, out);
}
}  // namespace

std::set<std::string> atoms_of(const FormulaPtr& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

int temporal_depth(const FormulaPtr& f) {
  if (!f) return 0;
  int d = std::max(temporal_depth(f->lhs), temporal_depth(f->rhs));
  switch (f->op) {
    case Op::Next:
    case Op::Until:
    case Op::Release:
    case Op::Eventually:
    case Op::Always: return d + 1;
    default: return d;
  }
}

int formula_size(const FormulaPtr& f) {
  if (!f) return 0;
  return 1 + formula_size(f->lhs) + formula_size(f->rhs);
}

std::string to_string(const FormulaPtr& f) {
  switch (f->op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom: return f->atom;
    case Op::Not: return "!" + to_string(f->lhs);
    case Op::Next: return "X " + to_string(f->lhs);
    case Op::Eventually: return "F " + to_string(f->lhs);
    case Op::Always: return "G " + to_string(f->lhs);
    case Op::And: return "(" + to_string(f->lhs) + " & " + to_string(f->rhs) + ")";
    case Op::Or: return "(" + to_string(f->lhs) + " | " + to_string(f->rhs) + ")";
    case Op::Until: return "(" + to_string(f->lhs) + " U " + to_string(f->rhs) + ")";
    case Op::Release: return "(" + to_string(f->lhs) + " R " + to_string(f->rhs) + ")";
  }
  return {};
}

}  // namespace rhp
