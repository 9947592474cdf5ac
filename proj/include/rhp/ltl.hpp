#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rhp {

enum class Op { True, False, Atom, Not, And, Or, Next, Until, Release, Eventually, Always };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op;
  std::string atom;  // only for Op::Atom
  FormulaPtr lhs;    // unary operand or left operand
  FormulaPtr rhs;    // right operand of binary operators

  static FormulaPtr make_true();
  static FormulaPtr make_false();
  static FormulaPtr make_atom(std::string name);
  static FormulaPtr make_unary(Op op, FormulaPtr a);
  static FormulaPtr make_binary(Op op, FormulaPtr a, FormulaPtr b);
};

// Thrown on malformed formula text. `position` is a 0-based byte offset.
class LtlSyntaxError : public std::runtime_error {
 public:
  LtlSyntaxError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " at position " + std::to_string(position)), position(position) {}
  std::size_t position;
};

class LtlUnknownAtom : public std::runtime_error {
 public:
  LtlUnknownAtom(const std::string& name, std::size_t position)
      : std::runtime_error("unknown identifier '" + name + "' at position " + std::to_string(position)),
        name(name),
        position(position) {}
  std::string name;
  std::size_t position;
};

// Grammar: true | false | ident | !f | f & f | f | f | X f | F f | G f | f U f, with parentheses.
// Precedence: unary > U > & > |. U is right-associative, & and | left-associative.
// An empty alphabet accepts every identifier.
FormulaPtr parse_ltl(const std::string& text, const std::set<std::string>& alphabet = {});

// Negation normal form: negations only on atoms, F/G rewritten through U/R.
FormulaPtr to_nnf(const FormulaPtr& f);

bool is_nnf(const FormulaPtr& f);
bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);
std::set<std::string> atoms_of(const FormulaPtr& f);
int temporal_depth(const FormulaPtr& f);
int formula_size(const FormulaPtr& f);

// Fully parenthesised text. Parses back to the same tree unless it contains R, which the
// surface grammar does not have.
std::string to_string(const FormulaPtr& f);

}  // namespace rhp
