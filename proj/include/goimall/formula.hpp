#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace goimall {

enum class Conn { One, Bot, Zero, Top, Tensor, Par, Plus, With };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Constant-only MALL formula: no propositional variables.
struct Formula {
  Conn k;
  FormulaPtr a, b;  // null for the four units
};

FormulaPtr f_one();
FormulaPtr f_bot();
FormulaPtr f_zero();
FormulaPtr f_top();
FormulaPtr f_tensor(FormulaPtr a, FormulaPtr b);
FormulaPtr f_par(FormulaPtr a, FormulaPtr b);
FormulaPtr f_plus(FormulaPtr a, FormulaPtr b);
FormulaPtr f_with(FormulaPtr a, FormulaPtr b);

bool is_unit(Conn k);
int cmp(const FormulaPtr& x, const FormulaPtr& y);
bool equal(const FormulaPtr& x, const FormulaPtr& y);
int formula_size(const FormulaPtr& f);

// De Morgan dual: 1<->bot, 0<->top, tensor<->par, plus<->with, componentwise.
FormulaPtr dual(const FormulaPtr& f);

std::string to_string(const FormulaPtr& f);

struct ParseError : std::runtime_error {
  size_t offset;
  ParseError(size_t off, const std::string& msg)
      : std::runtime_error("syntax error at offset " + std::to_string(off) + ": " + msg),
        offset(off) {}
};

// Grammar: 1 | bot | 0 | top | (F * G) | (F par G) | (F + G) | (F & G)
FormulaPtr parse_formula(const std::string& text);

// Parses one formula starting at pos (used by the proof parser); advances pos.
FormulaPtr parse_formula_at(const std::string& text, size_t& pos);

}  // namespace goimall
