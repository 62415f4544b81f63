#include "goimall/formula.hpp"

#include <cctype>

namespace goimall {

namespace {
FormulaPtr mk(Conn k, FormulaPtr a = nullptr, FormulaPtr b = nullptr) {
  return std::make_shared<Formula>(Formula{k, std::move(a), std::move(b)});
}
}  // namespace

FormulaPtr f_one() {
  static const FormulaPtr u = mk(Conn::One);
  return u;
}
FormulaPtr f_bot() {
  static const FormulaPtr u = mk(Conn::Bot);
  return u;
}
FormulaPtr f_zero() {
  static const FormulaPtr u = mk(Conn::Zero);
  return u;
}
FormulaPtr f_top() {
  static const FormulaPtr u = mk(Conn::Top);
  return u;
}
FormulaPtr f_tensor(FormulaPtr a, FormulaPtr b) { return mk(Conn::Tensor, std::move(a), std::move(b)); }
FormulaPtr f_par(FormulaPtr a, FormulaPtr b) { return mk(Conn::Par, std::move(a), std::move(b)); }
FormulaPtr f_plus(FormulaPtr a, FormulaPtr b) { return mk(Conn::Plus, std::move(a), std::move(b)); }
FormulaPtr f_with(FormulaPtr a, FormulaPtr b) { return mk(Conn::With, std::move(a), std::move(b)); }

bool is_unit(Conn k) { return k == Conn::One || k == Conn::Bot || k == Conn::Zero || k == Conn::Top; }

int cmp(const FormulaPtr& x, const FormulaPtr& y) {
  if (x.get() == y.get()) return 0;
  if (x->k != y->k) return x->k < y->k ? -1 : 1;
  if (is_unit(x->k)) return 0;
  if (int c = cmp(x->a, y->a)) return c;
  return cmp(x->b, y->b);
}

bool equal(const FormulaPtr& x, const FormulaPtr& y) { return cmp(x, y) == 0; }

int formula_size(const FormulaPtr& f) {
  if (is_unit(f->k)) return 1;
  return 1 + formula_size(f->a) + formula_size(f->b);
}

FormulaPtr dual(const FormulaPtr& f) {
  switch (f->k) {
    case Conn::One: return f_bot();
    case Conn::Bot: return f_one();
    case Conn::Zero: return f_top();
    case Conn::Top: return f_zero();
    case Conn::Tensor: return f_par(dual(f->a), dual(f->b));
    case Conn::Par: return f_tensor(dual(f->a), dual(f->b));
    case Conn::Plus: return f_with(dual(f->a), dual(f->b));
    case Conn::With: return f_plus(dual(f->a), dual(f->b));
  }
  throw std::logic_error("bad connective");
}

std::string to_string(const FormulaPtr& f) {
  switch (f->k) {
    case Conn::One: return "1";
    case Conn::Bot: return "bot";
    case Conn::Zero: return "0";
    case Conn::Top: return "top";
    case Conn::Tensor: return "(" + to_string(f->a) + " * " + to_string(f->b) + ")";
    case Conn::Par: return "(" + to_string(f->a) + " par " + to_string(f->b) + ")";
    case Conn::Plus: return "(" + to_string(f->a) + " + " + to_string(f->b) + ")";
    case Conn::With: return "(" + to_string(f->a) + " & " + to_string(f->b) + ")";
  }
  throw std::logic_error("bad connective");
}

namespace {

void skip_ws(const std::string& s, size_t& p) {
  while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
}

bool has_word(const std::string& s, size_t p, const char* w) {
  size_t n = std::char_traits<char>::length(w);
  if (s.compare(p, n, w) != 0) return false;
  // a word like "bot" must not be a prefix of a longer identifier
  if (p + n < s.size() && std::isalnum(static_cast<unsigned char>(s[p + n]))) return false;
  return true;
}

}  // namespace

FormulaPtr parse_formula_at(const std::string& s, size_t& p) {
  skip_ws(s, p);
  if (p >= s.size()) throw ParseError(p, "expected formula");
  if (s[p] == '1') {
    ++p;
    return f_one();
  }
  if (s[p] == '0') {
    ++p;
    return f_zero();
  }
  if (has_word(s, p, "bot")) {
    p += 3;
    return f_bot();
  }
  if (has_word(s, p, "top")) {
    p += 3;
    return f_top();
  }
  if (s[p] != '(') throw ParseError(p, "expected formula");
  ++p;
  FormulaPtr a = parse_formula_at(s, p);
  skip_ws(s, p);
  if (p >= s.size()) throw ParseError(p, "expected connective");
  Conn k;
  if (s[p] == '*') {
    k = Conn::Tensor;
    ++p;
  } else if (s[p] == '+') {
    k = Conn::Plus;
    ++p;
  } else if (s[p] == '&') {
    k = Conn::With;
    ++p;
  } else if (has_word(s, p, "par")) {
    k = Conn::Par;
    p += 3;
  } else {
    throw ParseError(p, "expected connective");
  }
  FormulaPtr b = parse_formula_at(s, p);
  skip_ws(s, p);
  if (p >= s.size() || s[p] != ')') throw ParseError(p, "expected ')'");
  ++p;
  switch (k) {
    case Conn::Tensor: return f_tensor(a, b);
    case Conn::Par: return f_par(a, b);
    case Conn::Plus: return f_plus(a, b);
    default: return f_with(a, b);
  }
}

FormulaPtr parse_formula(const std::string& text) {
  size_t p = 0;
  FormulaPtr f = parse_formula_at(text, p);
  skip_ws(text, p);
  if (p != text.size()) throw ParseError(p, "trailing input");
  return f;
}

}  // namespace goimall
