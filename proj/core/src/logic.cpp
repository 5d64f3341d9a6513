#include "shapfoil/logic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "shapfoil/strings.hpp"

namespace shapfoil {

const std::string& literal_feature(const Literal& l) {
  return std::visit([](const auto& x) -> const std::string& { return x.feature; }, l);
}

std::string head_name(const Schema& s) {
  const std::string& p = s.positive_label;
  bool ident = !p.empty() && (std::isalpha(static_cast<unsigned char>(p[0])) || p[0] == '_');
  return ident ? p : s.target_name;
}

bool covers(const Clause& c, const Schema& schema, const Sample& s) {
  for (const Literal& lit : c.body) {
    int fi = schema.feature_index(literal_feature(lit));
    if (fi < 0)
      throw LogicError("clause references unknown feature '" + literal_feature(lit) + "'");
    bool ok = std::visit(
        [&](const auto& l) -> bool {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, CatEq>) {
            if (schema.is_numeric(fi))
              throw LogicError("categorical literal on numeric feature '" + l.feature + "'");
            return std::get<std::string>(s.values[fi]) == l.value;
          } else if constexpr (std::is_same_v<T, NegCatEq>) {
            if (schema.is_numeric(fi))
              throw LogicError("categorical literal on numeric feature '" + l.feature + "'");
            return std::get<std::string>(s.values[fi]) != l.value;
          } else {
            if (!schema.is_numeric(fi))
              throw LogicError("numeric literal on categorical feature '" + l.feature + "'");
            double v = std::get<double>(s.values[fi]);
            return v >= l.lo && v <= l.hi;  // inclusive at both ends
          }
        },
        lit);
    if (!ok) return false;
  }
  return true;
}

CoveragePartition covered_partition(const Clause& c, const Dataset& d) {
  CoveragePartition p;
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    const Sample& s = d.samples[i];
    if (covers(c, d.schema, s))
      (s.label > 0 ? p.covered_pos : p.covered_neg).push_back(static_cast<int>(i));
    else
      p.uncovered.push_back(static_cast<int>(i));
  }
  return p;
}

double clause_precision(const Clause& c, const Dataset& d) {
  auto p = covered_partition(c, d);
  std::size_t covered = p.covered_pos.size() + p.covered_neg.size();
  if (covered == 0) throw EmptyCoverage();
  return static_cast<double>(p.covered_pos.size()) / static_cast<double>(covered);
}

int hypothesis_predict(const Hypothesis& h, const Schema& schema, const Sample& s) {
  for (const Clause& c : h.clauses)
    if (covers(c, schema, s)) return +1;
  return -1;
}

std::string serialize_clause(const Clause& c, int rounding) {
  std::ostringstream out;
  out << c.head << "(X) :- ";
  if (c.body.empty()) {
    out << "true.";
    return out.str();
  }
  int next_var = 1;
  bool first = true;
  auto sep = [&] {
    if (!first) out << ", ";
    first = false;
  };
  for (const Literal& lit : c.body) {
    std::visit(
        [&](const auto& l) {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, CatEq>) {
            sep();
            out << l.feature << "(X," << l.value << ")";
          } else if constexpr (std::is_same_v<T, NegCatEq>) {
            sep();
            out << "not " << l.feature << "(X," << l.value << ")";
          } else {
            std::string var = "F" + std::to_string(next_var++);
            sep();
            out << l.feature << "(X," << var << ")";
            if (std::isfinite(l.lo)) {
              sep();
              out << format_double_trimmed(l.lo, rounding) << " =< " << var;
            }
            if (std::isfinite(l.hi)) {
              sep();
              out << var << " =< " << format_double_trimmed(l.hi, rounding);
            }
          }
        },
        lit);
  }
  out << '.';
  return out.str();
}

std::string serialize_prolog(const Hypothesis& h, int rounding) {
  std::ostringstream out;
  for (const Clause& c : h.clauses) out << serialize_clause(c, rounding) << '\n';
  return out.str();
}

namespace {

enum class Tok { Ident, Var, Number, LParen, RParen, Comma, Dot, Neck, Leq, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : s_(text) {}

  Token next() {
    skip_ws();
    std::size_t line = line_, col = col_;
    if (i_ >= s_.size()) return {Tok::End, "", line, col};
    char c = s_[i_];
    if (c == '(') return take(Tok::LParen, 1);
    if (c == ')') return take(Tok::RParen, 1);
    if (c == ',') return take(Tok::Comma, 1);
    if (c == '.') return take(Tok::Dot, 1);
    if (c == ':' && peek(1) == '-') return take(Tok::Neck, 2);
    if (c == '=' && peek(1) == '<') return take(Tok::Leq, 2);
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
      std::size_t j = i_;
      if (c == '-' || c == '+') ++j;
      std::size_t start = j;
      while (j < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[j])) ||
              (s_[j] == '.' && j + 1 < s_.size() &&
               std::isdigit(static_cast<unsigned char>(s_[j + 1])))))
        ++j;
      if (j == start) throw ParseError("stray sign", line, col);
      Token t{Tok::Number, s_.substr(i_, j - i_), line, col};
      advance(j - i_);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
        ++j;
      Tok kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::Var : Tok::Ident;
      Token t{kind, s_.substr(i_, j - i_), line, col};
      advance(j - i_);
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

private:
  char peek(std::size_t k) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }
  Token take(Tok kind, std::size_t len) {
    Token t{kind, s_.substr(i_, len), line_, col_};
    advance(len);
    return t;
  }
  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++i_;
    }
  }
  void skip_ws() {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '%') {
        while (i_ < s_.size() && s_[i_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
  }
  const std::string& s_;
  std::size_t i_ = 0, line_ = 1, col_ = 1;
};

class Parser {
public:
  explicit Parser(const std::string& text) : lex_(text) { shift(); }

  struct Pending_t {
    std::string feature;
    std::size_t body_slot = 0;
    bool has_lo = false, has_hi = false;
    double lo = 0, hi = 0;
  };

  Hypothesis parse() {
    Hypothesis h;
    while (cur_.kind != Tok::End) h.clauses.push_back(clause());
    return h;
  }

private:
  void shift() { cur_ = lex_.next(); }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, cur_.line, cur_.col); }
  Token expect(Tok kind, const std::string& what) {
    if (cur_.kind != kind) fail("expected " + what + ", got '" + cur_.text + "'");
    Token t = cur_;
    shift();
    return t;
  }

  Clause clause() {
    Token head = expect(Tok::Ident, "predicate name");
    expect(Tok::LParen, "'('");
    Token hvar = expect(Tok::Var, "head variable");
    expect(Tok::RParen, "')'");
    expect(Tok::Neck, "':-'");

    Clause c;
    c.head = head.text;
    std::map<std::string, Pending_t> vars;  // numeric variable name -> range

    bool done = false;
    bool first_item = true;
    while (!done) {
      if (cur_.kind == Tok::Ident && cur_.text == "true") {
        if (!first_item) fail("'true' must be the whole body");
        shift();
        expect(Tok::Dot, "'.'");
        return c;
      }
      parse_item(c, hvar.text, vars);
      first_item = false;
      if (cur_.kind == Tok::Comma) {
        shift();
      } else {
        expect(Tok::Dot, "',' or '.'");
        done = true;
      }
    }

    // Fold collected bounds back into the NumRange placeholders.
    for (auto& [name, p] : vars) {
      NumRange r;
      r.feature = p.feature;
      if (p.has_lo) r.lo = p.lo;
      if (p.has_hi) r.hi = p.hi;
      if (p.has_lo && p.has_hi && r.lo > r.hi)
        throw ParseError("empty interval for variable " + name, cur_.line, cur_.col);
      c.body[p.body_slot] = r;
    }
    check_clause(c);
    return c;
  }

  void parse_item(Clause& c, const std::string& head_var,
                  std::map<std::string, Pending_t>& vars) {
    if (cur_.kind == Tok::Number) {  // lo =< Var
      double lo;
      parse_double(cur_.text, lo);
      shift();
      expect(Tok::Leq, "'=<'");
      Token v = expect(Tok::Var, "variable");
      auto it = vars.find(v.text);
      if (it == vars.end()) fail("bound on unknown variable " + v.text);
      if (it->second.has_lo) fail("duplicate lower bound on " + v.text);
      it->second.has_lo = true;
      it->second.lo = lo;
      return;
    }
    if (cur_.kind == Tok::Var) {  // Var =< hi
      Token v = cur_;
      shift();
      expect(Tok::Leq, "'=<'");
      Token n = expect(Tok::Number, "number");
      double hi;
      parse_double(n.text, hi);
      auto it = vars.find(v.text);
      if (it == vars.end()) fail("bound on unknown variable " + v.text);
      if (it->second.has_hi) fail("duplicate upper bound on " + v.text);
      it->second.has_hi = true;
      it->second.hi = hi;
      return;
    }

    bool negated = false;
    if (cur_.kind == Tok::Ident && cur_.text == "not") {
      negated = true;
      shift();
    }
    Token pred = expect(Tok::Ident, "predicate name");
    expect(Tok::LParen, "'('");
    Token arg1 = expect(Tok::Var, "variable");
    if (arg1.text != head_var)
      throw ParseError("atom must use the head variable " + head_var, arg1.line, arg1.col);
    expect(Tok::Comma, "','");
    if (cur_.kind == Tok::Var) {  // numeric feature with fresh variable
      if (negated) fail("negated numeric literal is outside the language");
      Token v = cur_;
      shift();
      expect(Tok::RParen, "')'");
      if (vars.count(v.text)) fail("variable " + v.text + " reused");
      Pending_t p;
      p.feature = pred.text;
      p.body_slot = c.body.size();
      vars[v.text] = p;
      c.body.emplace_back(NumRange{pred.text, -INFINITY, INFINITY});
      return;
    }
    std::string value;
    if (cur_.kind == Tok::Ident || cur_.kind == Tok::Number) {
      value = cur_.text;
      shift();
    } else {
      fail("expected value token");
    }
    expect(Tok::RParen, "')'");
    if (negated)
      c.body.emplace_back(NegCatEq{pred.text, value});
    else
      c.body.emplace_back(CatEq{pred.text, value});
  }

  void check_clause(const Clause& c) {
    for (std::size_t i = 0; i < c.body.size(); ++i)
      for (std::size_t j = i + 1; j < c.body.size(); ++j) {
        if (c.body[i] == c.body[j])
          throw ParseError("duplicate literal in clause '" + c.head + "'", cur_.line, cur_.col);
        if (std::holds_alternative<NumRange>(c.body[i]) &&
            std::holds_alternative<NumRange>(c.body[j]) &&
            literal_feature(c.body[i]) == literal_feature(c.body[j]))
          throw ParseError("two intervals on feature '" + literal_feature(c.body[i]) + "'",
                           cur_.line, cur_.col);
      }
  }

private:
  Lexer lex_;
  Token cur_;
};

}  // namespace

Hypothesis parse_prolog(const std::string& text) { return Parser(text).parse(); }

}  // namespace shapfoil
