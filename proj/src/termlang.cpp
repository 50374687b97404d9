#include "tra/termlang.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "tra/error.hpp"

namespace tra {

Perm instantiate(const PermSpec& spec, Dim n) {
  if (const auto* t = std::get_if<TranspositionSpec>(&spec)) {
    if (t->i >= n || t->j >= n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "s[" + std::to_string(t->i) + "," + std::to_string(t->j) +
                      "] does not fit dimension " + std::to_string(n));
    }
    return transposition(n, t->i, t->j);
  }
  const auto& images = std::get<ImagesSpec>(spec).images;
  if (images.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "permutation of length " + std::to_string(images.size()) +
                    " used in dimension " + std::to_string(n));
  }
  return Perm(images);
}

Term Term::var(std::string name) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Var, std::move(name), {}, nullptr, nullptr}));
}
Term Term::zero() {
  return Term(std::make_shared<const Node>(Node{Kind::Zero, {}, {}, {}, {}}));
}
Term Term::one() {
  return Term(std::make_shared<const Node>(Node{Kind::One, {}, {}, {}, {}}));
}
Term Term::negate(Term t) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Not, {}, {}, std::make_shared<const Term>(std::move(t)), {}}));
}
Term Term::conj(Term a, Term b) {
  return Term(std::make_shared<const Node>(
      Node{Kind::And, {}, {}, std::make_shared<const Term>(std::move(a)),
           std::make_shared<const Term>(std::move(b))}));
}
Term Term::disj(Term a, Term b) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Or, {}, {}, std::make_shared<const Term>(std::move(a)),
           std::make_shared<const Term>(std::move(b))}));
}
Term Term::subst(PermSpec perm, Term t) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Subst, {}, std::move(perm),
           std::make_shared<const Term>(std::move(t)), {}}));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var:
      return a.name() == b.name();
    case Term::Kind::Zero:
    case Term::Kind::One:
      return true;
    case Term::Kind::Not:
      return a.operand() == b.operand();
    case Term::Kind::Subst:
      return a.perm() == b.perm() && a.operand() == b.operand();
    case Term::Kind::And:
    case Term::Kind::Or:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Term term() { return or_expr(); }

  Equation equation() {
    Term lhs = term();
    expect_eq();
    Term rhs = term();
    return Equation{std::move(lhs), std::move(rhs)};
  }

  QuasiEquation quasi() {
    std::vector<Equation> eqs;
    eqs.push_back(equation());
    while (accept(',')) eqs.push_back(equation());
    skip_ws();
    if (text_.substr(pos_, 2) == "=>") {
      pos_ += 2;
      QuasiEquation qe{std::move(eqs), equation()};
      return qe;
    }
    if (eqs.size() != 1) fail("expected '=>' after hypotheses");
    return QuasiEquation{{}, std::move(eqs.front())};
  }

  void finish() {
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(message, pos_, line, column);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  void expect_eq() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '=' &&
        (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '>')) {
      ++pos_;
      return;
    }
    fail("expected '='");
  }

  Dim nat() {
    skip_ws();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (v > 1'000'000) fail("index too large");
      ++pos_;
    }
    if (start == pos_) fail("expected a natural number");
    return static_cast<Dim>(v);
  }

  Term or_expr() {
    Term t = and_expr();
    while (accept('|')) t = Term::disj(std::move(t), and_expr());
    return t;
  }

  Term and_expr() {
    Term t = unary();
    while (accept('&')) t = Term::conj(std::move(t), unary());
    return t;
  }

  // Consumes an `s` that opens a substitution prefix, if one is present.
  bool subst_prefix() {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != 's') return false;
    std::size_t after = pos_ + 1;
    if (after < text_.size() && is_ident_char(text_[after])) return false;
    while (after < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[after]))) {
      ++after;
    }
    if (after < text_.size() && (text_[after] == '[' || text_[after] == '{')) {
      pos_ = after;
      return true;
    }
    return false;
  }

  Term unary() {
    if (accept('~')) return Term::negate(unary());
    if (subst_prefix()) {
      const std::size_t spec_pos = pos_;
      if (accept('[')) {
        const Dim i = nat();
        expect(',');
        const Dim j = nat();
        expect(']');
        if (i == j) {
          pos_ = spec_pos;
          fail("transposition needs distinct coordinates");
        }
        return Term::subst(TranspositionSpec{i, j}, unary());
      }
      expect('{');
      std::vector<Dim> images{nat()};
      while (accept(',')) images.push_back(nat());
      expect('}');
      try {
        Perm check(images);
      } catch (const Error&) {
        pos_ = spec_pos;
        fail("image list is not a permutation");
      }
      return Term::subst(ImagesSpec{std::move(images)}, unary());
    }
    return atom();
  }

  Term atom() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Term t = term();
      expect(')');
      return t;
    }
    if (c == '0' || c == '1') {
      if (pos_ + 1 < text_.size() && is_ident_char(text_[pos_ + 1])) {
        fail("expected '0', '1', a variable or '('");
      }
      ++pos_;
      return c == '0' ? Term::zero() : Term::one();
    }
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      return Term::var(std::string(text_.substr(start, pos_ - start)));
    }
    if (c == '\0') fail("unexpected end of input");
    fail("expected '0', '1', a variable or '('");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

enum Prec { kOr = 1, kAnd = 2, kUnary = 3 };

void print_perm_spec(const PermSpec& spec, std::string& out) {
  if (const auto* t = std::get_if<TranspositionSpec>(&spec)) {
    out += "s[" + std::to_string(t->i) + "," + std::to_string(t->j) + "]";
    return;
  }
  out += "s{";
  const auto& images = std::get<ImagesSpec>(spec).images;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(images[i]);
  }
  out += '}';
}

void print(const Term& t, int min_prec, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      out += t.name();
      return;
    case Term::Kind::Zero:
      out += '0';
      return;
    case Term::Kind::One:
      out += '1';
      return;
    case Term::Kind::Not:
      out += '~';
      print(t.operand(), kUnary, out);
      return;
    case Term::Kind::Subst:
      print_perm_spec(t.perm(), out);
      out += ' ';
      print(t.operand(), kUnary, out);
      return;
    case Term::Kind::And:
    case Term::Kind::Or: {
      const int prec = t.kind() == Term::Kind::And ? kAnd : kOr;
      const bool parens = min_prec > prec;
      if (parens) out += '(';
      print(t.lhs(), prec, out);
      out += prec == kAnd ? " & " : " | ";
      print(t.rhs(), prec + 1, out);
      if (parens) out += ')';
      return;
    }
  }
}

void collect_vars(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      out.insert(t.name());
      return;
    case Term::Kind::Zero:
    case Term::Kind::One:
      return;
    case Term::Kind::Not:
    case Term::Kind::Subst:
      collect_vars(t.operand(), out);
      return;
    case Term::Kind::And:
    case Term::Kind::Or:
      collect_vars(t.lhs(), out);
      collect_vars(t.rhs(), out);
      return;
  }
}

}  // namespace

Term parse_term(std::string_view text) {
  Parser p(text);
  Term t = p.term();
  p.finish();
  return t;
}

Equation parse_equation(std::string_view text) {
  Parser p(text);
  Equation eq = p.equation();
  p.finish();
  return eq;
}

QuasiEquation parse_quasi(std::string_view text) {
  Parser p(text);
  QuasiEquation qe = p.quasi();
  p.finish();
  return qe;
}

std::string print_term(const Term& t) {
  std::string out;
  print(t, kOr, out);
  return out;
}

std::string print_equation(const Equation& eq) {
  return print_term(eq.lhs) + " = " + print_term(eq.rhs);
}

std::string print_quasi(const QuasiEquation& qe) {
  std::string out;
  for (std::size_t i = 0; i < qe.hypotheses.size(); ++i) {
    if (i) out += ", ";
    out += print_equation(qe.hypotheses[i]);
  }
  if (!qe.hypotheses.empty()) out += " => ";
  out += print_equation(qe.conclusion);
  return out;
}

std::vector<std::string> variables(const Term& t) {
  std::set<std::string> vars;
  collect_vars(t, vars);
  return {vars.begin(), vars.end()};
}

std::vector<std::string> variables(const QuasiEquation& qe) {
  std::set<std::string> vars;
  for (const Equation& eq : qe.hypotheses) {
    collect_vars(eq.lhs, vars);
    collect_vars(eq.rhs, vars);
  }
  collect_vars(qe.conclusion.lhs, vars);
  collect_vars(qe.conclusion.rhs, vars);
  return {vars.begin(), vars.end()};
}

QuasiEquation sigma(Dim n, const Perm& f, const Perm& g) {
  if (f.dim() != n || g.dim() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "sigma needs permutations of dimension " + std::to_string(n));
  }
  const Term x = Term::var("x");
  Term lhs = Term::disj(Term::subst(ImagesSpec{f.images()}, x),
                        Term::subst(ImagesSpec{g.images()}, x));
  Equation hypothesis{std::move(lhs), Term::negate(x)};
  return QuasiEquation{{std::move(hypothesis)},
                       Equation{Term::zero(), Term::one()}};
}

}  // namespace tra
