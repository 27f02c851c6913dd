#include "propcalc/dsl.hpp"

#include <cctype>

namespace propcalc {

namespace {

enum class Tok { Name, Int, Perm, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line, column;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    int l = line, c = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Name, s.substr(i, j - i), l, c});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, s.substr(i, j - i), l, c});
      advance(j - i);
    } else if (ch == '(') {
      // "(" digits/commas ")" is a permutation literal
      std::size_t j = i + 1;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == ',' || s[j] == ' ')) ++j;
      bool has_digit = false;
      for (std::size_t k = i + 1; k < j; ++k) has_digit = has_digit || std::isdigit(static_cast<unsigned char>(s[k]));
      if (j < s.size() && s[j] == ')' && has_digit) {
        out.push_back({Tok::Perm, s.substr(i, j + 1 - i), l, c});
        advance(j + 1 - i);
      } else {
        out.push_back({Tok::Sym, "(", l, c});
        advance(1);
      }
    } else if (std::string("()+-.*^{},/").find(ch) != std::string::npos) {
      out.push_back({Tok::Sym, std::string(1, ch), l, c});
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Expr parse() {
    Expr e = sum();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return t_[pos_]; }
  bool is_sym(const std::string& s) const { return peek().kind == Tok::Sym && peek().text == s; }
  Token take() { return t_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }
  void expect(const std::string& s) {
    if (!is_sym(s)) fail("expected '" + s + "'");
    take();
  }
  int integer() {
    if (peek().kind != Tok::Int) fail("expected an integer");
    return std::stoi(take().text);
  }

  static Expr at(Expr::Kind k, const Token& tok) {
    Expr e;
    e.kind = k;
    e.line = tok.line;
    e.column = tok.column;
    return e;
  }

  // A one-term sum with unit scalar is its operand.
  static Expr simplify(Expr e) {
    if (e.kind == Expr::Kind::Sum && e.kids.size() == 1 && e.coeffs[0] == ExprScalar{}) return std::move(e.kids[0]);
    return e;
  }

  Expr sum() {
    Expr s = at(Expr::Kind::Sum, peek());
    bool neg = false;
    if (is_sym("-")) {
      take();
      neg = true;
    }
    for (;;) {
      auto [sc, p] = prod();
      if (neg) sc.c = -sc.c;
      s.coeffs.push_back(sc);
      s.kids.push_back(std::move(p));
      if (is_sym("+") || is_sym("-")) {
        neg = take().text == "-";
        continue;
      }
      break;
    }
    return simplify(std::move(s));
  }

  bool at_h() const { return peek().kind == Tok::Name && peek().text == "h"; }

  std::pair<ExprScalar, Expr> prod() {
    ExprScalar sc;
    if (peek().kind == Tok::Int) {
      Rational c(std::stol(take().text));
      if (is_sym("/")) {
        take();
        int d = integer();
        if (d == 0) fail("zero denominator");
        c /= Rational(d);
      }
      sc.c = c;
    }
    if (at_h()) {
      take();
      sc.h = 1;
      if (is_sym("^")) {
        take();
        bool neg = false;
        if (is_sym("-")) {
          take();
          neg = true;
        }
        sc.h = neg ? -integer() : integer();
      }
    }
    Expr first = chain();
    if (!is_sym(".")) return {sc, std::move(first)};
    Expr c = at(Expr::Kind::Compose, peek());
    c.line = first.line;
    c.column = first.column;
    push_flat(c, std::move(first));
    while (is_sym(".")) {
      take();
      push_flat(c, chain());
    }
    return {sc, std::move(c)};
  }

  static void push_flat(Expr& parent, Expr kid) {
    if (kid.kind == parent.kind) {
      for (auto& k : kid.kids) parent.kids.push_back(std::move(k));
    } else {
      parent.kids.push_back(std::move(kid));
    }
  }

  Expr chain() {
    std::vector<Expr> atoms{atom()};
    while (is_sym("*")) {
      take();
      atoms.push_back(atom());
    }
    std::size_t labeled = 0;
    for (const auto& a : atoms) labeled += a.kind == Expr::Kind::Leaf && !a.labels.empty();
    if (labeled > 0) {
      if (labeled != atoms.size()) throw ParseError("mixing labeled and unlabeled tensor factors", atoms[0].line, atoms[0].column);
      Expr l;
      l.kind = Expr::Kind::Labeled;
      l.line = atoms[0].line;
      l.column = atoms[0].column;
      l.kids = std::move(atoms);
      return l;
    }
    if (atoms.size() == 1) return std::move(atoms[0]);
    Expr t;
    t.kind = Expr::Kind::Tensor;
    t.line = atoms[0].line;
    t.column = atoms[0].column;
    for (auto& a : atoms) push_flat(t, std::move(a));
    return t;
  }

  Expr atom() {
    const Token& tok = peek();
    if (tok.kind == Tok::Perm) {
      Expr e = at(Expr::Kind::Perm, tok);
      e.text = take().text;
      try {
        e.text = Permutation::parse(e.text).str();
      } catch (const std::exception& ex) {
        throw ParseError(ex.what(), e.line, e.column);
      }
      return e;
    }
    if (tok.kind == Tok::Name) {
      if (tok.text == "h") fail("'h' must precede a term");
      Expr e = at(Expr::Kind::Leaf, tok);
      e.text = take().text;
      if (is_sym("^")) {
        take();
        expect("{");
        e.labels.push_back(integer());
        while (is_sym(",")) {
          take();
          e.labels.push_back(integer());
        }
        expect("}");
      }
      return e;
    }
    if (is_sym("(")) {
      take();
      Expr e = sum();
      expect(")");
      return e;
    }
    if (tok.kind == Tok::End) fail("unexpected end of input");
    fail("unexpected '" + tok.text + "'");
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
};

std::string scalar_str(const ExprScalar& s, bool with_sign) {
  std::string out;
  Rational c = with_sign ? s.c : Rational(abs(s.c));
  if (c != 1 || s.h == 0) {
    if (c == -1 && s.h != 0)
      out = "-";
    else if (c != 1)
      out = to_string(c) + " ";
  }
  if (s.h == 1) out += "h ";
  if (s.h != 0 && s.h != 1) out += "h^" + std::to_string(s.h) + " ";
  return out;
}

std::string print(const Expr& e, int ctx);  // ctx: 0 top, 1 compose operand, 2 tensor operand

std::string joined(const Expr& e, const std::string& sep, int ctx) {
  std::string s;
  for (std::size_t i = 0; i < e.kids.size(); ++i) s += (i ? sep : "") + print(e.kids[i], ctx);
  return s;
}

std::string print(const Expr& e, int ctx) {
  switch (e.kind) {
    case Expr::Kind::Leaf: {
      std::string s = e.text;
      if (!e.labels.empty()) {
        s += "^{";
        for (std::size_t i = 0; i < e.labels.size(); ++i) s += (i ? "," : "") + std::to_string(e.labels[i]);
        s += "}";
      }
      return s;
    }
    case Expr::Kind::Perm:
      return e.text;
    case Expr::Kind::Compose: {
      std::string s = joined(e, " . ", 1);
      return ctx >= 2 ? "(" + s + ")" : s;
    }
    case Expr::Kind::Tensor: {
      std::string s = joined(e, " * ", 2);
      return ctx >= 2 ? "(" + s + ")" : s;
    }
    case Expr::Kind::Labeled: {
      std::string s = joined(e, " * ", 3);
      return ctx >= 2 ? "(" + s + ")" : s;
    }
    case Expr::Kind::Sum: {
      std::string s;
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        const ExprScalar& c = e.coeffs[i];
        if (i) s += c.c < 0 ? " - " : " + ";
        std::string sc = scalar_str(c, i == 0);
        if (i == 0 && c.c == -1 && c.h == 0) sc = "-";
        s += sc + print(e.kids[i], 1);
      }
      return ctx >= 1 ? "(" + s + ")" : s;
    }
  }
  return "";
}

template <typename S>
S scalar_value(const ExprScalar& s, const Expr& at) {
  if constexpr (std::is_same_v<S, HSeries>) {
    return HSeries::monomial(s.c, s.h);
  } else {
    if (s.h != 0) throw ParseError("powers of h need series coefficients", at.line, at.column);
    return s.c;
  }
}

template <typename S>
LinComb<S> lower_impl(const Expr& e, const Signature& sig) {
  auto err = [&](const std::string& msg) { return ParseError(msg, e.line, e.column); };
  auto leaf = [&](const Expr& x) -> Diagram {
    if (x.text == "id") return Diagram::identity(1);
    const Generator* g = sig.find(x.text);
    if (!g) throw ParseError("unknown generator '" + x.text + "' for variant " + variant_name(sig.variant()), x.line, x.column);
    return Diagram::generator(*g);
  };
  switch (e.kind) {
    case Expr::Kind::Leaf:
      if (!e.labels.empty()) throw err("labels outside a labeled tensor");
      return LinComb<S>(leaf(e));
    case Expr::Kind::Perm:
      return LinComb<S>(Diagram::perm(Permutation::parse(e.text)));
    case Expr::Kind::Labeled: {
      std::vector<Diagram> factors;
      std::vector<std::vector<int>> parts;
      for (const auto& k : e.kids) {
        factors.push_back(leaf(k));
        parts.push_back(k.labels);
      }
      try {
        return LinComb<S>(labeled_tensor(factors, parts));
      } catch (const std::invalid_argument& ex) {
        throw err(ex.what());
      }
    }
    case Expr::Kind::Tensor: {
      LinComb<S> r = lower_impl<S>(e.kids[0], sig);
      for (std::size_t i = 1; i < e.kids.size(); ++i) r = tensor(r, lower_impl<S>(e.kids[i], sig));
      return r;
    }
    case Expr::Kind::Compose: {
      LinComb<S> r = lower_impl<S>(e.kids.back(), sig);
      for (std::size_t i = e.kids.size() - 1; i-- > 0;) {
        LinComb<S> g = lower_impl<S>(e.kids[i], sig);
        if (g.n_in() != r.n_out())
          throw ParseError("arity mismatch: operand has " + std::to_string(g.n_in()) + " inputs but receives " +
                               std::to_string(r.n_out()) + " outputs",
                           e.kids[i].line, e.kids[i].column);
        r = compose(g, r);
      }
      return r;
    }
    case Expr::Kind::Sum: {
      LinComb<S> r;
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        LinComb<S> t = lower_impl<S>(e.kids[i], sig);
        t.scale(scalar_value<S>(e.coeffs[i], e.kids[i]));
        if (i == 0) {
          r = LinComb<S>(t.n_in(), t.n_out());
        } else if (t.n_in() != r.n_in() || t.n_out() != r.n_out()) {
          throw ParseError("summands of different bidegree", e.kids[i].line, e.kids[i].column);
        }
        r += t;
      }
      return r;
    }
  }
  throw err("bad expression");
}

}  // namespace

Expr parse_expr(const std::string& text) { return Parser(tokenize(text)).parse(); }

std::string print_expr(const Expr& e) { return print(e, 0); }

template <typename S>
LinComb<S> lower(const Expr& e, const Signature& sig) {
  return lower_impl<S>(e, sig);
}

template LinComb<Rational> lower(const Expr&, const Signature&);
template LinComb<HSeries> lower(const Expr&, const Signature&);

}  // namespace propcalc
