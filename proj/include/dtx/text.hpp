#pragma once

// Declaration files: a small whitespace-insensitive grammar for
// distributions, functions and transform words, with an exact serializer.
//
//   # comment to end of line
//   dist b = mix(atom(0, 1/2), unif(0, 1, 1/2))
//   fn d   = pw { domain [0, 1]; points (0 : 0) (1/2 : 0, 0, 1) (1 : 1); }
//   fn u   = pw { reals(1, 1); points (1/2 : 1/2, 1/2, 3/2); }
//   word w = [distort(d), push(u), push(pw { reals(2, 2); points (0 : 0); })]
//
// A point is either (x : value) for a continuity point or
// (x : left, at, right). Words list their primitives outermost first.

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dtx/transform.hpp"

namespace dtx {

class Spec {
 public:
  enum class Kind { dist, fn, word };

  bool has(const std::string& name) const { return kinds_.count(name) != 0; }
  Kind kind(const std::string& name) const {
    auto it = kinds_.find(name);
    if (it == kinds_.end()) throw SpecError("unknown name '" + name + "'");
    return it->second;
  }
  const Cdf& dist(const std::string& name) const { return get(dists_, name, "distribution"); }
  const PiecewiseMonotone& fn(const std::string& name) const { return get(fns_, name, "function"); }
  const TransformWord& word(const std::string& name) const { return get(words_, name, "word"); }

  /// Declaration names in file order.
  const std::vector<std::string>& names() const { return order_; }

  void add(const std::string& name, Cdf F) {
    insert(name, Kind::dist);
    dists_.emplace(name, std::move(F));
  }
  void add(const std::string& name, PiecewiseMonotone f) {
    insert(name, Kind::fn);
    fns_.emplace(name, std::move(f));
  }
  void add(const std::string& name, TransformWord w) {
    insert(name, Kind::word);
    words_.emplace(name, std::move(w));
  }

 private:
  void insert(const std::string& name, Kind k) {
    if (!kinds_.emplace(name, k).second) throw SpecError("duplicate name '" + name + "'");
    order_.push_back(name);
  }
  template <class M>
  static const typename M::mapped_type& get(const M& m, const std::string& name, const char* what) {
    auto it = m.find(name);
    if (it == m.end()) throw SpecError(std::string("no ") + what + " named '" + name + "'");
    return it->second;
  }

  std::map<std::string, Kind> kinds_;
  std::vector<std::string> order_;
  std::map<std::string, Cdf> dists_;
  std::map<std::string, PiecewiseMonotone> fns_;
  std::map<std::string, TransformWord> words_;
};

namespace detail {

struct Token {
  enum class Type { ident, number, punct, end } type;
  std::string text;
  int line;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') { ++line; ++i; continue; }
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Token::Type::ident, std::string(src.substr(i, j - i)), line});
      i = j;
      continue;
    }
    if (digit(c) || (c == '-' && i + 1 < src.size() && digit(src[i + 1]))) {
      std::size_t j = i + 1;
      while (j < src.size() && digit(src[j])) ++j;
      if (j + 1 < src.size() && src[j] == '/' && digit(src[j + 1])) {
        j += 2;
        while (j < src.size() && digit(src[j])) ++j;
      }
      out.push_back({Token::Type::number, std::string(src.substr(i, j - i)), line});
      i = j;
      continue;
    }
    if (std::string_view("=()[]{},;:").find(c) != std::string_view::npos) {
      out.push_back({Token::Type::punct, std::string(1, c), line});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line);
  }
  out.push_back({Token::Type::end, "", line});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, const Spec& scope) : toks_(tokenize(src)), scope_(scope) {}

  bool at_end() const { return peek().type == Token::Type::end; }
  const Token& peek() const { return toks_[pos_]; }
  int line() const { return peek().line; }

  bool accept(std::string_view punct) {
    if (peek().type == Token::Type::punct && peek().text == punct) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }
  bool accept_word(std::string_view w) {
    if (peek().type == Token::Type::ident && peek().text == w) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected '" + std::string(w) + "'");
  }
  std::string ident() {
    if (peek().type != Token::Type::ident) fail("expected a name");
    return toks_[pos_++].text;
  }
  Rat rat() {
    if (peek().type != Token::Type::number) fail("expected a rational");
    int ln = line();
    const std::string& t = toks_[pos_++].text;
    try {
      return Rat::parse(t);
    } catch (const Error& e) {
      throw ParseError(e.what(), ln);
    }
  }
  [[noreturn]] void fail(const std::string& what) const {
    std::string got = peek().type == Token::Type::end ? "end of input" : "'" + peek().text + "'";
    throw ParseError(what + ", got " + got, line());
  }

  /// Runs a constructor, turning validation errors into line-tagged parse errors.
  template <class F>
  auto validated(int ln, F&& build) -> decltype(build()) {
    try {
      return build();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), ln);
    }
  }

  Cdf dist_literal() {
    int ln = line();
    expect_word("mix");
    expect("(");
    std::vector<Component> parts;
    do {
      if (accept_word("atom")) {
        expect("(");
        Rat x = rat();
        expect(",");
        Rat w = rat();
        expect(")");
        parts.push_back(Atom{x, w});
      } else if (accept_word("unif")) {
        expect("(");
        Rat a = rat();
        expect(",");
        Rat b = rat();
        expect(",");
        Rat w = rat();
        expect(")");
        parts.push_back(Uniform{a, b, w});
      } else {
        fail("expected 'atom' or 'unif'");
      }
    } while (accept(","));
    expect(")");
    return validated(ln, [&] { return make(parts); });
  }

  Cdf dist_ref() {
    if (peek().type == Token::Type::ident && peek().text != "mix") {
      int ln = line();
      std::string n = ident();
      return validated(ln, [&] { return scope_.dist(n); });
    }
    return dist_literal();
  }

  PiecewiseMonotone fn_literal() {
    int ln = line();
    expect_word("pw");
    expect("{");
    std::optional<Interval> domain;
    Rat slo, shi;
    if (accept_word("domain")) {
      expect("[");
      Rat lo = rat();
      expect(",");
      Rat hi = rat();
      expect("]");
      domain = Interval{lo, hi};
    } else if (accept_word("reals")) {
      expect("(");
      slo = rat();
      expect(",");
      shi = rat();
      expect(")");
    } else {
      fail("expected 'domain' or 'reals'");
    }
    expect(";");
    expect_word("points");
    std::vector<Breakpoint> pts;
    while (accept("(")) {
      Rat x = rat();
      expect(":");
      Rat a = rat();
      if (accept(",")) {
        Rat at = rat();
        expect(",");
        Rat r = rat();
        pts.push_back({x, a, at, r});
      } else {
        pts.push_back({x, a, a, a});
      }
      expect(")");
      accept(",");
    }
    expect(";");
    expect("}");
    return validated(ln, [&] {
      if (domain) return PiecewiseMonotone::bounded(domain->lo, domain->hi, pts);
      return PiecewiseMonotone::reals(slo, shi, pts);
    });
  }

  PiecewiseMonotone fn_ref() {
    if (peek().type == Token::Type::ident && peek().text != "pw") {
      int ln = line();
      std::string n = ident();
      return validated(ln, [&] { return scope_.fn(n); });
    }
    return fn_literal();
  }

  Primitive primitive() {
    int ln = line();
    if (accept_word("distort")) {
      expect("(");
      auto f = fn_ref();
      expect(")");
      return validated(ln, [&] { return Primitive{Distort{Distortion(f)}}; });
    }
    if (accept_word("push")) {
      expect("(");
      auto f = fn_ref();
      expect(")");
      return validated(ln, [&] { return Primitive{Push{Utility(f)}}; });
    }
    fail("expected 'distort' or 'push'");
  }

  TransformWord word_literal() {
    expect("[");
    TransformWord w;
    if (accept("]")) return w;
    do w.items.push_back(primitive());
    while (accept(","));
    expect("]");
    return w;
  }

  /// A word name, a bracketed word, a single primitive, or 'identity'.
  TransformWord word_ref() {
    if (peek().type == Token::Type::punct && peek().text == "[") return word_literal();
    if (peek().type == Token::Type::ident && (peek().text == "distort" || peek().text == "push"))
      return TransformWord{{primitive()}};
    int ln = line();
    std::string n = ident();
    if (n == "identity") return {};
    return validated(ln, [&] { return scope_.word(n); });
  }

  void declaration(Spec& spec) {
    int ln = line();
    std::string kw = ident();
    std::string name = ident();
    expect("=");
    auto add = [&](auto value) { validated(ln, [&] { spec.add(name, std::move(value)); return 0; }); };
    if (kw == "dist") add(dist_literal());
    else if (kw == "fn") add(fn_literal());
    else if (kw == "word") add(word_literal());
    else throw ParseError("unknown declaration '" + kw + "'", ln);
  }

  void finish() {
    if (!at_end()) fail("unexpected trailing input");
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Spec& scope_;
};

}  // namespace detail

/// Parses a whole declaration file. Names may only refer to earlier
/// declarations.
inline Spec parse_spec(std::string_view text) {
  Spec spec;
  detail::Parser p(text, spec);
  while (!p.at_end()) p.declaration(spec);
  return spec;
}

inline Cdf parse_dist(std::string_view text, const Spec& scope = {}) {
  detail::Parser p(text, scope);
  Cdf F = p.dist_ref();
  p.finish();
  return F;
}

inline PiecewiseMonotone parse_fn(std::string_view text, const Spec& scope = {}) {
  detail::Parser p(text, scope);
  auto f = p.fn_ref();
  p.finish();
  return f;
}

inline TransformWord parse_word(std::string_view text, const Spec& scope = {}) {
  detail::Parser p(text, scope);
  auto w = p.word_ref();
  p.finish();
  return w;
}

inline std::string format(const Cdf& F) {
  std::ostringstream os;
  os << "mix(";
  bool first = true;
  for (const auto& c : decompose(F)) {
    if (!first) os << ", ";
    first = false;
    if (const auto* a = std::get_if<Atom>(&c)) os << "atom(" << a->x << ", " << a->w << ")";
    else {
      const auto& u = std::get<Uniform>(c);
      os << "unif(" << u.a << ", " << u.b << ", " << u.w << ")";
    }
  }
  os << ")";
  return os.str();
}

inline std::string format(const PiecewiseMonotone& f) {
  std::ostringstream os;
  os << "pw { ";
  if (f.is_bounded()) os << "domain [" << f.domain().lo << ", " << f.domain().hi << "]; points";
  else os << "reals(" << f.slope_lo() << ", " << f.slope_hi() << "); points";
  for (const auto& b : f.points()) {
    os << " (" << b.x << " : ";
    if (b.continuous()) os << b.at << ")";
    else os << b.left << ", " << b.at << ", " << b.right << ")";
  }
  os << "; }";
  return os.str();
}

inline std::string format(const Primitive& p) {
  if (const auto* d = std::get_if<Distort>(&p)) return "distort(" + format(d->d.fn()) + ")";
  return "push(" + format(std::get<Push>(p).u.fn()) + ")";
}

inline std::string format(const TransformWord& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.items.size(); ++i) {
    if (i) s += ", ";
    s += format(w.items[i]);
  }
  return s + "]";
}

/// Serializes every declaration, one per line, in file order.
inline std::string format(const Spec& spec) {
  std::string out;
  for (const auto& n : spec.names()) {
    switch (spec.kind(n)) {
      case Spec::Kind::dist: out += "dist " + n + " = " + format(spec.dist(n)); break;
      case Spec::Kind::fn: out += "fn " + n + " = " + format(spec.fn(n)); break;
      case Spec::Kind::word: out += "word " + n + " = " + format(spec.word(n)); break;
    }
    out += "\n";
  }
  return out;
}

}  // namespace dtx
