#pragma once

// Compactly supported distributions on the real line, stored as canonical
// right-continuous cdfs: atoms are jumps, uniform pieces are affine segments.

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dtx/pwfn.hpp"

namespace dtx {

struct Atom {
  Rat x;
  Rat w;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Mass w spread uniformly over [a, b].
struct Uniform {
  Rat a;
  Rat b;
  Rat w;
  friend bool operator==(const Uniform&, const Uniform&) = default;
};

using Component = std::variant<Atom, Uniform>;

class Cdf {
 public:
  /// Wraps a function that must be a canonical cdf: defined on the reals,
  /// flat tails at 0 and 1, right-continuous.
  explicit Cdf(PiecewiseMonotone body) : body_(std::move(body)) {
    if (body_.is_bounded()) throw SpecError("cdf must be defined on the reals");
    if (body_.slope_lo() != 0 || body_.slope_hi() != 0) throw SpecError("cdf must have flat tails");
    const auto& pts = body_.points();
    if (pts.front().left != 0 || pts.back().right != 1) throw SpecError("cdf must rise from 0 to 1");
    for (const auto& b : pts)
      if (b.at != b.right) throw SpecError("cdf must be right-continuous at x=" + b.x.str());
  }

  const PiecewiseMonotone& body() const { return body_; }
  /// Support hull [lo, hi].
  const Rat& lo() const { return body_.points().front().x; }
  const Rat& hi() const { return body_.points().back().x; }
  Rat operator()(const Rat& x) const { return eval(body_, x); }

  friend bool operator==(const Cdf&, const Cdf&) = default;

 private:
  PiecewiseMonotone body_;
};

/// Builds a canonical cdf from atoms and uniform pieces whose weights are
/// positive and sum to one. Coincident atoms and overlapping pieces merge.
inline Cdf make(std::span<const Component> parts) {
  if (parts.empty()) throw SpecError("distribution needs at least one component");
  Rat total;
  std::vector<Rat> xs;
  for (const auto& c : parts) {
    if (const auto* a = std::get_if<Atom>(&c)) {
      if (a->w <= 0) throw SpecError("atom weight must be positive");
      total += a->w;
      xs.push_back(a->x);
    } else {
      const auto& u = std::get<Uniform>(c);
      if (u.w <= 0) throw SpecError("uniform weight must be positive");
      if (!(u.a < u.b)) throw SpecError("uniform needs a < b");
      total += u.w;
      xs.push_back(u.a);
      xs.push_back(u.b);
    }
  }
  if (total != 1) throw SpecError("weights sum to " + total.str() + ", not 1");
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<Breakpoint> pts;
  pts.reserve(xs.size());
  for (const auto& x : xs) {
    Rat below, here;
    for (const auto& c : parts) {
      if (const auto* a = std::get_if<Atom>(&c)) {
        if (a->x < x) below += a->w;
        else if (a->x == x) here += a->w;
      } else {
        const auto& u = std::get<Uniform>(c);
        if (u.b <= x) below += u.w;
        else if (u.a < x) below += u.w * (x - u.a) / (u.b - u.a);
      }
    }
    Rat at = below + here;
    pts.push_back({x, below, at, at});
  }
  return Cdf(PiecewiseMonotone::reals(0, 0, std::move(pts)));
}

inline Cdf make(std::initializer_list<Component> parts) {
  return make(std::span<const Component>(parts.begin(), parts.size()));
}

inline Cdf point_mass(const Rat& x) { return make({Atom{x, 1}}); }
/// Two-point law with P(X = 1) = p.
inline Cdf bernoulli(const Rat& p) {
  if (p == 0) return point_mass(0);
  if (p == 1) return point_mass(1);
  return make({Atom{0, 1 - p}, Atom{1, p}});
}
/// alpha * delta_y + (1 - alpha) * delta_z.
inline Cdf two_point(const Rat& alpha, const Rat& y, const Rat& z) {
  if (alpha == 1 || y == z) return point_mass(y);
  if (alpha == 0) return point_mass(z);
  return make({Atom{y, alpha}, Atom{z, 1 - alpha}});
}
inline Cdf uniform(const Rat& a, const Rat& b) { return make({Uniform{a, b, 1}}); }

/// Atoms and uniform pieces of a cdf, in increasing order of location.
inline std::vector<Component> decompose(const Cdf& F) {
  std::vector<Component> out;
  const auto& pts = F.body().points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].right > pts[i].left) out.push_back(Atom{pts[i].x, pts[i].right - pts[i].left});
    if (i + 1 < pts.size() && pts[i + 1].left > pts[i].right)
      out.push_back(Uniform{pts[i].x, pts[i + 1].x, pts[i + 1].left - pts[i].right});
  }
  return out;
}

/// inf{x : F(x) >= t} for t in (0, 1].
inline Rat left_quantile(const Cdf& F, const Rat& t) {
  if (!(t > 0 && t <= 1)) throw LevelError("left quantile level must lie in (0,1], got " + t.str());
  const auto& pts = F.body().points();
  auto it = std::find_if(pts.begin(), pts.end(), [&](const Breakpoint& b) { return b.at >= t; });
  if (it == pts.begin() || it->left < t) return it->x;
  const auto& prev = *(it - 1);
  return prev.x + (t - prev.at) * (it->x - prev.x) / (it->left - prev.at);
}

/// inf{x : F(x) > t} for t in [0, 1).
inline Rat right_quantile(const Cdf& F, const Rat& t) {
  if (!(t >= 0 && t < 1)) throw LevelError("right quantile level must lie in [0,1), got " + t.str());
  const auto& pts = F.body().points();
  auto it = std::find_if(pts.begin(), pts.end(), [&](const Breakpoint& b) { return b.at > t; });
  if (it == pts.begin() || it->left <= t) return it->x;
  const auto& prev = *(it - 1);
  return prev.x + (t - prev.at) * (it->x - prev.x) / (it->left - prev.at);
}

/// First-order stochastic dominance F <=_st G, i.e. F(x) >= G(x) everywhere.
/// Both cdfs are affine between merged breakpoints, so comparing the value
/// and both one-sided limits there decides the inequality.
inline bool leq_st(const Cdf& F, const Cdf& G) {
  std::vector<Rat> xs;
  for (const auto& b : F.body().points()) xs.push_back(b.x);
  for (const auto& b : G.body().points()) xs.push_back(b.x);
  for (const auto& x : xs) {
    Triple f = eval3(F.body(), x), g = eval3(G.body(), x);
    if (f.left < g.left || f.at < g.at || f.right < g.right) return false;
  }
  return true;
}

inline Rat mean(const Cdf& F) {
  Rat m;
  for (const auto& c : decompose(F)) {
    if (const auto* a = std::get_if<Atom>(&c)) m += a->x * a->w;
    else {
      const auto& u = std::get<Uniform>(c);
      m += u.w * (u.a + u.b) / 2;
    }
  }
  return m;
}

inline bool equals(const Cdf& F, const Cdf& G) { return F == G; }

}  // namespace dtx
