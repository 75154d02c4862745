#pragma once

// Probability distortions, utility transforms and their compositions.

#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "dtx/dist.hpp"

namespace dtx {

/// Increasing d : [0,1] -> [0,1] with d(0) = 0 and d(1) = 1.
class Distortion {
 public:
  explicit Distortion(PiecewiseMonotone d) : d_(std::move(d)) {
    if (!d_.is_bounded() || d_.domain() != Interval{0, 1})
      throw ClassError("distortion must be defined on [0,1]");
    if (d_.points().front().at != 0 || d_.points().back().at != 1)
      throw ClassError("distortion must satisfy d(0) = 0 and d(1) = 1");
    cls_ = classify(d_);
  }

  static Distortion identity() { return Distortion(PiecewiseMonotone::identity_on(0, 1)); }

  /// Indicator of (p, 1]: jumps from 0 to 1 just after p. Not right-continuous.
  static Distortion step_open(const Rat& p) { return step(p, false); }
  /// Indicator of [p, 1]: the right-continuous version of step_open(p).
  static Distortion step_closed(const Rat& p) { return step(p, true); }

  const PiecewiseMonotone& fn() const { return d_; }
  const Classification& cls() const { return cls_; }
  bool right_continuous() const { return cls_.right_continuous; }
  /// Strictly increasing and continuous, hence a bijection of [0,1].
  bool invertible() const { return cls_.strictly_increasing && cls_.continuous; }

  Rat operator()(const Rat& t) const { return eval(d_, t); }
  friend bool operator==(const Distortion& a, const Distortion& b) { return a.d_ == b.d_; }

 private:
  static Distortion step(const Rat& p, bool closed) {
    if (!(p > 0 && p < 1)) throw LevelError("step location must lie in (0,1)");
    Rat at = closed ? Rat(1) : Rat(0);
    return Distortion(PiecewiseMonotone::bounded(0, 1, {{0, 0, 0, 0}, {p, 0, at, 1}, {1, 1, 1, 1}}));
  }

  PiecewiseMonotone d_;
  Classification cls_;
};

/// Increasing u : R -> R. The continuity class is tracked: continuous
/// members form the usual utility class, left-continuous members the
/// extended class, and strictly increasing continuous surjective members the
/// invertible class.
class Utility {
 public:
  explicit Utility(PiecewiseMonotone u) : u_(std::move(u)) {
    if (u_.is_bounded()) throw ClassError("utility must be defined on the reals");
    cls_ = classify(u_);
  }

  static Utility identity() { return Utility(PiecewiseMonotone::identity()); }
  static Utility affine(const Rat& slope, const Rat& intercept) {
    return Utility(PiecewiseMonotone::affine(slope, intercept));
  }

  const PiecewiseMonotone& fn() const { return u_; }
  const Classification& cls() const { return cls_; }
  bool continuous() const { return cls_.continuous; }
  bool left_continuous() const { return cls_.left_continuous; }
  bool invertible() const { return cls_.strictly_increasing && cls_.continuous && cls_.surjective; }

  Rat operator()(const Rat& x) const { return eval(u_, x); }
  friend bool operator==(const Utility& a, const Utility& b) { return a.u_ == b.u_; }

 private:
  PiecewiseMonotone u_;
  Classification cls_;
};

struct Distort {
  Distortion d;
  friend bool operator==(const Distort&, const Distort&) = default;
};
struct Push {
  Utility u;
  friend bool operator==(const Push&, const Push&) = default;
};
using Primitive = std::variant<Distort, Push>;

/// Composition of primitives; the last element is applied first.
struct TransformWord {
  std::vector<Primitive> items;
  friend bool operator==(const TransformWord&, const TransformWord&) = default;
};

/// T_d o T^u.
struct RduForm {
  Distortion d;
  Utility u;
  TransformWord word() const { return {{Distort{d}, Push{u}}}; }
  friend bool operator==(const RduForm&, const RduForm&) = default;
};

/// T_d(F)(x) = (d o F)(x+). The right limit is read off the composed
/// representation, so a non-right-continuous d is handled exactly.
inline Cdf apply_distortion(const Distortion& d, const Cdf& F) {
  PiecewiseMonotone h = compose(d.fn(), F.body());
  std::vector<Breakpoint> pts = h.points();
  for (auto& b : pts) b.at = b.right;
  return Cdf(PiecewiseMonotone::reals(0, 0, std::move(pts)));
}

/// Pushforward of F under u: the law of u(X) for X ~ F. Atoms move to u(x);
/// uniform pieces are cut at u's breakpoints and mapped piecewise, with flat
/// stretches of u collapsing their mass into an atom and jumps of u leaving
/// the gap empty.
inline Cdf apply_utility(const Utility& u, const Cdf& F) {
  const auto& fu = u.fn();
  std::vector<Component> out;
  for (const auto& c : decompose(F)) {
    if (const auto* a = std::get_if<Atom>(&c)) {
      out.push_back(Atom{eval(fu, a->x), a->w});
      continue;
    }
    const auto& seg = std::get<Uniform>(c);
    std::vector<Rat> cuts{seg.a};
    for (const auto& b : fu.points())
      if (seg.a < b.x && b.x < seg.b) cuts.push_back(b.x);
    cuts.push_back(seg.b);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Rat mass = seg.w * (cuts[i + 1] - cuts[i]) / (seg.b - seg.a);
      Rat y0 = eval3(fu, cuts[i]).right;
      Rat y1 = eval3(fu, cuts[i + 1]).left;
      if (y0 < y1) out.push_back(Uniform{y0, y1, mass});
      else out.push_back(Atom{y0, mass});
    }
  }
  return make(out);
}

inline Cdf apply(const Primitive& p, const Cdf& F) {
  return std::visit(
      [&](const auto& prim) -> Cdf {
        if constexpr (std::is_same_v<std::decay_t<decltype(prim)>, Distort>)
          return apply_distortion(prim.d, F);
        else
          return apply_utility(prim.u, F);
      },
      p);
}

inline Cdf apply_word(const TransformWord& w, const Cdf& F) {
  Cdf G = F;
  for (auto it = w.items.rbegin(); it != w.items.rend(); ++it) G = dtx::apply(*it, G);
  return G;
}

inline Utility compose_utilities(const Utility& u1, const Utility& u2) {
  return Utility(compose(u1.fn(), u2.fn()));
}

/// d2 o d1, which satisfies T_{d2} o T_{d1} = T_{d2 o d1} as soon as one of
/// the two is right-continuous. ClassError when neither is.
inline Distortion compose_distortions(const Distortion& d2, const Distortion& d1) {
  if (!d2.right_continuous() && !d1.right_continuous())
    throw ClassError("collapsing two distortions needs one of them right-continuous");
  return Distortion(compose(d2.fn(), d1.fn()));
}

/// Collapses an admissible word into T_d o T^u. Admissible: every pushed
/// utility is continuous and every distortion other than the leftmost one is
/// right-continuous. Pushes commute past distortions, distortions collapse
/// from the right, utilities compose in order.
inline RduForm normal_form(const TransformWord& w) {
  std::vector<const Distortion*> ds;
  std::vector<const Utility*> us;
  for (const auto& p : w.items) {
    if (const auto* d = std::get_if<Distort>(&p)) {
      if (!ds.empty() && !d->d.right_continuous())
        throw NormalFormError("only the leftmost distortion may fail right-continuity");
      ds.push_back(&d->d);
    } else {
      const auto& u = std::get<Push>(p).u;
      if (!u.continuous()) throw NormalFormError("pushed utilities must be continuous");
      us.push_back(&u);
    }
  }
  Distortion d = Distortion::identity();
  if (!ds.empty()) {
    d = *ds.back();
    for (auto it = ds.rbegin() + 1; it != ds.rend(); ++it) d = compose_distortions(**it, d);
  }
  Utility u = Utility::identity();
  if (!us.empty()) {
    u = *us.back();
    for (auto it = us.rbegin() + 1; it != us.rend(); ++it) u = compose_utilities(**it, u);
  }
  return {std::move(d), std::move(u)};
}

/// u3 = u1 o u2 o u1^{-1}, so that u3 o u1 = u1 o u2.
inline Utility conjugate_utility(const Utility& u1, const Utility& u2) {
  if (!u1.invertible())
    throw NotInvertibleError("conjugating utility must be strictly increasing, continuous and onto");
  PiecewiseMonotone inv = strict_inverse(u1.fn());
  return Utility(compose(u1.fn(), compose(u2.fn(), inv)));
}

/// d2 = d o d1 o d^{-1}, so that d2 o d = d o d1.
inline Distortion conjugate_distortion(const Distortion& d, const Distortion& d1) {
  if (!d.invertible())
    throw NotInvertibleError("conjugating distortion must be strictly increasing and continuous");
  PiecewiseMonotone inv = strict_inverse(d.fn());
  return Distortion(compose(d.fn(), compose(d1.fn(), inv)));
}

struct EU {
  Utility u;
};
struct DU {
  Distortion d;
};
struct RDU {
  Distortion d;
  Utility u;
};
using Functional = std::variant<EU, DU, RDU>;

inline Rat evaluate_functional(const Functional& kind, const Cdf& F) {
  if (const auto* eu = std::get_if<EU>(&kind)) return mean(apply_utility(eu->u, F));
  if (const auto* du = std::get_if<DU>(&kind)) return mean(apply_distortion(du->d, F));
  const auto& rdu = std::get<RDU>(kind);
  return mean(apply_distortion(rdu.d, apply_utility(rdu.u, F)));
}

struct VaR {
  Rat p;
};
struct ES {
  Rat alpha;
};
using RiskMeasure = std::variant<VaR, ES>;

/// Distortion whose dual functional is the upper-tail average at level alpha:
/// t -> max(0, (t - (1 - alpha)) / alpha).
inline Distortion es_distortion(const Rat& alpha) {
  if (!(alpha > 0 && alpha <= 1)) throw LevelError("ES level must lie in (0,1]");
  if (alpha == 1) return Distortion::identity();
  return Distortion(PiecewiseMonotone::bounded_through({{0, 0}, {1 - alpha, 0}, {1, 1}}));
}

inline Rat risk_measure(const RiskMeasure& kind, const Cdf& F) {
  if (const auto* v = std::get_if<VaR>(&kind)) {
    if (!(v->p > 0 && v->p < 1)) throw LevelError("VaR level must lie in (0,1)");
    return evaluate_functional(DU{Distortion::step_open(v->p)}, F);
  }
  return evaluate_functional(DU{es_distortion(std::get<ES>(kind).alpha)}, F);
}

}  // namespace dtx
