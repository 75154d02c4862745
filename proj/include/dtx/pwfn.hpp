#pragma once

// Increasing piecewise-linear functions with jumps, over exact rationals.
//
// A function is a strictly x-sorted list of breakpoints, each carrying its
// left limit, value and right limit. Between consecutive breakpoints the
// function is the affine segment joining (x_i, right_i) to
// (x_{i+1}, left_{i+1}). The domain is either a closed interval [lo, hi]
// whose endpoints are breakpoints, or the whole real line with linear tails
// of nonnegative slope on both sides.
//
// Every constructed value is in canonical form: interior breakpoints at
// which the function is continuous with equal slopes on both sides are
// removed, so two functions are equal iff their representations are equal.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dtx/errors.hpp"
#include "dtx/rational.hpp"

namespace dtx {

struct Breakpoint {
  Rat x;
  Rat left;
  Rat at;
  Rat right;

  bool continuous() const { return left == at && at == right; }
  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// One-sided limits and value of a function at a point.
struct Triple {
  Rat left;
  Rat at;
  Rat right;
  friend bool operator==(const Triple&, const Triple&) = default;
};

struct Interval {
  Rat lo;
  Rat hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

class PiecewiseMonotone {
 public:
  /// Function on [lo, hi]. The first and last breakpoints must sit at lo and
  /// hi; their outward limits are ignored (set to the point value).
  static PiecewiseMonotone bounded(Rat lo, Rat hi, std::vector<Breakpoint> pts) {
    if (!(lo < hi)) throw DomainError("bounded domain needs lo < hi");
    PiecewiseMonotone f;
    f.domain_ = Interval{std::move(lo), std::move(hi)};
    f.pts_ = std::move(pts);
    f.validate();
    f.canonicalize();
    return f;
  }

  /// Function on the real line with the given tail slopes.
  static PiecewiseMonotone reals(Rat slope_lo, Rat slope_hi, std::vector<Breakpoint> pts) {
    PiecewiseMonotone f;
    f.slope_lo_ = std::move(slope_lo);
    f.slope_hi_ = std::move(slope_hi);
    f.pts_ = std::move(pts);
    f.validate();
    f.canonicalize();
    return f;
  }

  /// Continuous function on [front.x, back.x] interpolating the given nodes.
  static PiecewiseMonotone bounded_through(const std::vector<std::pair<Rat, Rat>>& nodes) {
    if (nodes.size() < 2) throw DomainError("need at least two nodes");
    return bounded(nodes.front().first, nodes.back().first, continuous_points(nodes));
  }

  /// Continuous function on the reals interpolating the given nodes.
  static PiecewiseMonotone reals_through(Rat slope_lo, Rat slope_hi,
                                         const std::vector<std::pair<Rat, Rat>>& nodes) {
    return reals(std::move(slope_lo), std::move(slope_hi), continuous_points(nodes));
  }

  /// x -> slope * x + intercept on the reals.
  static PiecewiseMonotone affine(const Rat& slope, const Rat& intercept) {
    return reals(slope, slope, {{0, intercept, intercept, intercept}});
  }

  static PiecewiseMonotone identity() { return affine(1, 0); }
  static PiecewiseMonotone identity_on(const Rat& lo, const Rat& hi) {
    return bounded_through({{lo, lo}, {hi, hi}});
  }

  bool is_bounded() const { return domain_.has_value(); }
  /// Bounded domain; throws DomainError for functions on the reals.
  const Interval& domain() const {
    if (!domain_) throw DomainError("function is defined on the whole real line");
    return *domain_;
  }
  const std::vector<Breakpoint>& points() const { return pts_; }
  const Rat& slope_lo() const { return slope_lo_; }
  const Rat& slope_hi() const { return slope_hi_; }

  bool contains(const Rat& x) const {
    return !domain_ || (domain_->lo <= x && x <= domain_->hi);
  }

  /// Slope of segment i, joining breakpoint i to breakpoint i + 1.
  Rat segment_slope(std::size_t i) const {
    return (pts_[i + 1].left - pts_[i].right) / (pts_[i + 1].x - pts_[i].x);
  }

  /// Slope immediately to the left of breakpoint i (0 at a bounded lower end).
  Rat slope_left_of(std::size_t i) const {
    if (i > 0) return segment_slope(i - 1);
    return domain_ ? Rat(0) : slope_lo_;
  }
  /// Slope immediately to the right of breakpoint i (0 at a bounded upper end).
  Rat slope_right_of(std::size_t i) const {
    if (i + 1 < pts_.size()) return segment_slope(i);
    return domain_ ? Rat(0) : slope_hi_;
  }

  /// Slope on (x, x + eps) for small eps; x must lie in the domain.
  Rat slope_right_at(const Rat& x) const {
    auto [idx, exact] = locate(x);
    if (exact) return slope_right_of(idx);
    if (idx == 0) return slope_lo_;
    if (idx == pts_.size()) return slope_hi_;
    return segment_slope(idx - 1);
  }
  /// Slope on (x - eps, x) for small eps; x must lie in the domain.
  Rat slope_left_at(const Rat& x) const {
    auto [idx, exact] = locate(x);
    if (exact) return slope_left_of(idx);
    if (idx == 0) return slope_lo_;
    if (idx == pts_.size()) return slope_hi_;
    return segment_slope(idx - 1);
  }

  /// Position of x among the breakpoints: (i, true) when x == pts[i].x,
  /// otherwise (i, false) with pts[i-1].x < x < pts[i].x.
  std::pair<std::size_t, bool> locate(const Rat& x) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), x,
                               [](const Breakpoint& b, const Rat& v) { return b.x < v; });
    auto idx = static_cast<std::size_t>(it - pts_.begin());
    return {idx, it != pts_.end() && it->x == x};
  }

  /// Infimum and supremum of the image, nullopt when unbounded.
  std::optional<Rat> inf_value() const {
    if (!domain_ && slope_lo_ > 0) return std::nullopt;
    return domain_ ? pts_.front().at : pts_.front().left;
  }
  std::optional<Rat> sup_value() const {
    if (!domain_ && slope_hi_ > 0) return std::nullopt;
    return domain_ ? pts_.back().at : pts_.back().right;
  }

  friend bool operator==(const PiecewiseMonotone&, const PiecewiseMonotone&) = default;

 private:
  PiecewiseMonotone() = default;

  static std::vector<Breakpoint> continuous_points(const std::vector<std::pair<Rat, Rat>>& nodes) {
    std::vector<Breakpoint> pts;
    pts.reserve(nodes.size());
    for (const auto& [x, y] : nodes) pts.push_back({x, y, y, y});
    return pts;
  }

  void validate() {
    if (pts_.empty()) throw DomainError("function needs at least one breakpoint");
    for (std::size_t i = 1; i < pts_.size(); ++i)
      if (!(pts_[i - 1].x < pts_[i].x))
        throw DomainError("breakpoints must be strictly increasing in x");
    if (domain_) {
      if (pts_.front().x != domain_->lo || pts_.back().x != domain_->hi)
        throw DomainError("bounded function must have breakpoints at both domain ends");
      pts_.front().left = pts_.front().at;
      pts_.back().right = pts_.back().at;
      slope_lo_ = 0;
      slope_hi_ = 0;
    } else if (slope_lo_ < 0 || slope_hi_ < 0) {
      throw ClassError("tail slopes must be nonnegative");
    }
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      const auto& b = pts_[i];
      if (!(b.left <= b.at && b.at <= b.right))
        throw ClassError("breakpoint at x=" + b.x.str() + " violates left <= at <= right");
      if (i + 1 < pts_.size() && !(b.right <= pts_[i + 1].left))
        throw ClassError("segment after x=" + b.x.str() + " is decreasing");
    }
  }

  void canonicalize() {
    const std::size_t n = pts_.size();
    std::vector<Breakpoint> kept;
    kept.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      bool endpoint = domain_ && (i == 0 || i + 1 == n);
      bool redundant = !endpoint && pts_[i].continuous() && slope_left_of(i) == slope_right_of(i);
      if (!redundant) kept.push_back(pts_[i]);
    }
    if (kept.empty()) {
      // Globally affine on the reals: anchor at the origin.
      const auto& b = pts_.front();
      Rat y0 = b.at - slope_lo_ * b.x;
      kept.push_back({0, y0, y0, y0});
    }
    pts_ = std::move(kept);
  }

  std::optional<Interval> domain_;
  std::vector<Breakpoint> pts_;
  Rat slope_lo_;
  Rat slope_hi_;
};

/// f(x-), f(x), f(x+). At the ends of a bounded domain the missing
/// one-sided limit falls back to the point value.
inline Triple eval3(const PiecewiseMonotone& f, const Rat& x) {
  if (!f.contains(x)) throw DomainError("x=" + x.str() + " outside the domain");
  const auto& pts = f.points();
  auto [idx, exact] = f.locate(x);
  if (exact) return {pts[idx].left, pts[idx].at, pts[idx].right};
  Rat v;
  if (idx == 0) {
    v = pts.front().left + f.slope_lo() * (x - pts.front().x);
  } else if (idx == pts.size()) {
    v = pts.back().right + f.slope_hi() * (x - pts.back().x);
  } else {
    const auto& a = pts[idx - 1];
    v = a.right + f.segment_slope(idx - 1) * (x - a.x);
  }
  return {v, v, v};
}

inline Rat eval(const PiecewiseMonotone& f, const Rat& x) { return eval3(f, x).at; }

/// sup{y in domain : f(y) <= x}, with sup of the empty set = -inf.
inline ExtendedRat right_inverse(const PiecewiseMonotone& f, const Rat& x) {
  const auto& pts = f.points();
  // Largest breakpoint whose value is <= x.
  auto it = std::upper_bound(pts.begin(), pts.end(), x,
                             [](const Rat& v, const Breakpoint& b) { return v < b.at; });
  if (it == pts.begin()) {
    const auto& b = pts.front();
    if (f.is_bounded()) return ExtendedRat::neg_inf();
    if (b.left <= x) return b.x;
    if (f.slope_lo() == 0) return ExtendedRat::neg_inf();
    return b.x + (x - b.left) / f.slope_lo();
  }
  auto i = static_cast<std::size_t>(it - pts.begin()) - 1;
  const auto& b = pts[i];
  if (i + 1 == pts.size()) {
    if (f.is_bounded() || b.right > x) return b.x;
    if (f.slope_hi() == 0) return ExtendedRat::pos_inf();
    return b.x + (x - b.right) / f.slope_hi();
  }
  const auto& next = pts[i + 1];
  if (b.right > x) return b.x;
  if (next.left <= x) return next.x;
  return b.x + (x - b.right) * (next.x - b.x) / (next.left - b.right);
}

/// f o g in canonical form. The image of g must lie in the domain of f.
inline PiecewiseMonotone compose(const PiecewiseMonotone& f, const PiecewiseMonotone& g) {
  if (f.is_bounded()) {
    auto lo = g.inf_value(), hi = g.sup_value();
    if (!lo || !hi || *lo < f.domain().lo || *hi > f.domain().hi)
      throw DomainError("compose: image of inner function leaves the outer domain");
  }
  const auto& gp = g.points();
  const auto& fp = f.points();

  std::vector<Rat> xs;
  for (const auto& b : gp) xs.push_back(b.x);
  // Preimages of f's breakpoints under the strictly increasing pieces of g.
  for (std::size_t i = 0; i + 1 < gp.size(); ++i) {
    const Rat& r = gp[i].right;
    const Rat& l = gp[i + 1].left;
    if (!(r < l)) continue;
    for (const auto& c : fp)
      if (r < c.x && c.x < l) xs.push_back(gp[i].x + (c.x - r) * (gp[i + 1].x - gp[i].x) / (l - r));
  }
  if (!g.is_bounded()) {
    if (g.slope_lo() > 0)
      for (const auto& c : fp)
        if (c.x < gp.front().left) xs.push_back(gp.front().x + (c.x - gp.front().left) / g.slope_lo());
    if (g.slope_hi() > 0)
      for (const auto& c : fp)
        if (c.x > gp.back().right) xs.push_back(gp.back().x + (c.x - gp.back().right) / g.slope_hi());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<Breakpoint> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    Triple gt = eval3(g, x);
    Rat at = eval(f, gt.at);
    // Where g moves strictly, f o g picks up f's one-sided limit at g's limit;
    // where g is flat, it sees f's value at that constant level.
    Rat left = g.slope_left_at(x) > 0 ? eval3(f, gt.left).left : eval(f, gt.left);
    Rat right = g.slope_right_at(x) > 0 ? eval3(f, gt.right).right : eval(f, gt.right);
    out.push_back({x, std::move(left), std::move(at), std::move(right)});
  }
  if (g.is_bounded()) return PiecewiseMonotone::bounded(g.domain().lo, g.domain().hi, std::move(out));
  return PiecewiseMonotone::reals(f.slope_lo() * g.slope_lo(), f.slope_hi() * g.slope_hi(),
                                  std::move(out));
}

struct Classification {
  bool increasing = true;
  bool strictly_increasing = false;
  bool continuous = false;
  bool left_continuous = false;
  bool right_continuous = false;
  /// Image equals the domain hull: [lo, hi] for bounded functions, the
  /// whole line for functions on the reals.
  bool surjective = false;
  friend bool operator==(const Classification&, const Classification&) = default;
};

inline Classification classify(const PiecewiseMonotone& f) {
  Classification c;
  const auto& pts = f.points();
  c.left_continuous = std::all_of(pts.begin(), pts.end(), [](const auto& b) { return b.left == b.at; });
  c.right_continuous = std::all_of(pts.begin(), pts.end(), [](const auto& b) { return b.at == b.right; });
  c.continuous = c.left_continuous && c.right_continuous;
  bool no_flat = true;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (pts[i].right == pts[i + 1].left) no_flat = false;
  if (!f.is_bounded() && (f.slope_lo() == 0 || f.slope_hi() == 0)) no_flat = false;
  c.strictly_increasing = no_flat;
  if (f.is_bounded())
    c.surjective = c.continuous && pts.front().at == f.domain().lo && pts.back().at == f.domain().hi;
  else
    c.surjective = c.continuous && f.slope_lo() > 0 && f.slope_hi() > 0;
  return c;
}

/// Exact inverse of a strictly increasing continuous function, defined on
/// its image ([f(lo), f(hi)] or the reals).
inline PiecewiseMonotone strict_inverse(const PiecewiseMonotone& f) {
  auto c = classify(f);
  if (!c.continuous) throw NotInvertibleError("function has a jump");
  if (!c.strictly_increasing) throw NotInvertibleError("function has a flat piece");
  std::vector<Breakpoint> pts;
  for (const auto& b : f.points()) pts.push_back({b.at, b.x, b.x, b.x});
  if (f.is_bounded()) {
    Rat lo = pts.front().x, hi = pts.back().x;
    return PiecewiseMonotone::bounded(lo, hi, std::move(pts));
  }
  return PiecewiseMonotone::reals(1 / f.slope_lo(), 1 / f.slope_hi(), std::move(pts));
}

namespace detail {

/// Builds the exact piecewise-linear function agreeing with `fn` given a
/// superset `candidates` of its breakpoints. Limits are recovered from two
/// interior samples per gap, which is exact because fn is affine there.
inline PiecewiseMonotone from_samples(std::optional<Interval> domain, std::vector<Rat> candidates,
                                      const std::function<Rat(const Rat&)>& fn) {
  if (domain) {
    candidates.push_back(domain->lo);
    candidates.push_back(domain->hi);
    std::erase_if(candidates, [&](const Rat& x) { return x < domain->lo || x > domain->hi; });
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (candidates.empty()) candidates.push_back(0);

  auto extrapolate = [&](const Rat& a, const Rat& b, const Rat& target) {
    // Line through (a, fn(a)) and (b, fn(b)) evaluated at target.
    Rat fa = fn(a), fb = fn(b);
    return fa + (fb - fa) * (target - a) / (b - a);
  };
  const std::size_t n = candidates.size();
  std::vector<Breakpoint> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Rat& x = candidates[i];
    pts[i].x = x;
    pts[i].at = fn(x);
    if (i > 0) {
      Rat w = (x - candidates[i - 1]) / 3;
      pts[i].left = extrapolate(x - 2 * w, x - w, x);
    } else if (!domain) {
      pts[i].left = extrapolate(x - 2, x - 1, x);
    } else {
      pts[i].left = pts[i].at;
    }
    if (i + 1 < n) {
      Rat w = (candidates[i + 1] - x) / 3;
      pts[i].right = extrapolate(x + w, x + 2 * w, x);
    } else if (!domain) {
      pts[i].right = extrapolate(x + 1, x + 2, x);
    } else {
      pts[i].right = pts[i].at;
    }
  }
  if (domain) return PiecewiseMonotone::bounded(domain->lo, domain->hi, std::move(pts));
  // Tail slopes measured away from the (possibly jumping) end breakpoints.
  Rat slo = fn(candidates.front() - 1) - fn(candidates.front() - 2);
  Rat shi = fn(candidates.back() + 2) - fn(candidates.back() + 1);
  return PiecewiseMonotone::reals(std::move(slo), std::move(shi), std::move(pts));
}

}  // namespace detail

/// The generalized inverse y -> sup{x : f(x) <= y} as a function. Requires a
/// finite result everywhere on the image hull: a bounded f that is not
/// constant, or f on the reals with both tail slopes positive.
inline PiecewiseMonotone right_inverse_fn(const PiecewiseMonotone& f) {
  std::vector<Rat> ys;
  for (const auto& b : f.points()) {
    ys.push_back(b.left);
    ys.push_back(b.at);
    ys.push_back(b.right);
  }
  auto fn = [&f](const Rat& y) { return right_inverse(f, y).value(); };
  if (f.is_bounded()) {
    const Rat& lo = f.points().front().at;
    const Rat& hi = f.points().back().at;
    if (!(lo < hi)) throw NotInvertibleError("constant function has no generalized inverse");
    return detail::from_samples(Interval{lo, hi}, std::move(ys), fn);
  }
  if (f.slope_lo() == 0 || f.slope_hi() == 0)
    throw NotInvertibleError("generalized inverse is infinite beyond a flat tail");
  return detail::from_samples(std::nullopt, std::move(ys), fn);
}

}  // namespace dtx
