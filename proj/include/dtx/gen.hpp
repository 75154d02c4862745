#pragma once

// Seed-deterministic generators of cdfs, distortions, utilities and words.
// Every draw goes through std::mt19937_64, whose output sequence is fixed by
// the standard, and is reduced with plain modular arithmetic so results do
// not depend on the standard library's distribution implementations.

#include <cstdint>
#include <random>
#include <vector>

#include "dtx/transform.hpp"

namespace dtx {

enum class DistortionClass {
  any,                ///< increasing, d(0) = 0, d(1) = 1; jumps of every kind
  right_continuous,   ///< right-continuous members
  strict_continuous,  ///< strictly increasing and continuous
};

enum class UtilityClass {
  continuous,       ///< increasing and continuous
  left_continuous,  ///< increasing and left-continuous
  invertible,       ///< strictly increasing, continuous, onto the reals
};

/// Mixes a base seed with a stream tag and an index (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1) + 0xbf58476d1ce4e5b9ULL * index;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return eng_() % n; }
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }
  long between(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

  /// `count` sorted multiples of 1/den in [lo/den, hi/den]; distinct when
  /// `strict` (requires count <= hi - lo + 1).
  std::vector<Rat> sorted_grid(std::size_t count, long lo, long hi, long den, bool strict) {
    std::vector<long> ks;
    while (ks.size() < count) {
      long k = between(lo, hi);
      if (strict && std::find(ks.begin(), ks.end(), k) != ks.end()) continue;
      ks.push_back(k);
    }
    std::sort(ks.begin(), ks.end());
    std::vector<Rat> out;
    out.reserve(count);
    for (long k : ks) out.emplace_back(k, den);
    return out;
  }

 private:
  std::mt19937_64 eng_;
};

namespace detail {

enum class Shape { cont, jump_rc, jump_lc, jump_mid };

inline int slots(Shape s) { return s == Shape::cont ? 1 : s == Shape::jump_mid ? 3 : 2; }

/// Fills left/at/right for one breakpoint from consecutive sorted values.
inline Breakpoint shaped(const Rat& x, Shape s, const std::vector<Rat>& v, std::size_t& k) {
  switch (s) {
    case Shape::cont: { const Rat& a = v[k++]; return {x, a, a, a}; }
    case Shape::jump_rc: { Rat l = v[k++]; Rat a = v[k++]; return {x, l, a, a}; }
    case Shape::jump_lc: { Rat a = v[k++]; Rat r = v[k++]; return {x, a, a, r}; }
    default: { Rat l = v[k++]; Rat a = v[k++]; Rat r = v[k++]; return {x, l, a, r}; }
  }
}

}  // namespace detail

/// A cdf with between 1 and `complexity` atoms or uniform pieces on [-2, 2].
inline Cdf gen_cdf(std::uint64_t seed, int complexity) {
  Rng rng(derive_seed(seed, 1));
  auto parts = static_cast<std::size_t>(1 + rng.below(static_cast<std::uint64_t>(std::max(complexity, 1))));
  std::vector<Component> comps;
  std::vector<long> weights;
  long total = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    long w = rng.between(1, 4);
    weights.push_back(w);
    total += w;
  }
  for (std::size_t i = 0; i < parts; ++i) {
    Rat w(weights[i], total);
    if (rng.chance(1, 2)) {
      comps.push_back(Atom{Rat(rng.between(-8, 8), 4), w});
    } else {
      auto ends = rng.sorted_grid(2, -8, 8, 4, true);
      comps.push_back(Uniform{ends[0], ends[1], w});
    }
  }
  return make(comps);
}

/// A distortion with at most `complexity` interior breakpoints, certified to
/// lie in the requested class.
inline Distortion gen_distortion(std::uint64_t seed, DistortionClass cls, int complexity) {
  using detail::Shape;
  Rng rng(derive_seed(seed, 2));
  auto k = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(std::max(complexity, 1)) + 1));
  const long den = 24;
  auto xs = rng.sorted_grid(k, 1, den - 1, den, true);

  std::vector<Shape> shapes;
  for (std::size_t i = 0; i < k; ++i) {
    switch (cls) {
      case DistortionClass::any: shapes.push_back(static_cast<Shape>(rng.below(4))); break;
      case DistortionClass::right_continuous:
        shapes.push_back(rng.chance(1, 2) ? Shape::cont : Shape::jump_rc);
        break;
      default: shapes.push_back(Shape::cont);
    }
  }
  bool strict = cls == DistortionClass::strict_continuous;
  bool jump0 = cls == DistortionClass::any && rng.chance(1, 4);
  bool jump1 = !strict && rng.chance(1, 4);
  std::size_t n = (jump0 ? 1 : 0) + (jump1 ? 1 : 0);
  for (auto s : shapes) n += static_cast<std::size_t>(detail::slots(s));
  long vden = strict ? 48 : static_cast<long>(2 + rng.below(11));
  auto vals = strict ? rng.sorted_grid(n, 1, vden - 1, vden, true) : rng.sorted_grid(n, 0, vden, vden, false);

  std::size_t c = 0;
  std::vector<Breakpoint> pts;
  pts.push_back({0, 0, 0, jump0 ? vals[c++] : Rat(0)});
  for (std::size_t i = 0; i < k; ++i) pts.push_back(detail::shaped(xs[i], shapes[i], vals, c));
  Rat left1 = jump1 ? vals[c++] : Rat(1);
  pts.push_back({1, left1, 1, 1});
  Distortion d(PiecewiseMonotone::bounded(0, 1, std::move(pts)));

  const auto& f = d.cls();
  bool ok = cls == DistortionClass::any || (cls == DistortionClass::right_continuous && f.right_continuous) ||
            (cls == DistortionClass::strict_continuous && f.strictly_increasing && f.continuous);
  if (!ok) throw ClassError("generator produced a distortion outside the requested class");
  return d;
}

/// A utility with between 1 and `complexity` breakpoints in [-3, 3],
/// certified to lie in the requested class.
inline Utility gen_utility(std::uint64_t seed, UtilityClass cls, int complexity) {
  using detail::Shape;
  Rng rng(derive_seed(seed, 3));
  auto k = static_cast<std::size_t>(1 + rng.below(static_cast<std::uint64_t>(std::max(complexity, 1))));
  auto xs = rng.sorted_grid(k, -12, 12, 4, true);
  std::vector<Shape> shapes;
  for (std::size_t i = 0; i < k; ++i)
    shapes.push_back(cls == UtilityClass::left_continuous && rng.chance(1, 2) ? Shape::jump_lc : Shape::cont);
  std::size_t n = 0;
  for (auto s : shapes) n += static_cast<std::size_t>(detail::slots(s));
  bool strict = cls == UtilityClass::invertible;
  auto vals = rng.sorted_grid(n, -16, 16, 4, strict);

  static const Rat kSlopes[] = {Rat(0), Rat(1, 2), Rat(1), Rat(2), Rat(3)};
  auto slope = [&] { return strict ? kSlopes[1 + rng.below(4)] : kSlopes[rng.below(4)]; };
  Rat lo = slope(), hi = slope();

  std::size_t c = 0;
  std::vector<Breakpoint> pts;
  for (std::size_t i = 0; i < k; ++i) pts.push_back(detail::shaped(xs[i], shapes[i], vals, c));
  Utility u(PiecewiseMonotone::reals(lo, hi, std::move(pts)));

  const auto& f = u.cls();
  bool ok = (cls == UtilityClass::continuous && f.continuous) ||
            (cls == UtilityClass::left_continuous && f.left_continuous) ||
            (cls == UtilityClass::invertible && u.invertible());
  if (!ok) throw ClassError("generator produced a utility outside the requested class");
  return u;
}

/// A word of length 1..max_len that normal_form accepts: continuous
/// utilities, and right-continuous distortions except possibly the leftmost.
inline TransformWord gen_admissible_word(std::uint64_t seed, int max_len) {
  Rng rng(derive_seed(seed, 4));
  auto len = 1 + rng.below(static_cast<std::uint64_t>(std::max(max_len, 1)));
  TransformWord w;
  bool first_distortion = true;
  for (std::uint64_t i = 0; i < len; ++i) {
    std::uint64_t sub = derive_seed(seed, 5, i);
    if (rng.chance(1, 2)) {
      auto cls = first_distortion ? DistortionClass::any : DistortionClass::right_continuous;
      w.items.push_back(Distort{gen_distortion(sub, cls, 3)});
      first_distortion = false;
    } else {
      w.items.push_back(Push{gen_utility(sub, UtilityClass::continuous, 3)});
    }
  }
  return w;
}

}  // namespace dtx
