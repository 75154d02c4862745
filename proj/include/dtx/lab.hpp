#pragma once

// Verification laboratory: exact law checkers over a finite corpus of
// distributions, black-box extraction of distortions and utilities, and the
// seeded fuzz drivers built on top of them.
//
// "For all distributions" is replaced by "for every corpus element"; passing
// checks are evidence, not proofs, for the characterization directions.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtx/gen.hpp"

namespace dtx {

struct NamedCdf {
  std::string name;
  Cdf cdf;
};

struct Corpus {
  std::vector<NamedCdf> items;

  std::size_t size() const { return items.size(); }
  void add(std::string name, Cdf F) { items.push_back({std::move(name), std::move(F)}); }
};

/// The fixed ten-element corpus: point masses, Bernoullis, a two-point law,
/// two uniforms and an atom-plus-uniform mixture.
inline Corpus default_corpus() {
  Corpus c;
  c.add("delta(-2)", point_mass(-2));
  c.add("delta(0)", point_mass(0));
  c.add("delta(1/2)", point_mass(Rat(1, 2)));
  c.add("delta(3)", point_mass(3));
  c.add("bernoulli(1/4)", bernoulli(Rat(1, 4)));
  c.add("bernoulli(1/2)", bernoulli(Rat(1, 2)));
  c.add("two_point(1/3,-1,2)", two_point(Rat(1, 3), -1, 2));
  c.add("U[0,1]", uniform(0, 1));
  c.add("U[-1,1]", uniform(-1, 1));
  c.add("atom(0,1/2)+unif(0,1,1/2)", make({Atom{0, Rat(1, 2)}, Uniform{0, 1, Rat(1, 2)}}));
  return c;
}

/// Default corpus plus `extra` seeded random cdfs named random#i.
inline Corpus seeded_corpus(std::uint64_t seed, std::size_t extra, int complexity = 3) {
  Corpus c = default_corpus();
  for (std::size_t i = 0; i < extra; ++i)
    c.add("random#" + std::to_string(i), gen_cdf(derive_seed(seed, 10, i), complexity));
  return c;
}

/// An opaque deterministic map on distributions.
struct BlackBoxTransform {
  std::string name;
  std::function<Cdf(const Cdf&)> fn;

  Cdf operator()(const Cdf& F) const { return fn(F); }

  static BlackBoxTransform of(std::string name, TransformWord w) {
    return {std::move(name), [w = std::move(w)](const Cdf& F) { return apply_word(w, F); }};
  }
  static BlackBoxTransform distort(const Distortion& d) {
    return of("distort", TransformWord{{Distort{d}}});
  }
  static BlackBoxTransform push(const Utility& u) { return of("push", TransformWord{{Push{u}}}); }
  static BlackBoxTransform identity() { return {"identity", [](const Cdf& F) { return F; }}; }
};

inline BlackBoxTransform then(const BlackBoxTransform& outer, const BlackBoxTransform& inner) {
  return {outer.name + "*" + inner.name, [outer, inner](const Cdf& F) { return outer(inner(F)); }};
}

/// F -> point mass at the right quantile of F at level 1/2.
inline BlackBoxTransform right_median_point_mass() {
  return {"right_median_point_mass", [](const Cdf& F) { return point_mass(right_quantile(F, Rat(1, 2))); }};
}

/// Bernoulli(1/2 - 1/n) for n = from..to.
inline std::vector<Cdf> bernoulli_approach_sequence(int from, int to) {
  std::vector<Cdf> seq;
  for (int n = from; n <= to; ++n) seq.push_back(bernoulli(Rat(1, 2) - Rat(1, n)));
  return seq;
}

/// A concrete point where two sides of a law disagree.
struct Witness {
  std::string law;
  std::string dist_name;
  Cdf dist;
  Rat x;
  Rat lhs;
  Rat rhs;
};

struct LawReport {
  std::string law;
  std::size_t checked = 0;
  std::optional<Witness> witness;

  bool passed() const { return !witness.has_value(); }

  /// "PASS <law> <count>" or "WITNESS <law> F=<name> x=<rat> lhs=<rat> rhs=<rat>".
  std::string line() const {
    if (passed()) return "PASS " + law + " " + std::to_string(checked);
    const auto& w = *witness;
    return "WITNESS " + law + " F=" + w.dist_name + " x=" + w.x.str() + " lhs=" + w.lhs.str() +
           " rhs=" + w.rhs.str();
  }
};

namespace detail {

inline std::vector<Rat> merged_xs(const Cdf& a, const Cdf& b) {
  std::vector<Rat> xs;
  for (const auto& p : a.body().points()) xs.push_back(p.x);
  for (const auto& p : b.body().points()) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

/// Smallest merged breakpoint where the cdf values differ; if values agree
/// at every breakpoint but some left limit does not, the midpoint of the gap
/// before it.
inline std::optional<Rat> discriminating_point(const Cdf& a, const Cdf& b) {
  auto xs = merged_xs(a, b);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Triple ta = eval3(a.body(), xs[i]), tb = eval3(b.body(), xs[i]);
    if (ta.at != tb.at) return xs[i];
    if (ta.left != tb.left && i > 0) return (xs[i - 1] + xs[i]) / 2;
  }
  return std::nullopt;
}

/// Smallest merged breakpoint (or gap midpoint) where lower(x) < upper(x),
/// i.e. a point refuting lower >=_pointwise upper.
inline std::optional<Rat> dominance_violation(const Cdf& lower_st, const Cdf& upper_st) {
  auto xs = merged_xs(lower_st, upper_st);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Triple f = eval3(lower_st.body(), xs[i]), g = eval3(upper_st.body(), xs[i]);
    if (f.at < g.at) return xs[i];
    if (f.left < g.left && i > 0) return (xs[i - 1] + xs[i]) / 2;
  }
  return std::nullopt;
}

}  // namespace detail

/// Checks lhs(F) == rhs(F) for every corpus element.
inline LawReport agree_check(const std::string& law, const BlackBoxTransform& lhs, const BlackBoxTransform& rhs,
                             const Corpus& corpus) {
  LawReport r{law, 0, std::nullopt};
  for (const auto& [name, F] : corpus.items) {
    Cdf a = lhs(F), b = rhs(F);
    ++r.checked;
    if (a == b) continue;
    Rat x = *detail::discriminating_point(a, b);
    r.witness = Witness{law, name, F, x, a(x), b(x)};
    return r;
  }
  return r;
}

/// T1 o T2 == T2 o T1 on the corpus; lhs of a witness is T1(T2(F)).
inline LawReport commute_check(const BlackBoxTransform& t1, const BlackBoxTransform& t2, const Corpus& corpus,
                               const std::string& law = "commute") {
  return agree_check(law, then(t1, t2), then(t2, t1), corpus);
}

/// T(F) <=_st T(G) for every ordered corpus pair with F <=_st G. The witness
/// names the pair as "F<=G", with lhs = T(F)(x) < rhs = T(G)(x).
inline LawReport monotone_check(const BlackBoxTransform& t, const Corpus& corpus,
                                const std::string& law = "monotone") {
  LawReport r{law, 0, std::nullopt};
  std::vector<Cdf> images;
  images.reserve(corpus.size());
  for (const auto& item : corpus.items) images.push_back(t(item.cdf));
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      if (i == j || !leq_st(corpus.items[i].cdf, corpus.items[j].cdf)) continue;
      ++r.checked;
      if (leq_st(images[i], images[j])) continue;
      Rat x = *detail::dominance_violation(images[i], images[j]);
      r.witness = Witness{law, corpus.items[i].name + "<=" + corpus.items[j].name, corpus.items[i].cdf, x,
                          images[i](x), images[j](x)};
      return r;
    }
  }
  return r;
}

enum class LscVerdict { holds, violated };

/// Violated iff T(F_n) <=_st bound for every supplied n while T(limit) is not.
/// Weak convergence of the sequence to the limit is the caller's claim.
inline LscVerdict lsc_check(const BlackBoxTransform& t, const std::vector<Cdf>& sequence, const Cdf& limit,
                            const Cdf& bound) {
  for (const auto& F : sequence)
    if (!leq_st(t(F), bound)) return LscVerdict::holds;
  return leq_st(t(limit), bound) ? LscVerdict::holds : LscVerdict::violated;
}

struct SetCommuteOptions {
  /// When false, a non-invertible conjugating function is replaced by its
  /// generalized inverse so the candidate partners can be tested anyway.
  bool require_preconditions = true;
};

template <class Fn>
struct SetCommuteReport {
  LawReport forward;   ///< partner o T == T o probe
  LawReport backward;  ///< probe o T == T o partner
  std::vector<Fn> left_partners;
  std::vector<Fn> right_partners;
  bool symbolic_ok = true;  ///< conjugacy identities hold in canonical form

  bool passed() const { return forward.passed() && backward.passed() && symbolic_ok; }
};

/// Set commutation of T = T_d o T^u with the utility transforms: for every
/// probe u2, the partner u3 = u o u2 o u^{-1} must satisfy
/// T^{u3} o T = T o T^{u2}, and w = u^{-1} o u2 o u must satisfy
/// T o T^{w} = T^{u2} o T.
inline SetCommuteReport<Utility> set_commute_utilities(const RduForm& t, const std::vector<Utility>& probes,
                                                       const Corpus& corpus, SetCommuteOptions opts = {}) {
  const auto& u = t.u.fn();
  PiecewiseMonotone inv = u;
  if (t.u.invertible()) inv = strict_inverse(u);
  else if (opts.require_preconditions)
    throw ClassError("utility of the RDU form must be strictly increasing, continuous and onto");
  else inv = right_inverse_fn(u);

  SetCommuteReport<Utility> rep;
  rep.forward.law = "setcommute-u-forward";
  rep.backward.law = "setcommute-u-backward";
  auto tt = BlackBoxTransform::of("T", t.word());
  for (const auto& u2 : probes) {
    Utility u3(compose(u, compose(u2.fn(), inv)));
    Utility w(compose(inv, compose(u2.fn(), u)));
    rep.symbolic_ok = rep.symbolic_ok && compose(u3.fn(), u) == compose(u, u2.fn()) &&
                      compose(u, w.fn()) == compose(u2.fn(), u);
    if (rep.forward.passed()) {
      auto f = agree_check(rep.forward.law, then(BlackBoxTransform::push(u3), tt),
                           then(tt, BlackBoxTransform::push(u2)), corpus);
      rep.forward.checked += f.checked;
      rep.forward.witness = f.witness;
    }
    if (rep.backward.passed()) {
      auto b = agree_check(rep.backward.law, then(BlackBoxTransform::push(u2), tt),
                           then(tt, BlackBoxTransform::push(w)), corpus);
      rep.backward.checked += b.checked;
      rep.backward.witness = b.witness;
    }
    rep.left_partners.push_back(std::move(u3));
    rep.right_partners.push_back(std::move(w));
  }
  return rep;
}

/// Set commutation of T = T_d o T^u with the right-continuous distortions:
/// partners d o d1 o d^{-1} (applied after T) and d^{-1} o d1 o d (applied
/// before T).
inline SetCommuteReport<Distortion> set_commute_distortions(const RduForm& t, const std::vector<Distortion>& probes,
                                                            const Corpus& corpus, SetCommuteOptions opts = {}) {
  const auto& d = t.d.fn();
  PiecewiseMonotone inv = d;
  if (t.d.invertible()) inv = strict_inverse(d);
  else if (opts.require_preconditions)
    throw ClassError("distortion of the RDU form must be strictly increasing and continuous");
  else inv = right_inverse_fn(d);
  if (opts.require_preconditions)
    for (const auto& p : probes)
      if (!p.right_continuous()) throw ClassError("distortion probes must be right-continuous");

  SetCommuteReport<Distortion> rep;
  rep.forward.law = "setcommute-d-forward";
  rep.backward.law = "setcommute-d-backward";
  auto tt = BlackBoxTransform::of("T", t.word());
  for (const auto& d1 : probes) {
    Distortion d2(compose(d, compose(d1.fn(), inv)));
    Distortion d3(compose(inv, compose(d1.fn(), d)));
    rep.symbolic_ok = rep.symbolic_ok && compose(d2.fn(), d) == compose(d, d1.fn()) &&
                      compose(d, d3.fn()) == compose(d1.fn(), d);
    if (rep.forward.passed()) {
      auto f = agree_check(rep.forward.law, then(BlackBoxTransform::distort(d2), tt),
                           then(tt, BlackBoxTransform::distort(d1)), corpus);
      rep.forward.checked += f.checked;
      rep.forward.witness = f.witness;
    }
    if (rep.backward.passed()) {
      auto b = agree_check(rep.backward.law, then(BlackBoxTransform::distort(d1), tt),
                           then(tt, BlackBoxTransform::distort(d3)), corpus);
      rep.backward.checked += b.checked;
      rep.backward.witness = b.witness;
    }
    rep.left_partners.push_back(std::move(d2));
    rep.right_partners.push_back(std::move(d3));
  }
  return rep;
}

template <class Fn>
struct Extraction {
  Fn recovered;
  std::vector<std::pair<Rat, Rat>> samples;
  /// Agreement of T with the transform generated by `recovered` on the corpus.
  LawReport round_trip;
};

/// Reads d(p) off T(Bernoulli(1 - p)) at x = 0, where the input cdf sits at
/// level p on [0, 1). The recovered distortion interpolates the samples
/// linearly between the pinned ends (0,0) and (1,1).
inline Extraction<Distortion> extract_distortion(const BlackBoxTransform& t, std::vector<Rat> levels,
                                                 const Corpus& corpus) {
  std::sort(levels.begin(), levels.end());
  if (std::adjacent_find(levels.begin(), levels.end()) != levels.end())
    throw ExtractionError("levels must be distinct");
  std::vector<std::pair<Rat, Rat>> samples;
  for (const auto& p : levels) {
    if (!(p > 0 && p < 1)) throw ExtractionError("levels must lie in (0,1)");
    Rat v = t(bernoulli(1 - p))(0);
    if (v < 0 || v > 1) throw ExtractionError("probe value outside [0,1]");
    if (!samples.empty() && v < samples.back().second)
      throw ExtractionError("probe values decrease in the level");
    samples.emplace_back(p, v);
  }
  std::vector<std::pair<Rat, Rat>> nodes{{0, 0}};
  nodes.insert(nodes.end(), samples.begin(), samples.end());
  nodes.emplace_back(1, 1);
  Distortion d(PiecewiseMonotone::bounded_through(nodes));
  auto rt = agree_check("extract-distortion-roundtrip", t, BlackBoxTransform::distort(d), corpus);
  return {std::move(d), std::move(samples), std::move(rt)};
}

/// Reads u(x) off the location of T(delta_x). The recovered utility
/// interpolates the samples and extends them with the slopes of the outer
/// segments (slope 1 for a single sample).
inline Extraction<Utility> extract_utility(const BlackBoxTransform& t, std::vector<Rat> points,
                                           const Corpus& corpus) {
  std::sort(points.begin(), points.end());
  if (points.empty() || std::adjacent_find(points.begin(), points.end()) != points.end())
    throw ExtractionError("points must be non-empty and distinct");
  std::vector<std::pair<Rat, Rat>> samples;
  for (const auto& x : points) {
    Cdf image = t(point_mass(x));
    const auto& pts = image.body().points();
    if (pts.size() != 1) throw ExtractionError("image of delta(" + x.str() + ") is not a point mass");
    if (!samples.empty() && pts.front().x < samples.back().second)
      throw ExtractionError("point-mass locations decrease");
    samples.emplace_back(x, pts.front().x);
  }
  Rat lo = 1, hi = 1;
  if (samples.size() > 1) {
    const auto& a = samples[0];
    const auto& b = samples[1];
    lo = (b.second - a.second) / (b.first - a.first);
    const auto& c = samples[samples.size() - 2];
    const auto& e = samples.back();
    hi = (e.second - c.second) / (e.first - c.first);
  }
  Utility u(PiecewiseMonotone::reals_through(lo, hi, samples));
  auto rt = agree_check("extract-utility-roundtrip", t, BlackBoxTransform::push(u), corpus);
  return {std::move(u), std::move(samples), std::move(rt)};
}

// Fuzz drivers. Each iteration i draws its objects from seeds derived from
// (seed, i), so runs are reproducible and iterations are independent.

/// T_d o T^u == T^u o T_d for d in the full distortion class and continuous u.
inline LawReport fuzz_commutation(std::uint64_t seed, std::size_t iters, const Corpus& corpus) {
  LawReport r{"commute-distortion-utility", 0, std::nullopt};
  for (std::size_t i = 0; i < iters; ++i) {
    auto d = gen_distortion(derive_seed(seed, 20, i), DistortionClass::any, 4);
    auto u = gen_utility(derive_seed(seed, 21, i), UtilityClass::continuous, 4);
    Corpus one;
    one.items.push_back(corpus.items[i % corpus.size()]);
    auto c = commute_check(BlackBoxTransform::distort(d), BlackBoxTransform::push(u), one, r.law);
    ++r.checked;
    if (!c.passed()) {
      r.witness = c.witness;
      return r;
    }
  }
  return r;
}

/// Same law for right-continuous d and left-continuous u.
inline LawReport fuzz_rc_lc_commutation(std::uint64_t seed, std::size_t iters, const Corpus& corpus) {
  LawReport r{"commute-rc-distortion-lc-utility", 0, std::nullopt};
  for (std::size_t i = 0; i < iters; ++i) {
    auto d = gen_distortion(derive_seed(seed, 22, i), DistortionClass::right_continuous, 4);
    auto u = gen_utility(derive_seed(seed, 23, i), UtilityClass::left_continuous, 4);
    Corpus one;
    one.items.push_back(corpus.items[i % corpus.size()]);
    auto c = commute_check(BlackBoxTransform::distort(d), BlackBoxTransform::push(u), one, r.law);
    ++r.checked;
    if (!c.passed()) {
      r.witness = c.witness;
      return r;
    }
  }
  return r;
}

/// Left quantile of T^u(F) at p equals u at the left quantile of F.
inline LawReport fuzz_quantile_identity(std::uint64_t seed, std::size_t iters, const Corpus& corpus) {
  LawReport r{"quantile-identity", 0, std::nullopt};
  for (std::size_t i = 0; i < iters; ++i) {
    Rng rng(derive_seed(seed, 24, i));
    auto u = gen_utility(derive_seed(seed, 25, i), UtilityClass::continuous, 4);
    const auto& item = corpus.items[i % corpus.size()];
    Rat p(rng.between(1, 47), 48);
    Rat lhs = left_quantile(apply_utility(u, item.cdf), p);
    Rat rhs = u(left_quantile(item.cdf, p));
    ++r.checked;
    if (lhs != rhs) {
      r.witness = Witness{r.law, item.name, item.cdf, p, lhs, rhs};
      return r;
    }
  }
  return r;
}

/// normal_form(w) applied as T_d o T^u equals word-wise evaluation.
inline LawReport fuzz_semigroup(std::uint64_t seed, std::size_t iters, const Corpus& corpus, int max_len = 6) {
  LawReport r{"semigroup-normal-form", 0, std::nullopt};
  for (std::size_t i = 0; i < iters; ++i) {
    auto w = gen_admissible_word(derive_seed(seed, 26, i), max_len);
    auto nf = normal_form(w);
    auto c = agree_check(r.law, BlackBoxTransform::of("word", w), BlackBoxTransform::of("nf", nf.word()), corpus);
    ++r.checked;
    if (!c.passed()) {
      r.witness = c.witness;
      return r;
    }
  }
  return r;
}

/// T_{d2} o T_{d1} == T_{d2 o d1} with neither distortion right-continuous.
/// No collapse guarantee is claimed for this case; this searches for a
/// counterexample.
inline LawReport fuzz_distortion_collapse(std::uint64_t seed, std::size_t iters, const Corpus& corpus) {
  LawReport r{"distortion-collapse", 0, std::nullopt};
  for (std::size_t i = 0; i < iters; ++i) {
    auto d1 = gen_distortion(derive_seed(seed, 27, i), DistortionClass::any, 4);
    auto d2 = gen_distortion(derive_seed(seed, 28, i), DistortionClass::any, 4);
    Distortion d21(compose(d2.fn(), d1.fn()));
    auto c = agree_check(r.law, then(BlackBoxTransform::distort(d2), BlackBoxTransform::distort(d1)),
                         BlackBoxTransform::distort(d21), corpus);
    ++r.checked;
    if (!c.passed()) {
      r.witness = c.witness;
      return r;
    }
  }
  return r;
}

/// Set commutation with utility probes for seeded RDU forms with invertible UF.
inline LawReport fuzz_set_commute_utilities(std::uint64_t seed, std::size_t iters, const Corpus& corpus,
                                            std::size_t probes = 5) {
  LawReport r{"setcommute-u", 0, std::nullopt};
  for (std::size_t i = 0; i < iters; ++i) {
    RduForm t{gen_distortion(derive_seed(seed, 30, i), DistortionClass::any, 3),
              gen_utility(derive_seed(seed, 31, i), UtilityClass::invertible, 3)};
    std::vector<Utility> ps;
    for (std::size_t j = 0; j < probes; ++j)
      ps.push_back(gen_utility(derive_seed(seed, 32, i * probes + j), UtilityClass::continuous, 3));
    auto rep = set_commute_utilities(t, ps, corpus);
    ++r.checked;
    if (!rep.forward.passed()) { r.witness = rep.forward.witness; return r; }
    if (!rep.backward.passed()) { r.witness = rep.backward.witness; return r; }
    if (!rep.symbolic_ok) throw Error("conjugacy identity failed symbolically at iteration " + std::to_string(i));
  }
  return r;
}

/// Set commutation with right-continuous distortion probes for seeded RDU
/// forms with strictly increasing continuous DF and left-continuous UF.
inline LawReport fuzz_set_commute_distortions(std::uint64_t seed, std::size_t iters, const Corpus& corpus,
                                              std::size_t probes = 5) {
  LawReport r{"setcommute-d", 0, std::nullopt};
  for (std::size_t i = 0; i < iters; ++i) {
    RduForm t{gen_distortion(derive_seed(seed, 33, i), DistortionClass::strict_continuous, 3),
              gen_utility(derive_seed(seed, 34, i), UtilityClass::left_continuous, 3)};
    std::vector<Distortion> ps;
    for (std::size_t j = 0; j < probes; ++j)
      ps.push_back(gen_distortion(derive_seed(seed, 35, i * probes + j), DistortionClass::right_continuous, 3));
    auto rep = set_commute_distortions(t, ps, corpus);
    ++r.checked;
    if (!rep.forward.passed()) { r.witness = rep.forward.witness; return r; }
    if (!rep.backward.passed()) { r.witness = rep.backward.witness; return r; }
    if (!rep.symbolic_ok) throw Error("conjugacy identity failed symbolically at iteration " + std::to_string(i));
  }
  return r;
}

}  // namespace dtx
