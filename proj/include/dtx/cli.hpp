#pragma once

// Command-line front end. run() is the whole program minus process I/O so
// that tests can drive it with argument vectors and string streams.
//
// Exit codes: 0 success or law holds, 1 witness or violation found,
// 2 usage, parse or validation error.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dtx/lab.hpp"
#include "dtx/text.hpp"

namespace dtx::cli {

inline constexpr int kOk = 0;
inline constexpr int kWitness = 1;
inline constexpr int kUsage = 2;

struct Context {
  Spec spec;
  Corpus corpus;
  std::uint64_t seed = 0;
  std::size_t iters = 100;
  std::ostream& out;
};

namespace detail {

inline std::string read_source(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream f(path);
  if (!f) throw SpecError("cannot open '" + path + "'");
  buf << f.rdbuf();
  return buf.str();
}

inline void need(const std::vector<std::string>& args, std::size_t lo, std::size_t hi, const char* usage) {
  if (args.size() < lo || args.size() > hi) throw CLI::ValidationError(std::string("usage: ") + usage);
}

inline BlackBoxTransform transform_arg(const Context& ctx, const std::string& s) {
  if (s == "right_median" && !ctx.spec.has(s)) return right_median_point_mass();
  return BlackBoxTransform::of(s, parse_word(s, ctx.spec));
}

inline Cdf dist_arg(const Context& ctx, const std::string& s) { return parse_dist(s, ctx.spec); }
inline PiecewiseMonotone fn_arg(const Context& ctx, const std::string& s) { return parse_fn(s, ctx.spec); }
inline Rat rat_arg(const std::string& s) { return Rat::parse(s); }

inline int report(Context& ctx, const LawReport& r) {
  ctx.out << r.line() << "\n";
  return r.passed() ? kOk : kWitness;
}

/// Collects expected-vs-computed lines for the reproduce command.
class Checklist {
 public:
  explicit Checklist(std::ostream& out) : out_(out) {}

  void value(const std::string& label, const Rat& computed, const Rat& expected) {
    line(label + "=" + computed.str() + " expected " + expected.str(), computed == expected);
  }
  void line(const std::string& text, bool ok) {
    out_ << "  " << text << " " << (ok ? "MATCH" : "MISMATCH") << "\n";
    ok_ = ok_ && ok;
  }
  void note(const std::string& text) { out_ << "  " << text << "\n"; }
  int finish() {
    out_ << "verdict " << (ok_ ? "MATCH" : "MISMATCH") << "\n";
    return ok_ ? kOk : kWitness;
  }

 private:
  std::ostream& out_;
  bool ok_ = true;
};

inline Distortion step_half() { return Distortion::step_open(Rat(1, 2)); }

/// x for x <= 1/2 and x + 1 beyond: left-continuous with a unit jump.
inline Utility jump_half() {
  return Utility(PiecewiseMonotone::reals(1, 1, {{Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(3, 2)}}));
}

inline int reproduce_example1(Context& ctx) {
  Checklist c(ctx.out);
  Rat x0(1, 2);
  Distortion d = Distortion::step_open(x0);
  Distortion dhat = Distortion::step_closed(x0);
  Cdf F = bernoulli(1 - x0);
  c.note("x0=1/2 d=1{(1/2,1]} dhat=1{[1/2,1]} F=bernoulli(1/2)");
  c.value("T_d(F)(0)", apply_distortion(d, F)(0), 0);
  c.value("T_dhat(F)(0)", apply_distortion(dhat, F)(0), 1);
  c.line("T_dhat != T_d", !(apply_distortion(d, F) == apply_distortion(dhat, F)));
  return c.finish();
}

inline int reproduce_example2(Context& ctx) {
  Checklist c(ctx.out);
  auto t = right_median_point_mass();
  Corpus canon = default_corpus();
  auto mono = monotone_check(t, canon);
  c.line("monotone " + std::string(mono.passed() ? "PASS" : "FAIL") + " (" + std::to_string(mono.checked) +
             " ordered pairs)",
         mono.passed());
  std::size_t cases = 0;
  bool commute = true;
  for (std::size_t i = 0; i < 10 && commute; ++i) {
    auto u = gen_utility(derive_seed(ctx.seed, 40, i), UtilityClass::continuous, 3);
    auto r = commute_check(t, BlackBoxTransform::push(u), canon);
    cases += r.checked;
    if (!r.passed()) {
      commute = false;
      ctx.out << "  " << r.line() << "\n";
    }
  }
  c.line("commute " + std::string(commute ? "PASS" : "FAIL") + " (10 utilities, " + std::to_string(cases) +
             " cases)",
         commute);
  auto lsc = lsc_check(t, bernoulli_approach_sequence(2, 16), bernoulli(Rat(1, 2)), uniform(0, 1));
  c.line(std::string("lsc ") + (lsc == LscVerdict::violated ? "VIOLATED" : "HOLDS") +
             " (F_n=bernoulli(1/2-1/n), n=2..16, bound U[0,1])",
         lsc == LscVerdict::violated);
  auto eq = agree_check("equals-distortion", t, BlackBoxTransform::distort(step_half()), canon);
  c.line("equals T_d with d=1{(1/2,1]} " + std::string(eq.passed() ? "PASS" : "FAIL"), eq.passed());
  return c.finish();
}

inline int reproduce_boundary_witness(Context& ctx) {
  Checklist c(ctx.out);
  c.note("d=1{(1/2,1]} u(x)=x (x<=1/2), x+1 (x>1/2) F=U[0,1]");
  Corpus one;
  one.add("U[0,1]", uniform(0, 1));
  auto r = commute_check(BlackBoxTransform::distort(step_half()), BlackBoxTransform::push(jump_half()), one);
  ctx.out << "  " << r.line() << "\n";
  c.line("witness found", !r.passed());
  if (r.witness) {
    c.value("x", r.witness->x, Rat(1, 2));
    c.value("T_d(T^u(F))(x)", r.witness->lhs, 0);
    c.value("T^u(T_d(F))(x)", r.witness->rhs, 1);
  }
  return c.finish();
}

inline int reproduce_semigroup(Context& ctx) {
  Checklist c(ctx.out);
  Distortion d1(PiecewiseMonotone::bounded_through({{0, 0}, {Rat(1, 2), Rat(1, 4)}, {1, 1}}));
  Distortion d2 = step_half();
  Distortion d3(PiecewiseMonotone::bounded_through({{0, 0}, {Rat(1, 2), 1}, {1, 1}}));
  Utility u1 = Utility::affine(2, 0);
  Utility u2(PiecewiseMonotone::reals(0, 1, {{0, 0, 0, 0}}));
  TransformWord w{{Distort{d2}, Push{u1}, Distort{d3}, Push{u2}, Distort{d1}}};
  RduForm nf = normal_form(w);
  ctx.out << "  word " << format(w) << "\n";
  ctx.out << "  normal form d = " << format(nf.d.fn()) << "\n";
  ctx.out << "  normal form u = " << format(nf.u.fn()) << "\n";
  auto r = agree_check("semigroup", BlackBoxTransform::of("word", w), BlackBoxTransform::of("nf", nf.word()),
                       default_corpus());
  ctx.out << "  " << r.line() << "\n";
  c.line("word equals T_d o T^u on the corpus", r.passed());
  return c.finish();
}

inline int reproduce_conjugacy_u(Context& ctx) {
  Checklist c(ctx.out);
  Utility u1 = Utility::affine(2, 0);
  Utility u2 = Utility::affine(1, 1);
  Utility u3 = conjugate_utility(u1, u2);
  c.note("u1=2x u2=x+1");
  c.line("u3 = " + format(u3.fn()) + " expected x+2", u3 == Utility::affine(1, 2));
  c.line("u3 o u1 = u1 o u2", compose(u3.fn(), u1.fn()) == compose(u1.fn(), u2.fn()));
  auto r = agree_check("conjugacy-u", then(BlackBoxTransform::push(u3), BlackBoxTransform::push(u1)),
                       then(BlackBoxTransform::push(u1), BlackBoxTransform::push(u2)), default_corpus());
  ctx.out << "  " << r.line() << "\n";
  c.line("T^u3 o T^u1 = T^u1 o T^u2 on the corpus", r.passed());
  return c.finish();
}

inline int reproduce_conjugacy_d(Context& ctx) {
  Checklist c(ctx.out);
  Distortion d(PiecewiseMonotone::bounded_through({{0, 0}, {Rat(1, 2), Rat(1, 4)}, {1, 1}}));
  Distortion d1(PiecewiseMonotone::bounded_through({{0, 0}, {Rat(1, 2), 1}, {1, 1}}));
  Distortion d2 = conjugate_distortion(d, d1);
  c.note("d through (0,0),(1/2,1/4),(1,1) d1=min(2t,1)");
  // By hand: d^{-1}(y) = 2y on [0,1/4], so d2(y) = 2y up to 1/8, then 6y - 1/2 up to 1/4, then 1.
  Distortion expected(PiecewiseMonotone::bounded_through({{0, 0}, {Rat(1, 8), Rat(1, 4)}, {Rat(1, 4), 1}, {1, 1}}));
  c.line("d2 = " + format(d2.fn()) + " expected through (0,0),(1/8,1/4),(1/4,1),(1,1)", d2 == expected);
  c.line("d2 o d = d o d1", compose(d2.fn(), d.fn()) == compose(d.fn(), d1.fn()));
  auto r = agree_check("conjugacy-d", then(BlackBoxTransform::distort(d2), BlackBoxTransform::distort(d)),
                       then(BlackBoxTransform::distort(d), BlackBoxTransform::distort(d1)), default_corpus());
  ctx.out << "  " << r.line() << "\n";
  c.line("T_d2 o T_d = T_d o T_d1 on the corpus", r.passed());
  return c.finish();
}

inline int cmd_reproduce(Context& ctx, const std::vector<std::string>& a) {
  need(a, 1, 1, "reproduce <example1|example2|appendixE|semigroup|conjugacy-u|conjugacy-d>");
  const auto& id = a[0];
  ctx.out << id << "\n";
  if (id == "example1") return reproduce_example1(ctx);
  if (id == "example2") return reproduce_example2(ctx);
  if (id == "appendixE") return reproduce_boundary_witness(ctx);
  if (id == "semigroup") return reproduce_semigroup(ctx);
  if (id == "conjugacy-u") return reproduce_conjugacy_u(ctx);
  if (id == "conjugacy-d") return reproduce_conjugacy_d(ctx);
  throw CLI::ValidationError("unknown example '" + id + "'");
}

inline int cmd_quantile(Context& ctx, const std::vector<std::string>& a) {
  need(a, 3, 3, "quantile <left|right> <level> <dist>");
  Rat t = rat_arg(a[1]);
  Cdf F = dist_arg(ctx, a[2]);
  if (a[0] == "left") ctx.out << left_quantile(F, t) << "\n";
  else if (a[0] == "right") ctx.out << right_quantile(F, t) << "\n";
  else throw CLI::ValidationError("quantile side must be 'left' or 'right'");
  return kOk;
}

inline int cmd_eval(Context& ctx, const std::vector<std::string>& a) {
  need(a, 2, 2, "eval <dist|fn> <x>");
  Rat x = rat_arg(a[1]);
  PiecewiseMonotone f = ctx.spec.has(a[0]) && ctx.spec.kind(a[0]) == Spec::Kind::dist
                            ? ctx.spec.dist(a[0]).body()
                            : fn_arg(ctx, a[0]);
  Triple t = eval3(f, x);
  ctx.out << "left=" << t.left << " at=" << t.at << " right=" << t.right << "\n";
  return kOk;
}

inline int cmd_apply(Context& ctx, const std::vector<std::string>& a) {
  need(a, 2, 2, "apply <transform> <dist>");
  ctx.out << format(transform_arg(ctx, a[0])(dist_arg(ctx, a[1]))) << "\n";
  return kOk;
}

inline int cmd_functional(Context& ctx, const std::vector<std::string>& a) {
  need(a, 3, 4, "functional <eu <u>|du <d>|rdu <d> <u>> <dist>");
  Cdf F = dist_arg(ctx, a.back());
  Rat v;
  if (a[0] == "eu" && a.size() == 3) v = evaluate_functional(EU{Utility(fn_arg(ctx, a[1]))}, F);
  else if (a[0] == "du" && a.size() == 3) v = evaluate_functional(DU{Distortion(fn_arg(ctx, a[1]))}, F);
  else if (a[0] == "rdu" && a.size() == 4)
    v = evaluate_functional(RDU{Distortion(fn_arg(ctx, a[1])), Utility(fn_arg(ctx, a[2]))}, F);
  else throw CLI::ValidationError("usage: functional <eu <u>|du <d>|rdu <d> <u>> <dist>");
  ctx.out << v << "\n";
  return kOk;
}

inline int cmd_risk(Context& ctx, const std::vector<std::string>& a) {
  need(a, 3, 3, "risk <var|es> <level> <dist>");
  Rat level = rat_arg(a[1]);
  Cdf F = dist_arg(ctx, a[2]);
  if (a[0] == "var") ctx.out << risk_measure(VaR{level}, F) << "\n";
  else if (a[0] == "es") ctx.out << risk_measure(ES{level}, F) << "\n";
  else throw CLI::ValidationError("risk measure must be 'var' or 'es'");
  return kOk;
}

inline int cmd_commute(Context& ctx, const std::vector<std::string>& a) {
  need(a, 2, 2, "commute <transform> <transform>");
  return report(ctx, commute_check(transform_arg(ctx, a[0]), transform_arg(ctx, a[1]), ctx.corpus));
}

inline int cmd_monotone(Context& ctx, const std::vector<std::string>& a) {
  need(a, 1, 1, "monotone <transform>");
  return report(ctx, monotone_check(transform_arg(ctx, a[0]), ctx.corpus));
}

inline int cmd_setcommute(Context& ctx, const std::vector<std::string>& a, bool preconditions) {
  need(a, 4, 1000, "setcommute <utilities|distortions> <d> <u> <probe>...");
  RduForm t{Distortion(fn_arg(ctx, a[1])), Utility(fn_arg(ctx, a[2]))};
  SetCommuteOptions opts{preconditions};
  auto print = [&](const auto& rep) {
    ctx.out << rep.forward.line() << "\n" << rep.backward.line() << "\n";
    for (std::size_t i = 0; i < rep.left_partners.size(); ++i) {
      ctx.out << "partner " << a[3 + i] << " left=" << format(rep.left_partners[i].fn())
              << " right=" << format(rep.right_partners[i].fn()) << "\n";
    }
    ctx.out << "symbolic " << (rep.symbolic_ok ? "PASS" : "FAIL") << "\n";
    return rep.passed() ? kOk : kWitness;
  };
  if (a[0] == "utilities") {
    std::vector<Utility> probes;
    for (std::size_t i = 3; i < a.size(); ++i) probes.emplace_back(fn_arg(ctx, a[i]));
    return print(set_commute_utilities(t, probes, ctx.corpus, opts));
  }
  if (a[0] == "distortions") {
    std::vector<Distortion> probes;
    for (std::size_t i = 3; i < a.size(); ++i) probes.emplace_back(fn_arg(ctx, a[i]));
    return print(set_commute_distortions(t, probes, ctx.corpus, opts));
  }
  throw CLI::ValidationError("family must be 'utilities' or 'distortions'");
}

inline int cmd_lsc(Context& ctx, const std::vector<std::string>& a, const std::vector<std::string>& seq,
                   const std::string& limit) {
  need(a, 2, 2, "lsc <transform> <bound> [--sequence d1,d2,... --limit d]");
  auto t = transform_arg(ctx, a[0]);
  Cdf bound = dist_arg(ctx, a[1]);
  std::vector<Cdf> sequence;
  Cdf lim = bernoulli(Rat(1, 2));
  if (seq.empty()) {
    if (!limit.empty()) throw CLI::ValidationError("--limit needs --sequence");
    sequence = bernoulli_approach_sequence(2, 16);
  } else {
    if (limit.empty()) throw CLI::ValidationError("--sequence needs --limit");
    for (const auto& s : seq) sequence.push_back(dist_arg(ctx, s));
    lim = dist_arg(ctx, limit);
  }
  bool violated = lsc_check(t, sequence, lim, bound) == LscVerdict::violated;
  ctx.out << "lsc " << (violated ? "VIOLATED" : "HOLDS") << "\n";
  return violated ? kWitness : kOk;
}

inline int cmd_extract(Context& ctx, const std::vector<std::string>& a) {
  need(a, 3, 1000, "extract <distortion|utility> <transform> <r>...");
  auto t = transform_arg(ctx, a[1]);
  std::vector<Rat> rs;
  for (std::size_t i = 2; i < a.size(); ++i) rs.push_back(rat_arg(a[i]));
  auto print = [&](const auto& ex) {
    for (const auto& [x, y] : ex.samples) ctx.out << "sample " << x << " -> " << y << "\n";
    ctx.out << "recovered " << format(ex.recovered.fn()) << "\n";
    return report(ctx, ex.round_trip);
  };
  if (a[0] == "distortion") return print(extract_distortion(t, rs, ctx.corpus));
  if (a[0] == "utility") return print(extract_utility(t, rs, ctx.corpus));
  throw CLI::ValidationError("extract kind must be 'distortion' or 'utility'");
}

inline int cmd_fuzz(Context& ctx, const std::vector<std::string>& a) {
  need(a, 1, 1, "fuzz <commute|rc-lc|quantile|semigroup|collapse|setcommute-u|setcommute-d|all>");
  using Runner = LawReport (*)(std::uint64_t, std::size_t, const Corpus&);
  const std::vector<std::pair<std::string, Runner>> runners{
      {"commute", fuzz_commutation},
      {"rc-lc", fuzz_rc_lc_commutation},
      {"quantile", fuzz_quantile_identity},
      {"semigroup", [](std::uint64_t s, std::size_t n, const Corpus& c) { return fuzz_semigroup(s, n, c); }},
      {"collapse", fuzz_distortion_collapse},
      {"setcommute-u",
       [](std::uint64_t s, std::size_t n, const Corpus& c) { return fuzz_set_commute_utilities(s, n, c); }},
      {"setcommute-d",
       [](std::uint64_t s, std::size_t n, const Corpus& c) { return fuzz_set_commute_distortions(s, n, c); }},
  };
  int code = kOk;
  bool found = false;
  for (const auto& [name, run] : runners) {
    if (a[0] != "all" && a[0] != name) continue;
    found = true;
    code = std::max(code, report(ctx, run(ctx.seed, ctx.iters, ctx.corpus)));
  }
  if (!found) throw CLI::ValidationError("unknown fuzz target '" + a[0] + "'");
  return code;
}

inline int cmd_normal_form(Context& ctx, const std::vector<std::string>& a) {
  need(a, 1, 1, "normal-form <word>");
  RduForm nf = normal_form(parse_word(a[0], ctx.spec));
  ctx.out << "d = " << format(nf.d.fn()) << "\n";
  ctx.out << "u = " << format(nf.u.fn()) << "\n";
  return kOk;
}

inline Corpus load_corpus(const std::string& which, std::istream& in) {
  if (which == "default") return default_corpus();
  Spec s = parse_spec(read_source(which, in));
  Corpus c;
  for (const auto& n : s.names())
    if (s.kind(n) == Spec::Kind::dist) c.add(n, s.dist(n));
  if (c.size() == 0) throw SpecError("corpus file declares no distributions");
  return c;
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               std::istream& in = std::cin) {
  CLI::App app{"Exact distributional transforms: distortions, utility transforms and their laws", "dtx"};
  app.require_subcommand(1);
  std::string spec_path, corpus_name = "default";
  std::uint64_t seed = 0;
  std::size_t iters = 100, extra = 0;
  bool quiet = false;
  app.add_option("--spec", spec_path, "Declaration file, or - for standard input");
  app.add_option("--corpus", corpus_name, "'default' or a declaration file whose distributions form the corpus");
  app.add_option("--random", extra, "Seeded random distributions added to the corpus");
  app.add_option("--seed", seed, "Base seed for generators");
  app.add_option("--iters", iters, "Fuzz iterations");
  app.add_flag("--quiet", quiet, "Suppress the report; only the exit code is meaningful");

  std::vector<std::string> rest, sequence;
  std::string limit;
  bool no_pre = false;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"quantile", "left|right <level> <dist>"},
      {"eval", "<dist|fn> <x>: left limit, value and right limit"},
      {"apply", "<transform> <dist>"},
      {"functional", "eu <u>|du <d>|rdu <d> <u> <dist>"},
      {"risk", "var|es <level> <dist>"},
      {"commute", "<transform> <transform>"},
      {"setcommute", "utilities|distortions <d> <u> <probe>..."},
      {"monotone", "<transform>"},
      {"lsc", "<transform> <bound>"},
      {"extract", "distortion|utility <transform> <r>..."},
      {"fuzz", "commute|rc-lc|quantile|semigroup|collapse|setcommute-u|setcommute-d|all"},
      {"normal-form", "<word>"},
      {"reproduce", "example1|example2|appendixE|semigroup|conjugacy-u|conjugacy-d"},
  };
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    sub->add_option("args", rest, "Arguments");
    if (std::string(s.name) == "lsc") {
      sub->add_option("--sequence", sequence, "Distributions F_1,...,F_n")->delimiter(',');
      sub->add_option("--limit", limit, "Weak limit of the sequence");
    }
    if (std::string(s.name) == "setcommute")
      sub->add_flag("--no-preconditions", no_pre, "Use generalized inverses when T's components are not invertible");
  }

  // CLI11 splits an argument of the form [a,b] into a list; a leading space
  // hides word literals from that rule and is ignored by the parser.
  std::vector<std::string> reversed;
  for (auto it = args.rbegin(); it != args.rend(); ++it)
    reversed.push_back(!it->empty() && it->front() == '[' ? " " + *it : *it);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  std::ostringstream sink;
  Context ctx{Spec{}, Corpus{}, seed, iters, quiet ? static_cast<std::ostream&>(sink) : out};
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (!spec_path.empty()) ctx.spec = parse_spec(detail::read_source(spec_path, in));
    ctx.corpus = detail::load_corpus(corpus_name, in);
    for (std::size_t i = 0; i < extra; ++i)
      ctx.corpus.add("random#" + std::to_string(i), gen_cdf(derive_seed(seed, 10, i), 3));

    if (cmd == "quantile") return detail::cmd_quantile(ctx, rest);
    if (cmd == "eval") return detail::cmd_eval(ctx, rest);
    if (cmd == "apply") return detail::cmd_apply(ctx, rest);
    if (cmd == "functional") return detail::cmd_functional(ctx, rest);
    if (cmd == "risk") return detail::cmd_risk(ctx, rest);
    if (cmd == "commute") return detail::cmd_commute(ctx, rest);
    if (cmd == "setcommute") return detail::cmd_setcommute(ctx, rest, !no_pre);
    if (cmd == "monotone") return detail::cmd_monotone(ctx, rest);
    if (cmd == "lsc") return detail::cmd_lsc(ctx, rest, sequence, limit);
    if (cmd == "extract") return detail::cmd_extract(ctx, rest);
    if (cmd == "fuzz") return detail::cmd_fuzz(ctx, rest);
    if (cmd == "normal-form") return detail::cmd_normal_form(ctx, rest);
    return detail::cmd_reproduce(ctx, rest);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace dtx::cli
