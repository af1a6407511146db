#include "lpt/verify.hpp"

#include <algorithm>
#include <iomanip>
#include <mutex>
#include <sstream>

#include "lpt/error.hpp"
#include "lpt/parallel.hpp"

namespace lpt {

namespace {

std::vector<Var> ordered_vars(const std::vector<const std::vector<Literal>*>& parts) {
  std::vector<Var> all;
  for (const auto* part : parts) {
    for (const auto& l : *part) l.collect_vars(all);
  }
  std::vector<Var> out;
  for (const auto& v : all) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

std::vector<std::int64_t> normalized(std::vector<std::int64_t> domain) {
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  return domain;
}

}  // namespace

LemmaVerdict check_lemma(const Lemma& lemma, const Program& p, const std::vector<std::int64_t>& domain,
                         int max_list_len, const SolveLimits& limits, std::size_t max_counterexamples) {
  lemma.validate();
  for (const auto* part : {&lemma.side_conditions, &lemma.lhs, &lemma.rhs}) {
    for (const auto& l : *part) {
      if (!l.is_builtin() && !p.defines(l.key())) {
        throw Error(ErrorCode::UnknownPredicate, "lemma " + lemma.id + " uses undefined " + l.key().str());
      }
    }
  }
  const auto vars = ordered_vars({&lemma.side_conditions, &lemma.lhs, &lemma.rhs});

  // Variable sorts come from a probe clause that uses them the way the
  // lemma does.
  Program probe = p;
  std::vector<Term> args;
  for (const auto& v : vars) args.push_back(Term::var(v.name, v.index));
  Clause c{probe.fresh_id("$lemma.1"), Literal::atom("$lemma", args), lemma.side_conditions};
  c.body.insert(c.body.end(), lemma.lhs.begin(), lemma.lhs.end());
  c.body.insert(c.body.end(), lemma.rhs.begin(), lemma.rhs.end());
  probe.add(c);
  const auto sorts = infer_sorts(probe).at(c.head.key());

  const auto dom = normalized(domain);
  std::vector<std::vector<Term>> values;
  std::size_t total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    values.push_back(ground_values(sorts[i], dom, max_list_len));
    total *= values.back().size();
  }
  auto instance = [&](std::size_t index) {
    Substitution s;
    for (std::size_t i = vars.size(); i-- > 0;) {
      s.bind(vars[i], values[i][index % values[i].size()]);
      index /= values[i].size();
    }
    return s;
  };

  const Solver solver(p);
  SolveLimits one = limits;
  one.max_answers = 1;
  auto holds = [&](const std::vector<Literal>& query) {
    if (query.empty()) return true;
    AnswerSet a = solver.solve(query, one);
    if (!a.answers.empty()) return true;
    if (!a.exhausted) {
      std::string text;
      for (const auto& l : query) text += (text.empty() ? "" : ", ") + to_string(l);
      throw Error(ErrorCode::LimitExceeded, "lemma " + lemma.id + " instance undecided within limits: " + text);
    }
    return false;
  };
  auto implies = [&](const Substitution& s, const std::vector<Literal>& from, const std::vector<Literal>& to) {
    std::vector<Literal> premise = s.apply(lemma.side_conditions);
    for (const auto& l : from) premise.push_back(s.apply(l));
    return !holds(premise) || holds(s.apply(to));
  };

  std::mutex mu;
  std::set<std::size_t> failing;
  parallel_for(total, [&](std::size_t index) {
    Substitution s = instance(index);
    bool ok = implies(s, lemma.lhs, lemma.rhs);
    if (ok && lemma.kind == LemmaKind::Equivalence) ok = implies(s, lemma.rhs, lemma.lhs);
    if (ok) return;
    std::lock_guard<std::mutex> lock(mu);
    failing.insert(index);
    if (failing.size() > max_counterexamples) failing.erase(std::prev(failing.end()));
  });

  LemmaVerdict out;
  out.instances = total;
  out.holds = failing.empty();
  for (auto i : failing) out.counterexamples.push_back(instance(i));
  return out;
}

ExtensionDiff compare_extensions(const Program& before, const PredicateKey& before_pred, const Program& after,
                                 const PredicateKey& after_pred, const std::vector<std::int64_t>& domain,
                                 int max_list_len, const SolveLimits& limits, const AtomFilter& filter) {
  if (before_pred.arity != after_pred.arity) {
    throw Error(ErrorCode::InvalidArgument, "cannot compare " + before_pred.str() + " with " + after_pred.str());
  }
  auto x = bounded_extension(before, before_pred, domain, max_list_len, limits).atoms;
  auto y = bounded_extension(after, after_pred, domain, max_list_len, limits).atoms;
  std::set<Literal> b;
  std::set<Literal> a;
  for (const auto& atom : x) {
    if (!filter || filter(atom)) b.insert(atom);
  }
  for (const auto& atom : y) {
    Literal as_before = atom.with_predicate(before_pred.name);
    if (!filter || filter(as_before)) a.insert(as_before);
  }
  ExtensionDiff d;
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::inserter(d.missing, d.missing.end()));
  std::set<Literal> extra;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(extra, extra.end()));
  for (const auto& atom : extra) d.extra.insert(atom.with_predicate(after_pred.name));
  if (d.missing.empty() && d.extra.empty()) {
    d.verdict = Verdict::Equal;
  } else if (d.extra.empty()) {
    d.verdict = Verdict::Thinned;
  } else if (d.missing.empty()) {
    d.verdict = Verdict::Widened;
  } else {
    d.verdict = Verdict::Mixed;
  }
  d.imploded = a.empty() && !b.empty();
  return d;
}

ExtensionDiff compare_extensions(const Program& before, const Program& after, const PredicateKey& pred,
                                 const std::vector<std::int64_t>& domain, int max_list_len,
                                 const SolveLimits& limits) {
  return compare_extensions(before, pred, after, pred, domain, max_list_len, limits);
}

StepProfile step_profile(const Program& p, const std::string& pred, const std::vector<int>& sizes,
                         const SolveLimits& limits) {
  if (sizes.empty()) throw Error(ErrorCode::InvalidArgument, "step_profile needs at least one size");
  if (!std::is_sorted(sizes.begin(), sizes.end()) || sizes.front() < 0) {
    throw Error(ErrorCode::InvalidArgument, "profile sizes must be ascending and non-negative");
  }
  if (!p.defines({pred, 2})) throw Error(ErrorCode::UnknownPredicate, pred + "/2 is not defined");
  const Solver solver(p);
  SolveLimits one = limits;
  one.max_answers = 1;
  StepProfile out{pred, {}};
  for (int n : sizes) {
    std::vector<std::int64_t> input;
    for (int k = n; k >= 1; --k) input.push_back(k);
    Literal goal = Literal::atom(pred, {Term::int_list(input), Term::var("X")});
    ProfileRow row{n, 0, 0, false};
    try {
      AnswerSet a = solver.solve({goal}, one);
      row.steps = a.steps;
      row.answers = static_cast<std::int64_t>(a.answers.size());
      row.censored = a.answers.empty() && !a.exhausted;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LimitExceeded) throw;
      row.censored = true;
    }
    out.rows.push_back(row);
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "equal";
    case Verdict::Thinned: return "thinned";
    case Verdict::Widened: return "widened";
    case Verdict::Mixed: return "mixed";
  }
  return "?";
}

std::string to_string(const ExtensionDiff& d) {
  std::ostringstream os;
  os << to_string(d.verdict);
  if (d.imploded) os << " (imploded)";
  auto list = [&](const char* label, const std::set<Literal>& atoms) {
    if (atoms.empty()) return;
    os << "\n  " << label << ":";
    for (const auto& a : atoms) os << " " << to_string(a);
  };
  list("missing", d.missing);
  list("extra", d.extra);
  return os.str();
}

std::string to_table(const StepProfile& profile) {
  std::ostringstream os;
  os << profile.predicate << "\n";
  os << std::setw(4) << "n" << std::setw(14) << "steps" << std::setw(9) << "answers" << "\n";
  for (const auto& r : profile.rows) {
    os << std::setw(4) << r.n << std::setw(14) << r.steps << std::setw(9) << r.answers;
    if (r.censored) os << "  censored";
    os << "\n";
  }
  return os.str();
}

}  // namespace lpt
