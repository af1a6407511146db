#include <algorithm>
#include <sstream>

#include "lpt/engine.hpp"
#include "lpt/error.hpp"
#include "lpt/parallel.hpp"

namespace lpt {

namespace {

Sort join(Sort a, Sort b) {
  if (a == Sort::Unknown) return b;
  if (b == Sort::Unknown || a == b) return a;
  return Sort::Any;
}

class SortInference {
 public:
  explicit SortInference(const Program& p) : p_(p) {
    for (const auto& c : p.clauses()) {
      declare(c.head);
      for (const auto& l : c.body) declare(l);
    }
  }

  std::map<PredicateKey, std::vector<Sort>> run() {
    std::vector<std::map<Var, Sort>> clause_vars(p_.clauses().size());
    do {
      changed_ = false;
      for (std::size_t k = 0; k < p_.clauses().size(); ++k) {
        const Clause& c = p_.clauses()[k];
        auto& vars = clause_vars[k];
        // Two passes per clause let sorts flow both ways through variables.
        for (int pass = 0; pass < 2; ++pass) {
          visit(c.head, vars);
          for (const auto& l : c.body) visit(l, vars);
        }
      }
    } while (changed_);
    for (auto& [_, sorts] : sorts_) {
      for (auto& s : sorts) {
        if (s == Sort::Unknown) s = Sort::Any;
      }
    }
    return sorts_;
  }

 private:
  void declare(const Literal& l) {
    if (!l.is_builtin()) sorts_.emplace(l.key(), std::vector<Sort>(l.args().size(), Sort::Unknown));
  }

  void update(Sort& slot, Sort s) {
    Sort j = join(slot, s);
    if (j != slot) {
      slot = j;
      changed_ = true;
    }
  }

  void visit(const Literal& l, std::map<Var, Sort>& vars) {
    if (l.is_builtin()) {
      if (l.op() == BuiltinOp::Eq) {
        Sort s = join(term_sort(l.args()[0], vars), term_sort(l.args()[1], vars));
        constrain(l.args()[0], s, vars);
        constrain(l.args()[1], s, vars);
      } else {
        for (const auto& a : l.args()) constrain(a, Sort::Int, vars);
      }
      return;
    }
    auto& slots = sorts_[l.key()];
    for (std::size_t i = 0; i < l.args().size(); ++i) {
      constrain(l.args()[i], slots[i], vars);
      update(slots[i], term_sort(l.args()[i], vars));
    }
  }

  Sort term_sort(const Term& t, std::map<Var, Sort>& vars) const {
    if (t.is_var()) {
      auto it = vars.find(t.as_var());
      return it == vars.end() ? Sort::Unknown : it->second;
    }
    if (t.is_number()) return Sort::Int;
    if (t.is_nil() || t.is_cons()) return Sort::List;
    return Sort::Any;
  }

  void constrain(const Term& t, Sort s, std::map<Var, Sort>& vars) {
    if (t.is_var()) {
      update(vars[t.as_var()], s);
      return;
    }
    if (t.is_cons()) {
      constrain(t.args()[0], Sort::Int, vars);
      constrain(t.args()[1], Sort::List, vars);
    }
  }

  const Program& p_;
  std::map<PredicateKey, std::vector<Sort>> sorts_;
  bool changed_ = false;
};

}  // namespace

std::map<PredicateKey, std::vector<Sort>> infer_sorts(const Program& p) { return SortInference(p).run(); }

std::vector<Term> ground_lists(const std::vector<std::int64_t>& domain, int max_len) {
  std::vector<Term> out{Term::nil()};
  std::vector<std::vector<std::int64_t>> layer{{}};
  for (int len = 1; len <= max_len && !domain.empty(); ++len) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& prefix : layer) {
      for (auto d : domain) {
        auto l = prefix;
        l.push_back(d);
        next.push_back(std::move(l));
      }
    }
    for (const auto& l : next) out.push_back(Term::int_list(l));
    layer = std::move(next);
  }
  return out;
}

std::vector<Term> ground_values(Sort s, const std::vector<std::int64_t>& domain, int max_len) {
  std::vector<Term> out;
  if (s != Sort::List) {
    for (auto d : domain) out.push_back(Term::integer(d));
  }
  if (s != Sort::Int) {
    auto lists = ground_lists(domain, max_len);
    out.insert(out.end(), lists.begin(), lists.end());
  }
  return out;
}

ModelSummary bounded_extension(const Solver& solver, const std::vector<Sort>& sorts, const PredicateKey& pred,
                               const std::vector<std::int64_t>& domain, int max_list_len,
                               const SolveLimits& limits) {
  std::vector<std::int64_t> dom = domain;
  std::sort(dom.begin(), dom.end());
  dom.erase(std::unique(dom.begin(), dom.end()), dom.end());

  std::vector<std::vector<Term>> values;
  std::size_t total = 1;
  for (std::size_t i = 0; i < pred.arity; ++i) {
    values.push_back(ground_values(i < sorts.size() ? sorts[i] : Sort::Any, dom, max_list_len));
    total *= values.back().size();
  }

  SolveLimits one = limits;
  one.max_answers = 1;
  auto query = [&](std::size_t index) {
    std::vector<Term> args(pred.arity, Term::nil());
    for (std::size_t i = pred.arity; i-- > 0;) {
      args[i] = values[i][index % values[i].size()];
      index /= values[i].size();
    }
    return Literal::atom(pred.name, std::move(args));
  };

  std::vector<char> holds(total, 0);
  auto check = [&](std::size_t index) {
    Literal atom = query(index);
    AnswerSet a = solver.solve({atom}, one);
    if (!a.answers.empty()) {
      holds[index] = 1;
    } else if (!a.exhausted) {
      throw Error(ErrorCode::LimitExceeded, "query undecided within limits: " + to_string(atom));
    }
  };

  parallel_for(total, check);

  ModelSummary out{pred, dom, max_list_len, {}};
  for (std::size_t i = 0; i < total; ++i) {
    if (holds[i]) out.atoms.insert(query(i));
  }
  return out;
}

ModelSummary bounded_extension(const Program& p, const PredicateKey& pred, const std::vector<std::int64_t>& domain,
                               int max_list_len, const SolveLimits& limits) {
  auto sorts = infer_sorts(p);
  auto it = sorts.find(pred);
  std::vector<Sort> s = it == sorts.end() ? std::vector<Sort>(pred.arity, Sort::Any) : it->second;
  return bounded_extension(Solver(p), s, pred, domain, max_list_len, limits);
}

std::string to_string(const ModelSummary& m) {
  std::ostringstream os;
  os << m.predicate.str() << " {";
  bool first = true;
  for (const auto& a : m.atoms) {
    os << (first ? "" : ", ") << to_string(a);
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace lpt
