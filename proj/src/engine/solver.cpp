#include <algorithm>
#include <unordered_map>

#include "lpt/engine.hpp"
#include "lpt/error.hpp"

namespace lpt {

namespace {

// Heap cells. STR points at a FUN cell followed by its arguments; CON is a
// nullary functor; VAR only appears in compiled templates and names a
// clause-local variable slot.
enum class Tag : std::uint8_t { Ref, Int, NegInf, Con, Str, Fun, Var };

struct Cell {
  Tag tag;
  std::uint32_t arity;
  std::int64_t val;
};

constexpr std::int32_t kLeqId = 2;
constexpr std::int32_t kLtId = 3;
constexpr std::int32_t kEqId = 4;

std::uint64_t pred_key(std::int64_t functor, std::uint32_t arity) {
  return (static_cast<std::uint64_t>(functor) << 8) | arity;
}

// Functor table. A query-local table chains to the program's table so that
// constants that only occur in a query do not mutate shared state.
struct Symbols {
  const Symbols* base = nullptr;
  std::vector<std::string> names;
  std::unordered_map<std::string, std::int32_t> ids;

  static Symbols root() {
    Symbols s;
    for (const char* n : {"[]", ".", "$leq", "$lt", "$eq"}) s.intern(n);
    return s;
  }

  std::int32_t offset() const { return base ? base->offset() + static_cast<std::int32_t>(base->names.size()) : 0; }

  std::int32_t intern(const std::string& s) {
    if (base) {
      if (auto id = base->find(s); id >= 0) return id;
    }
    auto [it, fresh] = ids.emplace(s, offset() + static_cast<std::int32_t>(names.size()));
    if (fresh) names.push_back(s);
    return it->second;
  }

  std::int32_t find(const std::string& s) const {
    if (base) {
      if (auto id = base->find(s); id >= 0) return id;
    }
    auto it = ids.find(s);
    return it == ids.end() ? -1 : it->second;
  }

  const std::string& name(std::int64_t id) const {
    std::int32_t off = offset();
    return id < off ? base->name(id) : names[id - off];
  }
};

// A clause or query compiled to position-independent cells. STR values are
// offsets into `cells`; roots hold one cell per literal (head first for
// clauses).
struct Template {
  std::vector<Cell> cells;
  std::vector<Cell> roots;
  std::uint32_t nvars = 0;
  // Principal functor of the first head argument for clause prefiltering;
  // tag Var means "matches anything".
  Cell first_arg{Tag::Var, 0, 0};
};

class TemplateBuilder {
 public:
  explicit TemplateBuilder(Symbols& syms, std::map<Var, std::uint32_t>& vars) : syms_(syms), vars_(vars) {}

  Cell literal(const Literal& l, Template& t) {
    std::int32_t f;
    if (l.is_builtin()) {
      f = l.op() == BuiltinOp::Leq ? kLeqId : l.op() == BuiltinOp::Lt ? kLtId : kEqId;
    } else {
      f = syms_.intern(l.predicate());
    }
    return structure(f, l.args(), t);
  }

  Cell term(const Term& x, Template& t) {
    switch (x.kind()) {
      case TermKind::Variable: {
        auto [it, fresh] = vars_.emplace(x.as_var(), static_cast<std::uint32_t>(vars_.size()));
        return Cell{Tag::Var, 0, it->second};
      }
      case TermKind::Integer: return Cell{Tag::Int, 0, x.value()};
      case TermKind::NegInf: return Cell{Tag::NegInf, 0, 0};
      case TermKind::Compound: break;
    }
    return structure(syms_.intern(x.functor()), x.args(), t);
  }

 private:
  Cell structure(std::int32_t f, const std::vector<Term>& args, Template& t) {
    if (args.empty()) return Cell{Tag::Con, 0, f};
    const auto at = static_cast<std::int64_t>(t.cells.size());
    t.cells.push_back(Cell{Tag::Fun, static_cast<std::uint32_t>(args.size()), f});
    t.cells.resize(t.cells.size() + args.size());
    for (std::size_t i = 0; i < args.size(); ++i) {
      Cell c = term(args[i], t);
      t.cells[at + 1 + i] = c;
    }
    return Cell{Tag::Str, 0, at};
  }

  Symbols& syms_;
  std::map<Var, std::uint32_t>& vars_;
};

Template compile(Symbols& syms, const Literal& head, const std::vector<Literal>& body, bool with_head) {
  Template t;
  std::map<Var, std::uint32_t> vars;
  TemplateBuilder b(syms, vars);
  if (with_head) t.roots.push_back(b.literal(head, t));
  for (const auto& l : body) t.roots.push_back(b.literal(l, t));
  t.nvars = static_cast<std::uint32_t>(vars.size());
  if (with_head && !head.args().empty()) {
    const Cell& root = t.roots[0];
    Cell a = t.cells[root.val + 1];
    if (a.tag == Tag::Str) a = Cell{Tag::Fun, t.cells[a.val].arity, t.cells[a.val].val};
    t.first_arg = a;
  }
  return t;
}

}  // namespace

struct Solver::Impl {
  Symbols syms = Symbols::root();
  std::vector<Template> clauses;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> preds;
};

namespace {

struct Goal {
  Cell lit;
  std::int32_t next;
  std::int32_t parent;
  std::int64_t depth;
};

struct Choice {
  std::int32_t goal;
  std::uint32_t alt;  // index into the predicate's clause list
  std::size_t heap_top;
  std::size_t trail_top;
  std::size_t goals_top;
};

class Machine {
 public:
  Machine(const Solver::Impl& prog, const SolveLimits& limits) : prog_(prog), limits_(limits) {}

  AnswerSet run(const std::vector<Literal>& query) {
    Symbols local;
    local.base = &prog_.syms;
    syms_ = &local;
    std::map<Var, std::uint32_t> vars;
    Template q;
    {
      TemplateBuilder b(local, vars);
      for (const auto& l : query) q.roots.push_back(b.literal(l, q));
      q.nvars = static_cast<std::uint32_t>(vars.size());
    }
    const std::size_t var_base = heap_.size();
    instantiate(q);
    std::vector<Cell> roots = roots_;

    std::int32_t cont = -1;
    for (std::size_t i = roots.size(); i-- > 0;) cont = push_goal(roots[i], cont, -1, 1);

    AnswerSet out;
    solve_loop(cont, [&] {
      Substitution s;
      for (const auto& [v, slot] : vars) {
        Cell c = deref(Cell{Tag::Ref, 0, static_cast<std::int64_t>(var_base + slot)});
        if (c.tag == Tag::Ref && c.val == static_cast<std::int64_t>(var_base + slot)) continue;
        s.insert_raw(v, to_term(c));
      }
      out.answers.push_back(std::move(s));
      return static_cast<std::int64_t>(out.answers.size()) < limits_.max_answers;
    });
    out.steps = steps_;
    out.exhausted = exhausted_;
    return out;
  }

 private:
  std::int32_t push_goal(Cell lit, std::int32_t next, std::int32_t parent, std::int64_t depth) {
    goals_.push_back(Goal{lit, next, parent, depth});
    return static_cast<std::int32_t>(goals_.size() - 1);
  }

  // Copies a template onto the heap; the relocated roots land in roots_.
  void instantiate(const Template& t) {
    const auto var_base = static_cast<std::int64_t>(heap_.size());
    for (std::uint32_t i = 0; i < t.nvars; ++i) heap_.push_back(Cell{Tag::Ref, 0, var_base + i});
    const auto base = static_cast<std::int64_t>(heap_.size());
    auto relocate = [&](Cell c) {
      if (c.tag == Tag::Str) c.val += base;
      else if (c.tag == Tag::Var) c = Cell{Tag::Ref, 0, var_base + c.val};
      return c;
    };
    heap_.reserve(heap_.size() + t.cells.size());
    for (const Cell& c : t.cells) heap_.push_back(relocate(c));
    roots_.clear();
    for (const Cell& c : t.roots) roots_.push_back(relocate(c));
  }

  Cell deref(Cell c) const {
    while (c.tag == Tag::Ref) {
      const Cell& h = heap_[c.val];
      if (h.tag == Tag::Ref && h.val == c.val) return c;
      c = h;
    }
    return c;
  }

  bool occurs(std::int64_t addr, Cell c) const {
    std::vector<Cell> todo{c};
    while (!todo.empty()) {
      Cell x = deref(todo.back());
      todo.pop_back();
      if (x.tag == Tag::Ref) {
        if (x.val == addr) return true;
      } else if (x.tag == Tag::Str) {
        const Cell& f = heap_[x.val];
        for (std::uint32_t i = 1; i <= f.arity; ++i) todo.push_back(heap_[x.val + i]);
      }
    }
    return false;
  }

  void bind(std::int64_t addr, Cell value) {
    heap_[addr] = value;
    trail_.push_back(addr);
  }

  bool unify(Cell a, Cell b) {
    stack_.clear();
    stack_.emplace_back(a, b);
    while (!stack_.empty()) {
      auto [x0, y0] = stack_.back();
      stack_.pop_back();
      Cell x = deref(x0);
      Cell y = deref(y0);
      if (x.tag == Tag::Ref && y.tag == Tag::Ref) {
        if (x.val == y.val) continue;
        // Younger variable points at the older one.
        if (x.val < y.val) bind(y.val, x);
        else bind(x.val, y);
        continue;
      }
      if (x.tag == Tag::Ref || y.tag == Tag::Ref) {
        if (y.tag == Tag::Ref) std::swap(x, y);
        if (y.tag == Tag::Str && occurs(x.val, y)) return false;
        bind(x.val, y);
        continue;
      }
      if (x.tag != y.tag) return false;
      switch (x.tag) {
        case Tag::Int:
        case Tag::Con:
          if (x.val != y.val) return false;
          break;
        case Tag::NegInf: break;
        case Tag::Str: {
          const Cell& fx = heap_[x.val];
          const Cell& fy = heap_[y.val];
          if (fx.val != fy.val || fx.arity != fy.arity) return false;
          for (std::uint32_t i = 1; i <= fx.arity; ++i) stack_.emplace_back(heap_[x.val + i], heap_[y.val + i]);
          break;
        }
        default: return false;
      }
    }
    return true;
  }

  Term to_term(Cell c) const {
    c = deref(c);
    switch (c.tag) {
      case Tag::Ref: return Term::var("_G", static_cast<int>(c.val));
      case Tag::Int: return Term::integer(c.val);
      case Tag::NegInf: return Term::neg_inf();
      case Tag::Con: return Term::atom(syms_->name(c.val));
      case Tag::Str: {
        const Cell& f = heap_[c.val];
        std::vector<Term> args;
        args.reserve(f.arity);
        for (std::uint32_t i = 1; i <= f.arity; ++i) args.push_back(to_term(heap_[c.val + i]));
        return Term::compound(syms_->name(f.val), std::move(args));
      }
      default: return Term::atom("?");
    }
  }

  Literal to_literal(Cell c) const {
    Term t = to_term(c);
    const std::string& f = t.functor();
    if (f == "$leq") return Literal::builtin(BuiltinOp::Leq, t.args()[0], t.args()[1]);
    if (f == "$lt") return Literal::builtin(BuiltinOp::Lt, t.args()[0], t.args()[1]);
    if (f == "$eq") return Literal::builtin(BuiltinOp::Eq, t.args()[0], t.args()[1]);
    return Literal::atom(f, t.args());
  }

  [[noreturn]] void builtin_error(ErrorCode code, const char* what, std::int32_t g) const {
    std::string msg = std::string(what) + ": " + to_string(to_literal(goals_[g].lit));
    for (std::int32_t p = goals_[g].parent; p >= 0; p = goals_[p].parent) {
      msg += "\n  called from " + to_string(to_literal(goals_[p].lit));
    }
    throw Error(code, msg);
  }

  // Evaluates a comparison builtin. Eq is unification.
  bool builtin(std::int64_t f, std::int32_t g) {
    const Cell& s = goals_[g].lit;
    Cell a = heap_[s.val + 1];
    Cell b = heap_[s.val + 2];
    if (f == kEqId) return unify(a, b);
    a = deref(a);
    b = deref(b);
    if (a.tag == Tag::Ref || b.tag == Tag::Ref) builtin_error(ErrorCode::NongroundBuiltin, "nonground builtin", g);
    auto numeric = [](const Cell& c) { return c.tag == Tag::Int || c.tag == Tag::NegInf; };
    if (!numeric(a) || !numeric(b)) builtin_error(ErrorCode::BuiltinType, "non-numeric builtin operand", g);
    // neg_inf is below every integer and equal to itself.
    int cmp;
    if (a.tag == Tag::NegInf) cmp = b.tag == Tag::NegInf ? 0 : -1;
    else if (b.tag == Tag::NegInf) cmp = 1;
    else cmp = a.val < b.val ? -1 : a.val == b.val ? 0 : 1;
    return f == kLeqId ? cmp <= 0 : cmp < 0;
  }

  bool may_match(const Template& t, Cell goal) const {
    if (t.first_arg.tag == Tag::Var) return true;
    Cell a = deref(heap_[goal.val + 1]);
    switch (a.tag) {
      case Tag::Ref: return true;
      case Tag::Str: {
        const Cell& f = heap_[a.val];
        return t.first_arg.tag == Tag::Fun && t.first_arg.val == f.val && t.first_arg.arity == f.arity;
      }
      case Tag::NegInf: return t.first_arg.tag == Tag::NegInf;
      default: return t.first_arg.tag == a.tag && t.first_arg.val == a.val;
    }
  }

  const std::vector<std::uint32_t>* clauses_for(Cell lit) const {
    std::uint64_t key = lit.tag == Tag::Con ? pred_key(lit.val, 0)
                                            : pred_key(heap_[lit.val].val, heap_[lit.val].arity);
    auto it = prog_.preds.find(key);
    return it == prog_.preds.end() ? nullptr : &it->second;
  }

  std::uint32_t next_alt(const std::vector<std::uint32_t>& alts, std::uint32_t from, Cell goal) const {
    if (goal.tag == Tag::Con) return from;
    while (from < alts.size() && !may_match(prog_.clauses[alts[from]], goal)) ++from;
    return from;
  }

  void undo_to(const Choice& c) {
    while (trail_.size() > c.trail_top) {
      std::int64_t a = trail_.back();
      trail_.pop_back();
      heap_[a] = Cell{Tag::Ref, 0, a};
    }
    heap_.resize(c.heap_top);
    goals_.resize(c.goals_top);
  }

  template <class OnAnswer>
  void solve_loop(std::int32_t cont, OnAnswer on_answer) {
    std::int32_t goal = cont;
    std::uint32_t alt = 0;
    bool resuming = false;  // goal was popped from a choicepoint at `alt`
    for (;;) {
      bool fail = false;
      if (goal < 0) {
        if (!on_answer()) return;  // answer limit: exhausted stays false
        fail = true;
      } else if (steps_ >= limits_.max_steps) {
        return;
      } else if (goals_[goal].depth > limits_.max_depth) {
        limit_hit_ = true;
        fail = true;
      } else {
        const Goal g = goals_[goal];
        const Cell lit = g.lit;
        std::int64_t f = lit.tag == Tag::Con ? lit.val : heap_[lit.val].val;
        if (lit.tag == Tag::Str && f >= kLeqId && f <= kEqId && heap_[lit.val].arity == 2) {
          ++steps_;
          if (builtin(f, goal)) {
            goal = g.next;
          } else {
            fail = true;
          }
        } else {
          const auto* alts = clauses_for(lit);
          std::uint32_t i = alts ? next_alt(*alts, resuming ? alt : 0, lit) : 0;
          if (!alts || i >= alts->size()) {
            fail = true;
          } else {
            std::uint32_t j = next_alt(*alts, i + 1, lit);
            if (j < alts->size()) choices_.push_back(Choice{goal, j, heap_.size(), trail_.size(), goals_.size()});
            const Template& t = prog_.clauses[(*alts)[i]];
            instantiate(t);
            if (!unify(roots_[0], lit)) {
              fail = true;
            } else {
              ++steps_;
              std::int32_t next = g.next;
              for (std::size_t k = roots_.size(); k-- > 1;) next = push_goal(roots_[k], next, goal, g.depth + 1);
              goal = next;
            }
          }
        }
      }
      resuming = false;
      if (fail) {
        if (choices_.empty()) {
          exhausted_ = !limit_hit_;
          return;
        }
        Choice c = choices_.back();
        choices_.pop_back();
        undo_to(c);
        goal = c.goal;
        alt = c.alt;
        resuming = true;
      }
    }
  }

  const Solver::Impl& prog_;
  const SolveLimits& limits_;
  const Symbols* syms_ = nullptr;
  std::vector<Cell> heap_;
  std::vector<std::int64_t> trail_;
  std::vector<Goal> goals_;
  std::vector<Choice> choices_;
  std::vector<std::pair<Cell, Cell>> stack_;
  std::vector<Cell> roots_;
  std::int64_t steps_ = 0;
  bool limit_hit_ = false;
  bool exhausted_ = false;
};

}  // namespace

void SolveLimits::validate() const {
  if (max_depth <= 0 || max_steps <= 0 || max_answers <= 0) {
    throw Error(ErrorCode::InvalidArgument, "solve limits must be strictly positive");
  }
}

Solver::Solver(const Program& p) {
  auto impl = std::make_shared<Impl>();
  for (const auto& c : p.clauses()) {
    impl->clauses.push_back(compile(impl->syms, c.head, c.body, true));
    std::int32_t f = impl->syms.intern(c.head.predicate());
    impl->preds[pred_key(f, static_cast<std::uint32_t>(c.head.args().size()))].push_back(
        static_cast<std::uint32_t>(impl->clauses.size() - 1));
  }
  impl_ = std::move(impl);
}

Solver::~Solver() = default;
Solver::Solver(const Solver&) = default;
Solver& Solver::operator=(const Solver&) = default;

AnswerSet Solver::solve(const std::vector<Literal>& query, const SolveLimits& limits) const {
  limits.validate();
  Machine m(*impl_, limits);
  return m.run(query);
}

AnswerSet solve(const Program& p, const std::vector<Literal>& query, const SolveLimits& limits) {
  return Solver(p).solve(query, limits);
}

}  // namespace lpt
