#include "lpt/lemma.hpp"

#include "lpt/error.hpp"

namespace lpt {

void Lemma::validate() const {
  if (lhs.empty()) throw Error(ErrorCode::InvalidArgument, "lemma " + id + " has an empty left-hand side");
  std::set<Var> bound = vars_of(lhs);
  auto side = vars_of(side_conditions);
  bound.insert(side.begin(), side.end());
  for (const auto& v : vars_of(rhs)) {
    if (bound.count(v) == 0) {
      throw Error(ErrorCode::InvalidArgument, "lemma " + id + ": variable " + v.name + " occurs only in the rhs");
    }
  }
}

namespace {

std::string conj(const std::vector<Literal>& ls) {
  if (ls.empty()) return "true";
  std::string out;
  for (const auto& l : ls) out += (out.empty() ? "" : ", ") + to_string(l);
  return out;
}

}  // namespace

std::string to_string(LemmaKind k) { return k == LemmaKind::Equivalence ? "equivalence" : "implication"; }

std::string to_string(const Lemma& l) {
  std::string out = l.id + ": ";
  if (!l.side_conditions.empty()) out += conj(l.side_conditions) + " => ";
  out += "(" + conj(l.lhs) + (l.kind == LemmaKind::Equivalence ? " <=> " : " => ") + conj(l.rhs) + ")";
  return out;
}

}  // namespace lpt
