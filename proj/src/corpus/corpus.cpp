#include "lpt/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lpt/error.hpp"
#include "lpt/parser.hpp"

namespace lpt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::pair<std::string, std::string> split_key(const std::string& key) {
  const auto slash = key.find('/');
  const auto dot = key.rfind('.');
  if (slash == std::string::npos || dot == std::string::npos || dot < slash) return {};
  return {key.substr(0, slash), key.substr(slash + 1, dot - slash - 1)};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnknownEntry, "cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

template <class M>
const typename M::mapped_type& find_entry(const M& m, const std::string& name, const char* what) {
  auto it = m.find(name);
  if (it == m.end()) throw Error(ErrorCode::UnknownEntry, std::string("no corpus ") + what + " named '" + name + "'");
  return it->second;
}

template <class M>
std::vector<std::string> names_of(const M& m) {
  std::vector<std::string> out;
  for (const auto& [k, _] : m) out.push_back(k);
  return out;
}

}  // namespace

Lemma parse_lemma_json(const std::string& text, std::string* title, std::vector<std::string>* requires_programs) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("lemma is not valid JSON: ") + e.what());
  }
  auto conj = [&](const char* field) {
    std::string s = j.value(field, "");
    return trim(s).empty() ? std::vector<Literal>{} : parse_conjunction(s);
  };
  Lemma l;
  l.id = j.value("id", "");
  if (l.id.empty()) throw Error(ErrorCode::InvalidArgument, "lemma without an id");
  const std::string kind = j.value("kind", "implication");
  if (kind == "equivalence") {
    l.kind = LemmaKind::Equivalence;
  } else if (kind == "implication") {
    l.kind = LemmaKind::Implication;
  } else {
    throw Error(ErrorCode::InvalidArgument, "lemma " + l.id + ": unknown kind '" + kind + "'");
  }
  l.side_conditions = conj("side");
  l.lhs = conj("lhs");
  l.rhs = conj("rhs");
  l.validate();
  if (title) *title = j.value("title", l.id);
  if (requires_programs) *requires_programs = j.value("requires", std::vector<std::string>{});
  return l;
}

const Corpus& Corpus::builtin() {
  static const Corpus c = from_files(detail::embedded_corpus());
  return c;
}

Corpus Corpus::from_files(const std::vector<std::pair<std::string, std::string>>& files) {
  Corpus c;
  for (const auto& [key, text] : files) {
    auto [dir, name] = split_key(key);
    if (dir == "programs") {
      c.programs_[name] = text;
    } else if (dir == "lemmas") {
      CorpusLemma cl;
      cl.lemma = parse_lemma_json(text, &cl.title, &cl.requires_programs);
      c.lemma_sources_[cl.lemma.id] = text;
      c.lemmas_[cl.lemma.id] = std::move(cl);
    } else if (dir == "scripts") {
      c.scripts_[name] = text;
    }
  }
  return c;
}

Corpus Corpus::from_directory(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root)) {
    throw Error(ErrorCode::UnknownEntry, "corpus directory " + root.string() + " not found");
  }
  std::vector<std::pair<std::string, std::string>> files;
  for (const char* dir : {"programs", "lemmas", "scripts"}) {
    if (!std::filesystem::is_directory(root / dir)) continue;
    for (const auto& e : std::filesystem::directory_iterator(root / dir)) {
      const auto ext = e.path().extension().string();
      if (e.is_regular_file() && (ext == ".pl" || ext == ".json")) {
        files.emplace_back(std::string(dir) + "/" + e.path().filename().string(), read_file(e.path()));
      }
    }
  }
  std::sort(files.begin(), files.end());
  return from_files(files);
}

std::vector<std::string> Corpus::program_names() const { return names_of(programs_); }
std::vector<std::string> Corpus::lemma_names() const { return names_of(lemmas_); }
std::vector<std::string> Corpus::script_names() const { return names_of(scripts_); }

const std::string& Corpus::program_source(const std::string& name) const {
  return find_entry(programs_, name, "program");
}

std::vector<std::string> Corpus::program_requires(const std::string& name) const {
  std::istringstream in(program_source(name));
  std::string line;
  std::vector<std::string> out;
  while (std::getline(in, line)) {
    line = trim(line);
    const std::string tag = "% requires:";
    if (line.rfind(tag, 0) != 0) continue;
    std::istringstream items(line.substr(tag.size()));
    std::string item;
    while (std::getline(items, item, ',')) {
      if (!trim(item).empty()) out.push_back(trim(item));
    }
  }
  return out;
}

Program Corpus::programs(const std::vector<std::string>& names, const std::string& as) const {
  std::vector<std::string> order;
  std::set<std::string> seen;
  std::set<std::string> active;
  auto visit = [&](auto&& self, const std::string& n) -> void {
    if (seen.count(n) != 0) return;
    if (!active.insert(n).second) throw Error(ErrorCode::InvalidArgument, "cyclic requires through " + n);
    (void)program_source(n);
    seen.insert(n);
    order.push_back(n);
    for (const auto& dep : program_requires(n)) self(self, dep);
    active.erase(n);
  };
  for (const auto& n : names) visit(visit, n);
  std::string text;
  for (const auto& n : order) text += program_source(n) + "\n";
  return parse_program(text, as);
}

Program Corpus::program(const std::string& name) const { return programs({name}, name); }

const CorpusLemma& Corpus::lemma(const std::string& id) const {
  auto it = lemmas_.find(id);
  if (it == lemmas_.end()) throw Error(ErrorCode::UnknownLemma, "no lemma named '" + id + "'");
  return it->second;
}

Program Corpus::lemma_context(const std::string& id) const {
  return programs(lemma(id).requires_programs, "lemma:" + id);
}

std::map<std::string, Lemma> Corpus::lemmas() const {
  std::map<std::string, Lemma> out;
  for (const auto& [id, cl] : lemmas_) out[id] = cl.lemma;
  return out;
}

const std::string& Corpus::script_source(const std::string& name) const {
  return find_entry(scripts_, name, "script");
}

void Corpus::export_to(const std::filesystem::path& root) const {
  auto write = [&](const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + p.string());
    out << text;
  };
  for (const auto& [name, text] : programs_) write(root / "programs" / (name + ".pl"), text);
  for (const auto& [id, text] : lemma_sources_) write(root / "lemmas" / (id + ".json"), text);
  for (const auto& [name, text] : scripts_) write(root / "scripts" / (name + ".json"), text);
}

}  // namespace lpt
