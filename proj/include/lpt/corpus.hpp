#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lpt/lemma.hpp"
#include "lpt/term.hpp"

namespace lpt {

struct CorpusLemma {
  Lemma lemma;
  std::string title;
  /// Corpus programs that define the lemma's predicates.
  std::vector<std::string> requires_programs;
};

/// Named programs, lemmas and derivation scripts. Programs list their
/// dependencies in a "% requires: a, b" line; loading one pulls those in
/// after its own clauses.
class Corpus {
 public:
  /// The corpus compiled into the binary.
  static const Corpus& builtin();
  /// Reads programs/*.pl, lemmas/*.json and scripts/*.json under `root`.
  static Corpus from_directory(const std::filesystem::path& root);
  /// Keys are relative paths such as "programs/perm1.pl".
  static Corpus from_files(const std::vector<std::pair<std::string, std::string>>& files);

  std::vector<std::string> program_names() const;
  std::vector<std::string> lemma_names() const;
  std::vector<std::string> script_names() const;

  bool has_program(const std::string& name) const { return programs_.count(name) != 0; }
  /// Throws UnknownEntry.
  const std::string& program_source(const std::string& name) const;
  std::vector<std::string> program_requires(const std::string& name) const;
  /// The program with all its dependencies, named `name`.
  Program program(const std::string& name) const;
  /// Several programs merged; shared dependencies load once.
  Program programs(const std::vector<std::string>& names, const std::string& as) const;

  const CorpusLemma& lemma(const std::string& id) const;
  /// The program a lemma is checked against.
  Program lemma_context(const std::string& id) const;
  std::map<std::string, Lemma> lemmas() const;

  const std::string& script_source(const std::string& name) const;

  /// Writes the corpus back out in the directory layout.
  void export_to(const std::filesystem::path& root) const;

 private:
  std::map<std::string, std::string> programs_;
  std::map<std::string, CorpusLemma> lemmas_;
  std::map<std::string, std::string> lemma_sources_;
  std::map<std::string, std::string> scripts_;
};

Lemma parse_lemma_json(const std::string& text, std::string* title = nullptr,
                       std::vector<std::string>* requires_programs = nullptr);

namespace detail {
const std::vector<std::pair<std::string, std::string>>& embedded_corpus();
}

}  // namespace lpt
