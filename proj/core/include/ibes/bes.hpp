#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ibes/extensions.hpp"
#include "ibes/formula.hpp"
#include "ibes/rules.hpp"

namespace ibes {

// Sandqvist reads disjunction and bot through base extensions and atoms;
// KripkeDisjunction keeps his implication and conjunction clauses but makes
// disjunction pointwise and bot constantly false.
enum class SemanticsMode { Sandqvist, KripkeDisjunction };

enum class BesEngine { BruteForce, ProverBacked };

struct ValidityConfig {
  Universe universe;
  EnumerationBounds bounds;
  SemanticsMode mode = SemanticsMode::Sandqvist;
  BesEngine engine = BesEngine::BruteForce;
};

struct ValidityWitness {
  Base extension;
  std::optional<Atom> atom;
  std::optional<Formula> formula;
  std::string clause;
};

struct ValidityReport {
  bool verdict = false;
  SemanticsMode mode = SemanticsMode::Sandqvist;
  BesEngine engine = BesEngine::BruteForce;
  Universe universe;
  EnumerationBounds bounds;
  std::optional<ValidityWitness> witness;
  std::uint64_t extensions_examined = 0;
};

// Brute-force clause evaluation over one fixed extension family: all bases
// between the root and the bound. Every "for every C extending B" in the
// clauses ranges over the family members above B, so the judgment is always
// relative to (universe, bounds) and the reports say so.
class BesEvaluator {
 public:
  BesEvaluator(Base root, ValidityConfig cfg);

  const std::vector<Base>& family() const { return family_; }
  const ValidityConfig& config() const { return cfg_; }
  int root_index() const { return 0; }

  bool valid_at(int base_idx, const Formula& phi);
  bool entails_at(int base_idx, const FormulaSet& theta, const Formula& phi);

  // Validity of phi at every family member, indexed like family().
  const std::vector<char>& column(const Formula& phi);

  // Bases in the family extending base_idx (including itself), ascending.
  const std::vector<int>& supersets(int base_idx) const;

  std::optional<ValidityWitness> explain_invalid(int base_idx, const Formula& phi);
  std::optional<ValidityWitness> explain_non_entailment(int base_idx,
                                                        const FormulaSet& theta,
                                                        const Formula& phi);

 private:
  const std::vector<char>& atom_column(int atom_idx);
  std::vector<char> entailment_column(const Formula& theta, int atom_idx);

  ValidityConfig cfg_;
  std::vector<Base> family_;
  std::vector<std::vector<int>> supersets_;
  std::vector<std::uint32_t> derivable_atoms_;  // bit i: atom i derivable, no hyps
  std::map<std::string, std::vector<char>> columns_;  // keyed by rendered formula
};

// Definition-style entry points. BruteForce evaluates the clauses over the
// family rooted at the given base (or the empty base for `valid`);
// ProverBacked answers by the decision procedure, which Sandqvist's
// soundness and completeness theorems justify for the empty-base judgment
// in Sandqvist mode only.
ValidityReport valid_in_base(const Base& base, const Formula& phi,
                             const ValidityConfig& cfg);
ValidityReport entails_in_base(const Base& base, const FormulaSet& theta,
                               const Formula& phi, const ValidityConfig& cfg);
ValidityReport valid(const FormulaSet& gamma, const Formula& phi,
                     const ValidityConfig& cfg);

// The consequence relation generated from a validity: gamma yields phi iff
// validity of every member of gamma implies validity of phi, where validity
// of psi is oracle(empty, psi).
using SequentOracle = std::function<bool(const FormulaSet&, const Formula&)>;
bool consequence_from_validity(const SequentOracle& oracle, const FormulaSet& gamma,
                               const Formula& phi);

}  // namespace ibes
