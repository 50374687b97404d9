#pragma once

// Terms over {0, 1, ∧, ∨, ¬, s_f}, equations and quasi-equations, and the
// finite-enumeration checkers that decide them on a carrier.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tra/algebra.hpp"

namespace tra {

/// s[i,j]: the transposition [i,j], valid in every dimension > max(i,j).
struct TranspositionSpec {
  Dim i = 0;
  Dim j = 0;
  friend bool operator==(const TranspositionSpec&,
                         const TranspositionSpec&) = default;
};

/// s{a0,...,a(n-1)}: the permutation with this image list.
struct ImagesSpec {
  std::vector<Dim> images;
  friend bool operator==(const ImagesSpec&, const ImagesSpec&) = default;
};

using PermSpec = std::variant<TranspositionSpec, ImagesSpec>;

/// Resolves a spec against dimension n; throws DimensionMismatch.
Perm instantiate(const PermSpec& spec, Dim n);

class Term {
 public:
  enum class Kind { Var, Zero, One, Not, And, Or, Subst };

  static Term var(std::string name);
  static Term zero();
  static Term one();
  static Term negate(Term t);
  static Term conj(Term a, Term b);
  static Term disj(Term a, Term b);
  static Term subst(PermSpec perm, Term t);

  Kind kind() const noexcept { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const PermSpec& perm() const { return node_->perm; }
  const Term& lhs() const { return *node_->lhs; }
  const Term& rhs() const { return *node_->rhs; }
  /// Operand of Not / Subst.
  const Term& operand() const { return *node_->lhs; }

  /// Structural equality.
  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    PermSpec perm;
    std::shared_ptr<const Term> lhs;
    std::shared_ptr<const Term> rhs;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Equation {
  Term lhs;
  Term rhs;
  friend bool operator==(const Equation&, const Equation&) = default;
};

struct QuasiEquation {
  std::vector<Equation> hypotheses;
  Equation conclusion;
  friend bool operator==(const QuasiEquation&, const QuasiEquation&) = default;
};

Term parse_term(std::string_view text);
Equation parse_equation(std::string_view text);
/// `eq (',' eq)* '=>' eq`, or a single `eq` with no hypotheses.
QuasiEquation parse_quasi(std::string_view text);

std::string print_term(const Term& t);
std::string print_equation(const Equation& eq);
std::string print_quasi(const QuasiEquation& qe);

/// Variable names in ascending order.
std::vector<std::string> variables(const Term& t);
std::vector<std::string> variables(const QuasiEquation& qe);

using Assignment = std::map<std::string, Elem>;

Elem eval_term(const Term& t, const CarrierRef& d, const Assignment& env);

/// A term compiled against one carrier: variables resolved to slots and
/// every substitution bound to its precomputed map.
class CompiledTerm {
 public:
  CompiledTerm(const Term& t, const CarrierRef& d,
               const std::vector<std::string>& slots);

  BitVec eval(std::span<const BitVec> values) const;

 private:
  enum class Op : std::uint8_t { Load, Zero, One, Not, And, Or, Subst };
  struct Instr {
    Op op;
    std::uint32_t arg;  // slot index or map index
  };
  void compile(const Term& t, const std::vector<std::string>& slots);

  CarrierRef carrier_;
  std::vector<Instr> code_;
  std::vector<std::shared_ptr<const SubstMap>> maps_;
};

struct Exhaustive {};
struct Sampled {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
};
using CheckMode = std::variant<Exhaustive, Sampled>;

/// Default seed for every sampled mode.
inline constexpr std::uint64_t kDefaultSeed = 20240229;

struct CheckOptions {
  CheckMode mode = Exhaustive{};
  Limits limits{};
  unsigned workers = 1;
};

struct Verdict {
  enum class Outcome { HoldsExhaustive, HoldsSampled, Fails };

  Outcome outcome = Outcome::HoldsExhaustive;
  /// Assignments actually evaluated.
  std::uint64_t assignments_tested = 0;
  /// Present for sampled runs.
  std::optional<Sampled> sampling;
  /// Present iff outcome == Fails; variables in ascending name order.
  std::optional<Assignment> witness;

  bool holds() const noexcept { return outcome != Outcome::Fails; }
};

std::string to_string(Verdict::Outcome o);

Verdict check_equation(const CarrierRef& d, const Equation& eq,
                       const CheckOptions& options = {});
Verdict check_quasi(const CarrierRef& d, const QuasiEquation& qe,
                    const CheckOptions& options = {});

/// Every hypothesis holds under `env` but the conclusion does not.
bool violates(const CarrierRef& d, const QuasiEquation& qe,
              const Assignment& env);

/// s_f x ∨ s_g x = ¬x  =>  0 = 1
QuasiEquation sigma(Dim n, const Perm& f, const Perm& g);

/// Deterministic 64-bit stream (splitmix64) used by every sampled mode.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Uniformly random bit vector of the given length.
BitVec random_bits(SplitMix64& rng, std::size_t nbits);
/// The generator for trial `trial` of a sampled run seeded with `seed`.
SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial);

}  // namespace tra
