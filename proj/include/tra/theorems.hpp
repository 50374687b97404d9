#pragma once

// Desk-scale verifiers for the structural facts about transposition set
// algebras: relativization is a homomorphism, every full algebra embeds
// subdirectly into a product of small algebras, σ holds in every small
// algebra but fails in a relativized one, and principal ultraproducts
// embed back into a set algebra.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tra/algebra.hpp"
#include "tra/termlang.hpp"

namespace tra {

/// Trials and seed used when an exhaustive request has to fall back to
/// sampling.
inline constexpr std::uint64_t kFallbackTrials = 10000;

struct HomViolation {
  std::string operation;
  Elem x;
  std::optional<Elem> y;
};

struct HomReport {
  CarrierRef source;
  CarrierRef target;
  std::vector<std::string> operations;
  bool exhaustive = true;
  std::optional<Sampled> sampling;
  std::uint64_t elements_tested = 0;
  std::uint64_t pairs_tested = 0;
  std::optional<HomViolation> violation;

  bool passed() const noexcept { return !violation.has_value(); }
};

/// Checks that x -> x ∩ G preserves meet, complement and every S_ij.
/// Exhaustive over all x, y when 4^|E| fits the enumeration budget,
/// otherwise sampled. Throws NotSubCarrier / NotPermutable when the
/// preconditions fail.
HomReport verify_relativization(const CarrierRef& big, const CarrierRef& sub,
                                const CheckOptions& options = {});

struct DecompositionRecord {
  std::optional<Seq> witness;  // the atom's sequence q; absent if D = ∅
  std::vector<Value> range;    // range(q), ascending
  BaseSize k_a = 0;
  std::vector<std::pair<Value, Value>> renaming;
  CarrierRef range_carrier;  // ^n range(q) inside ^n k
  CarrierRef target;         // A_{n,k_a}
  bool image_nonzero = false;
};

struct SeparationReport {
  bool exhaustive = true;
  std::optional<Sampled> sampling;
  std::uint64_t elements = 0;
  std::uint64_t pairs_checked = 0;
  bool separated = true;
  std::optional<std::pair<Elem, Elem>> failure;
  /// The assembled product map preserves meet, complement and S_ij.
  bool homomorphism = true;
  std::optional<std::string> homomorphism_violation;
};

struct Decomposition {
  Dim n = 0;
  BaseSize k = 0;
  CarrierRef carrier;
  std::vector<DecompositionRecord> records;
  SeparationReport separation;

  bool degenerate() const noexcept { return carrier->empty(); }
  bool passed() const noexcept;
};

/// h_a for one record: canonical base renaming after relativizing to
/// ^n range(q).
Elem apply_record(const DecompositionRecord& r, const Elem& x);
/// x -> (h_a(x))_a into the product of the target small algebras.
ProductElem subdirect_image(const Decomposition& d, const Elem& x);

Decomposition decompose_small(Dim n, BaseSize k,
                              const CheckOptions& options = {});

struct SigmaCertificate {
  std::uint64_t constants = 0;
  bool all_fixed = true;
  bool carrier_empty = false;
  bool holds = false;
};

struct SigmaSmallReport {
  Dim n = 0;
  BaseSize k = 0;
  std::vector<std::pair<Perm, Perm>> pairs;
  SigmaCertificate certificate;
  bool brute_force_ran = false;
  std::string note;
  /// First failing pair's verdict, or the last verdict when all hold.
  std::optional<Verdict> brute_force;
  std::optional<std::pair<Perm, Perm>> failing_pair;
  std::uint64_t assignments_tested = 0;

  bool brute_force_holds() const noexcept {
    return brute_force_ran && !failing_pair.has_value();
  }
  bool agree() const noexcept {
    return !brute_force_ran || brute_force_holds() == certificate.holds;
  }
  bool holds() const noexcept { return certificate.holds && agree(); }
};

/// `fg` = nullopt checks every pair of permutations (n <= 5).
SigmaSmallReport sigma_holds_small(
    Dim n, BaseSize k, const std::optional<std::pair<Perm, Perm>>& fg,
    const CheckOptions& options = {});

struct Counterexample {
  Dim n = 0;
  CarrierRef carrier;  // G, over base 2
  Elem x;
  Perm f;
  Perm g;
  QuasiEquation formula;
  Elem image_union;   // S_f X ∪ S_g X
  Elem complement_x;  // ∼X
  Elem even_units;    // {e_i : i even}
  bool permutable = false;
  bool nonempty = false;
  bool union_is_complement = false;
  bool complement_is_even = false;
  Verdict verdict;
  bool x_falsifies = false;
  bool least_witness_is_x = false;

  bool passed() const noexcept {
    return permutable && nonempty && union_is_complement &&
           complement_is_even && !verdict.holds() && x_falsifies;
  }
};

Counterexample build_counterexample(Dim n, const CheckOptions& options = {});

/// G = {e_i : i < n} over base size `base` (>= 2).
CarrierRef unit_vector_carrier(Dim n, BaseSize base = 2);

struct HEscapeReport {
  Dim n = 0;
  CarrierRef full;
  CarrierRef g;
  HomReport hom;
  bool surjective = false;
  std::uint64_t surjectivity_checked = 0;
  SigmaSmallReport sigma_full;
  Verdict sigma_on_g;
  bool variety_closure_fails = false;
};

HEscapeReport verify_h_escape(Dim n, const CheckOptions& options = {});

struct UltraproductReport {
  std::vector<CarrierRef> factors;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::uint64_t elements_checked = 0;
  std::uint64_t pairs_checked = 0;
  std::uint64_t representatives_checked = 0;
  bool well_defined = true;
  bool equals_projection = true;
  bool preserves_meet = true;
  bool preserves_complement = true;
  bool preserves_subst = true;
  bool injective = true;
  std::optional<std::string> first_violation;
  std::string note;

  bool passed() const noexcept {
    return well_defined && equals_projection && preserves_meet &&
           preserves_complement && preserves_subst && injective;
  }
};

/// The ultraproduct map for the principal ultrafilter at `index`, computed
/// from its defining formula on representatives. Factors must be full
/// carriers of one dimension; factors other than `index` need a nonempty
/// base.
UltraproductReport principal_ultraproduct(std::span<const CarrierRef> factors,
                                          std::size_t index,
                                          const CheckOptions& options = {});

}  // namespace tra
