#include "tra/theorems.hpp"

#include <algorithm>

#include "parallel.hpp"
#include "tra/error.hpp"

namespace tra {

namespace {

std::string op_name(const Perm& t) {
  Dim i = 0;
  while (i < t.dim() && t(i) == i) ++i;
  return "s[" + std::to_string(i) + "," + std::to_string(t(i)) + "]";
}

// Sampling parameters for a request that is either explicitly sampled or
// an exhaustive request over budget.
Sampled sampling_for(const CheckOptions& options) {
  if (const auto* s = std::get_if<Sampled>(&options.mode)) return *s;
  return Sampled{kFallbackTrials, kDefaultSeed};
}

bool fits_budget(std::uint64_t bits, const Limits& limits) {
  return bits < 63 && (std::uint64_t{1} << bits) <= limits.enumeration_budget;
}

std::uint64_t low_mask(std::size_t m) {
  return m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Relativization

HomReport verify_relativization(const CarrierRef& big, const CarrierRef& sub,
                                const CheckOptions& options) {
  if (!sub->is_subcarrier_of(*big)) {
    throw Error(ErrorCode::NotSubCarrier,
                "G is not a sub-carrier of E (dimension, base size or members "
                "differ)");
  }
  if (!sub->is_permutable()) {
    throw Error(ErrorCode::NotPermutable, "G is not permutable");
  }
  const auto embed = embedding_positions(*sub, *big);
  const auto transpositions = all_transpositions(big->dim());
  std::vector<std::shared_ptr<const SubstMap>> big_maps;
  std::vector<std::shared_ptr<const SubstMap>> sub_maps;
  for (const Perm& t : transpositions) {
    big_maps.push_back(big->subst_map(t));
    sub_maps.push_back(sub->subst_map(t));
  }

  HomReport report;
  report.source = big;
  report.target = sub;
  report.operations = {"meet", "complement"};
  for (const Perm& t : transpositions) report.operations.push_back(op_name(t));

  // Name of the first operation that h fails to preserve at x, if any.
  auto unary_violation = [&](const BitVec& x) -> std::optional<std::string> {
    const BitVec hx = relativize_bits(x, embed);
    if (relativize_bits(~x, embed) != ~hx) return "complement";
    for (std::size_t t = 0; t < transpositions.size(); ++t) {
      if (relativize_bits(apply_subst(*big_maps[t], x), embed) !=
          apply_subst(*sub_maps[t], hx)) {
        return op_name(transpositions[t]);
      }
    }
    return std::nullopt;
  };
  auto meet_violated = [&](const BitVec& x, const BitVec& y) {
    return relativize_bits(x & y, embed) !=
           (relativize_bits(x, embed) & relativize_bits(y, embed));
  };

  const std::size_t m = big->size();
  const bool exhaustive = std::holds_alternative<Exhaustive>(options.mode) &&
                          fits_budget(2 * static_cast<std::uint64_t>(m),
                                      options.limits);
  if (exhaustive) {
    const std::uint64_t count = std::uint64_t{1} << m;
    report.elements_tested = count;
    report.pairs_tested = count * count;
    auto elem = [&](std::uint64_t w) { return BitVec::from_word(m, w); };
    if (auto hit = detail::find_first(count, options.workers, [&](std::uint64_t w) {
          return unary_violation(elem(w)).has_value();
        })) {
      report.violation = HomViolation{*unary_violation(elem(*hit)),
                                      Elem(big, elem(*hit)), std::nullopt};
      return report;
    }
    if (auto hit = detail::find_first(
            count * count, options.workers, [&](std::uint64_t i) {
              return meet_violated(elem(i >> m), elem(i & low_mask(m)));
            })) {
      report.violation = HomViolation{"meet", Elem(big, elem(*hit >> m)),
                                      Elem(big, elem(*hit & low_mask(m)))};
    }
    return report;
  }

  const Sampled sampling = sampling_for(options);
  report.exhaustive = false;
  report.sampling = sampling;
  report.elements_tested = sampling.trials;
  report.pairs_tested = sampling.trials;
  auto draw = [&](std::uint64_t t) {
    SplitMix64 rng = trial_stream(sampling.seed, t);
    BitVec x = random_bits(rng, m);
    BitVec y = random_bits(rng, m);
    return std::pair{std::move(x), std::move(y)};
  };
  if (auto hit = detail::find_first(
          sampling.trials, options.workers, [&](std::uint64_t t) {
            auto [x, y] = draw(t);
            return unary_violation(x).has_value() || meet_violated(x, y);
          })) {
    auto [x, y] = draw(*hit);
    if (auto op = unary_violation(x)) {
      report.violation = HomViolation{*op, Elem(big, x), std::nullopt};
    } else {
      report.violation = HomViolation{"meet", Elem(big, x), Elem(big, y)};
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Subdirect decomposition into small algebras

bool Decomposition::passed() const noexcept {
  for (const auto& r : records) {
    if (!r.image_nonzero || r.k_a > n) return false;
  }
  return separation.separated && separation.homomorphism;
}

Elem apply_record(const DecompositionRecord& r, const Elem& x) {
  return rebase(relativize(x, r.range_carrier), r.target, r.renaming);
}

ProductElem subdirect_image(const Decomposition& d, const Elem& x) {
  ProductElem out;
  out.components.reserve(d.records.size());
  for (const auto& r : d.records) out.components.push_back(apply_record(r, x));
  return out;
}

namespace {

DecompositionRecord record_for_atom(const CarrierRef& carrier, const Seq& q,
                                    const Limits& limits) {
  DecompositionRecord r;
  r.witness = q;
  r.range = q.entries;
  std::sort(r.range.begin(), r.range.end());
  r.range.erase(std::unique(r.range.begin(), r.range.end()), r.range.end());
  r.k_a = static_cast<BaseSize>(r.range.size());

  const Dim n = carrier->dim();
  const std::uint64_t count = space_size(n, r.k_a);
  std::vector<std::uint64_t> ranks;
  ranks.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Seq s = unrank(SpaceRank{i}, n, r.k_a);
    for (Value& v : s.entries) v = r.range[v];
    ranks.push_back(rank(s, carrier->base()).value);
  }
  r.range_carrier =
      Carrier::from_ranks(n, carrier->base(), std::move(ranks), limits);
  CanonicalBase canon = canonicalize_base(r.range_carrier);
  r.renaming = std::move(canon.renaming);
  r.target = Carrier::full(n, r.k_a, limits);
  if (!canon.carrier->same_structure(*r.target)) {
    throw Error(ErrorCode::InvalidArgument,
                "canonical base of ^n range(q) is not a small algebra");
  }
  r.image_nonzero = !is_zero(apply_record(r, atom(carrier, q)));
  return r;
}

void separate_exhaustive(const Decomposition& d, const CheckOptions& options,
                         SeparationReport& sep) {
  const CarrierRef& carrier = d.carrier;
  const std::size_t m = carrier->size();
  const std::uint64_t count = std::uint64_t{1} << m;
  const std::uint64_t mask = low_mask(m);
  sep.elements = count;

  // images[x][a] = h_a(x)
  std::vector<std::vector<BitVec>> images(count);
  for (std::uint64_t w = 0; w < count; ++w) {
    const Elem x = elem_from_word(carrier, w);
    for (const auto& r : d.records) {
      images[w].push_back(apply_record(r, x).bits());
    }
  }

  if (auto hit = detail::find_first(
          count * count, options.workers, [&](std::uint64_t i) {
            const std::uint64_t x = i >> m;
            const std::uint64_t y = i & mask;
            return x != y && images[x] == images[y];
          })) {
    sep.separated = false;
    sep.failure.emplace(elem_from_word(carrier, *hit >> m),
                        elem_from_word(carrier, *hit & mask));
  }
  sep.pairs_checked = count * (count - 1);

  const auto transpositions = all_transpositions(d.n);
  std::vector<std::shared_ptr<const SubstMap>> source_maps;
  std::vector<std::vector<std::shared_ptr<const SubstMap>>> target_maps;
  for (const Perm& t : transpositions) {
    source_maps.push_back(carrier->subst_map(t));
    std::vector<std::shared_ptr<const SubstMap>> per_record;
    for (const auto& r : d.records) per_record.push_back(r.target->subst_map(t));
    target_maps.push_back(std::move(per_record));
  }
  auto word_of = [](const BitVec& b) { return b.num_words() ? b.words()[0] : 0; };

  for (std::uint64_t x = 0; x < count && sep.homomorphism; ++x) {
    const BitVec bx = BitVec::from_word(m, x);
    for (std::size_t a = 0; a < d.records.size(); ++a) {
      if (images[~x & mask][a] != ~BitVec(images[x][a])) {
        sep.homomorphism = false;
        sep.homomorphism_violation = "complement at " + to_string(Elem(carrier, bx));
        break;
      }
      for (std::size_t t = 0; t < transpositions.size(); ++t) {
        const std::uint64_t sx = word_of(apply_subst(*source_maps[t], bx));
        if (images[sx][a] != apply_subst(*target_maps[t][a], images[x][a])) {
          sep.homomorphism = false;
          sep.homomorphism_violation = op_name(transpositions[t]) + " at " +
                                       to_string(Elem(carrier, bx));
          break;
        }
      }
      if (!sep.homomorphism) break;
    }
  }
  if (!sep.homomorphism) return;
  if (auto hit = detail::find_first(
          count * count, options.workers, [&](std::uint64_t i) {
            const std::uint64_t x = i >> m;
            const std::uint64_t y = i & mask;
            for (std::size_t a = 0; a < d.records.size(); ++a) {
              if (images[x & y][a] != (images[x][a] & images[y][a])) return true;
            }
            return false;
          })) {
    sep.homomorphism = false;
    sep.homomorphism_violation =
        "meet at " + to_string(elem_from_word(carrier, *hit >> m)) + ", " +
        to_string(elem_from_word(carrier, *hit & mask));
  }
}

void separate_sampled(const Decomposition& d, const Sampled& sampling,
                      SeparationReport& sep) {
  const CarrierRef& carrier = d.carrier;
  const auto transpositions = all_transpositions(d.n);
  sep.exhaustive = false;
  sep.sampling = sampling;
  sep.elements = 2 * sampling.trials;
  for (std::uint64_t t = 0; t < sampling.trials; ++t) {
    SplitMix64 rng = trial_stream(sampling.seed, t);
    const Elem x(carrier, random_bits(rng, carrier->size()));
    const Elem y(carrier, random_bits(rng, carrier->size()));
    const ProductElem hx = subdirect_image(d, x);
    const ProductElem hy = subdirect_image(d, y);
    if (x != y) {
      ++sep.pairs_checked;
      if (hx == hy && sep.separated) {
        sep.separated = false;
        sep.failure.emplace(x, y);
      }
    }
    if (!sep.homomorphism) continue;
    if (subdirect_image(d, meet(x, y)) != p_meet(hx, hy)) {
      sep.homomorphism = false;
      sep.homomorphism_violation = "meet at " + to_string(x) + ", " + to_string(y);
    } else if (subdirect_image(d, complement(x)) != p_complement(hx)) {
      sep.homomorphism = false;
      sep.homomorphism_violation = "complement at " + to_string(x);
    } else {
      for (const Perm& f : transpositions) {
        if (subdirect_image(d, subst(f, x)) != p_subst(f, hx)) {
          sep.homomorphism = false;
          sep.homomorphism_violation = op_name(f) + " at " + to_string(x);
          break;
        }
      }
    }
  }
}

}  // namespace

Decomposition decompose_small(Dim n, BaseSize k, const CheckOptions& options) {
  Decomposition d;
  d.n = n;
  d.k = k;
  d.carrier = Carrier::full(n, k, options.limits);

  if (d.carrier->empty()) {
    // ℘(∅) is the one-element algebra A_n0.
    DecompositionRecord r;
    r.range_carrier = d.carrier;
    r.target = Carrier::full(n, 0, options.limits);
    r.image_nonzero = true;
    d.records.push_back(std::move(r));
  } else {
    for (std::size_t p = 0; p < d.carrier->size(); ++p) {
      d.records.push_back(
          record_for_atom(d.carrier, d.carrier->member(p), options.limits));
    }
  }

  const std::size_t m = d.carrier->size();
  if (std::holds_alternative<Exhaustive>(options.mode) &&
      fits_budget(2 * static_cast<std::uint64_t>(m), options.limits)) {
    separate_exhaustive(d, options, d.separation);
  } else {
    separate_sampled(d, sampling_for(options), d.separation);
  }
  return d;
}

// ---------------------------------------------------------------------------
// σ in the small algebras

SigmaSmallReport sigma_holds_small(
    Dim n, BaseSize k, const std::optional<std::pair<Perm, Perm>>& fg,
    const CheckOptions& options) {
  SigmaSmallReport report;
  report.n = n;
  report.k = k;
  const CarrierRef carrier = Carrier::full(n, k, options.limits);

  if (fg) {
    if (fg->first.dim() != n || fg->second.dim() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "sigma permutations must have dimension " + std::to_string(n));
    }
    report.pairs.push_back(*fg);
  } else {
    if (n > 5) {
      throw Error(ErrorCode::InvalidArgument,
                  "all permutation pairs are only enumerated for n <= 5");
    }
    const auto perms = all_perms(n);
    for (const Perm& f : perms) {
      for (const Perm& g : perms) report.pairs.emplace_back(f, g);
    }
  }

  // Certificate: constant sequences are fixed by every permutation, so a
  // constant q lies in X iff it lies in S_f X ∪ S_g X, and the hypothesis
  // S_f X ∪ S_g X = ∼X can never hold on a nonempty carrier.
  SigmaCertificate& cert = report.certificate;
  cert.carrier_empty = carrier->empty();
  std::vector<Seq> constants;
  if (n == 0) {
    if (!carrier->empty()) constants.push_back(Seq{});
  } else {
    for (Value v = 0; v < k; ++v) constants.push_back(constant_seq(n, v));
  }
  cert.constants = constants.size();
  for (const Seq& q : constants) {
    for (const auto& [f, g] : report.pairs) {
      if (compose_right(q, f) != q || compose_right(q, g) != q) {
        cert.all_fixed = false;
      }
    }
  }
  cert.holds = cert.carrier_empty || (cert.constants > 0 && cert.all_fixed);

  const std::size_t m = carrier->size();
  if (std::holds_alternative<Exhaustive>(options.mode) &&
      !fits_budget(m, options.limits)) {
    report.note = "exhaustive enumeration of 2^" + std::to_string(m) +
                  " elements exceeds the budget; certificate only";
    return report;
  }
  report.brute_force_ran = true;
  for (const auto& [f, g] : report.pairs) {
    Verdict v = check_quasi(carrier, sigma(n, f, g), options);
    report.assignments_tested += v.assignments_tested;
    const bool failed = !v.holds();
    report.brute_force = std::move(v);
    if (failed) {
      report.failing_pair.emplace(f, g);
      break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// The counterexample: σ fails in ℘(G) for G the unit vectors

CarrierRef unit_vector_carrier(Dim n, BaseSize base) {
  if (base < 2) {
    throw Error(ErrorCode::InvalidArgument, "unit vectors need base size >= 2");
  }
  std::vector<Seq> seqs;
  for (Dim i = 0; i < n; ++i) seqs.push_back(unit_seq(n, i));
  return Carrier::from_seqs(n, base, seqs);
}

Counterexample build_counterexample(Dim n, const CheckOptions& options) {
  if (n < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "the counterexample needs dimension n >= 2");
  }
  const CarrierRef g_carrier = unit_vector_carrier(n, 2);
  std::vector<Seq> odd;
  std::vector<Seq> even;
  for (Dim i = 0; i < n; ++i) (i % 2 ? odd : even).push_back(unit_seq(n, i));
  const Elem x = elem_from_seqs(g_carrier, odd);
  const Perm f = forward_cycle(n);
  const Perm g = backward_cycle(n);
  QuasiEquation formula = sigma(n, f, g);
  const Elem image_union = join(subst(f, x), subst(g, x));
  const Elem complement_x = complement(x);
  const Elem even_units = elem_from_seqs(g_carrier, even);

  CheckOptions exhaustive = options;
  exhaustive.mode = Exhaustive{};
  Verdict verdict = check_quasi(g_carrier, formula, exhaustive);
  const bool x_falsifies = violates(g_carrier, formula, {{"x", x}});
  const bool least_is_x = verdict.witness && verdict.witness->at("x") == x;

  return Counterexample{
      .n = n,
      .carrier = g_carrier,
      .x = x,
      .f = f,
      .g = g,
      .formula = std::move(formula),
      .image_union = image_union,
      .complement_x = complement_x,
      .even_units = even_units,
      .permutable = g_carrier->is_permutable(),
      .nonempty = !g_carrier->empty(),
      .union_is_complement = image_union == complement_x,
      .complement_is_even = complement_x == even_units,
      .verdict = std::move(verdict),
      .x_falsifies = x_falsifies,
      .least_witness_is_x = least_is_x,
  };
}

HEscapeReport verify_h_escape(Dim n, const CheckOptions& options) {
  if (n < 2) {
    throw Error(ErrorCode::InvalidArgument, "h-escape needs dimension n >= 2");
  }
  HEscapeReport report;
  report.n = n;
  report.full = Carrier::full(n, n, options.limits);
  // G re-based into base size n; {0,1} -> {0,1} is already order-preserving.
  report.g = unit_vector_carrier(n, n);
  report.hom = verify_relativization(report.full, report.g, options);

  const auto embed = embedding_positions(*report.g, *report.full);
  const std::uint64_t count = std::uint64_t{1} << report.g->size();
  report.surjective = true;
  for (std::uint64_t w = 0; w < count; ++w) {
    const Elem y = elem_from_word(report.g, w);
    BitVec lifted(report.full->size());
    y.bits().for_each_set([&](std::size_t p) { lifted.set(embed[p]); });
    if (relativize(Elem(report.full, lifted), report.g) != y) {
      report.surjective = false;
      break;
    }
  }
  report.surjectivity_checked = count;

  const Perm f = forward_cycle(n);
  const Perm g = backward_cycle(n);
  report.sigma_full = sigma_holds_small(n, n, std::pair{f, g}, options);
  CheckOptions exhaustive = options;
  exhaustive.mode = Exhaustive{};
  report.sigma_on_g = check_quasi(report.g, sigma(n, f, g), exhaustive);
  report.variety_closure_fails = report.hom.passed() && report.surjective &&
                                 report.sigma_full.holds() &&
                                 !report.sigma_on_g.holds();
  return report;
}

// ---------------------------------------------------------------------------
// Principal ultraproducts

UltraproductReport principal_ultraproduct(std::span<const CarrierRef> factors,
                                          std::size_t index,
                                          const CheckOptions& options) {
  if (factors.empty()) {
    throw Error(ErrorCode::InvalidArgument, "ultraproduct needs factors");
  }
  if (index >= factors.size()) {
    throw Error(ErrorCode::OutOfRange,
                "principal index " + std::to_string(index) + " outside " +
                    std::to_string(factors.size()) + " factors");
  }
  const Dim n = factors[0]->dim();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!factors[i]->is_full()) {
      throw Error(ErrorCode::InvalidArgument,
                  "ultraproduct factors must be full carriers");
    }
    if (factors[i]->dim() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "ultraproduct factors must share one dimension");
    }
    if (i != index && factors[i]->base() == 0 && n > 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "factor " + std::to_string(i) +
                      " has an empty base, so the product of bases is empty");
    }
  }

  UltraproductReport report;
  report.factors.assign(factors.begin(), factors.end());
  report.index = index;
  report.seed = sampling_for(options).seed;
  report.note =
      "principal ultrafilter {A : index in A}; non-principal ultrafilters "
      "need an infinite index set and are not constructed";

  const Product product = make_product(report.factors);
  const CarrierRef& home = factors[index];
  const auto transpositions = all_transpositions(n);

  // A representative s_j ∈ ∏ U_i of each coordinate j is determined by its
  // value at `index` (taken from t) and a filler sequence per other factor.
  using Filler = std::vector<Seq>;
  auto random_filler = [&](SplitMix64& rng) {
    Filler fill(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i == index) continue;
      fill[i].entries.resize(n);
      for (Value& v : fill[i].entries) {
        v = static_cast<Value>(rng.next() % factors[i]->base());
      }
    }
    return fill;
  };

  // ψ((a_i)/F) = {s/F : {i : (s_0(i),...,s_{n-1}(i)) ∈ a_i} ∈ F}, with s/F
  // identified with s(index) ∈ ^n U_index.
  auto psi = [&](const ProductElem& a, const Filler& fill) {
    BitVec out(home->size());
    for (std::size_t p = 0; p < home->size(); ++p) {
      const Seq t = home->member(p);
      std::vector<std::size_t> agreeing;  // the index set J
      for (std::size_t i = 0; i < factors.size(); ++i) {
        const Seq& column = i == index ? t : fill[i];
        if (a.components[i].contains(column)) agreeing.push_back(i);
      }
      const bool in_filter =
          std::find(agreeing.begin(), agreeing.end(), index) != agreeing.end();
      if (in_filter) out.set(p);
    }
    return Elem(home, std::move(out));
  };

  auto fail = [&](bool& flag, const std::string& what) {
    if (flag && !report.first_violation) report.first_violation = what;
    flag = false;
  };

  SplitMix64 rng(report.seed);
  auto random_tuple = [&](const BitVec& at_index) {
    ProductElem a;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i == index) {
        a.components.emplace_back(factors[i], at_index);
      } else {
        a.components.emplace_back(factors[i],
                                  random_bits(rng, factors[i]->size()));
      }
    }
    return a;
  };

  const std::size_t m = home->size();
  std::vector<BitVec> home_elems;
  if (fits_budget(m, options.limits) && m <= 16) {
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << m); ++w) {
      home_elems.push_back(BitVec::from_word(m, w));
    }
  } else {
    const Sampled s = sampling_for(options);
    for (std::uint64_t t = 0; t < s.trials; ++t) {
      home_elems.push_back(random_bits(rng, m));
    }
    report.note += "; sampled " + std::to_string(s.trials) + " elements";
  }
  report.elements_checked = home_elems.size();

  std::vector<ProductElem> tuples;
  std::vector<Elem> images;
  for (const BitVec& b : home_elems) {
    ProductElem a = random_tuple(b);
    const Filler fill_a = random_filler(rng);
    const Filler fill_b = random_filler(rng);
    Elem image = psi(a, fill_a);
    // Same class, other representatives: a second tuple agreeing at index
    // and a second choice of sequence representatives.
    const ProductElem a2 = random_tuple(b);
    report.representatives_checked += 2;
    if (psi(a, fill_b) != image || psi(a2, fill_a) != image) {
      fail(report.well_defined, "psi depends on the representative");
    }
    if (image.bits() != b) fail(report.equals_projection, "psi differs from projection");
    if (psi(p_complement(a), fill_a) != complement(image)) {
      fail(report.preserves_complement, "complement not preserved");
    }
    for (const Perm& f : transpositions) {
      if (psi(p_subst(f, a), fill_a) != subst(f, image)) {
        fail(report.preserves_subst, op_name(f) + " not preserved");
      }
    }
    tuples.push_back(std::move(a));
    images.push_back(std::move(image));
  }

  const Filler fill = random_filler(rng);
  for (std::size_t x = 0; x < tuples.size(); ++x) {
    for (std::size_t y = 0; y < tuples.size(); ++y) {
      ++report.pairs_checked;
      if (psi(p_meet(tuples[x], tuples[y]), fill) != meet(images[x], images[y])) {
        fail(report.preserves_meet, "meet not preserved");
      }
      if (x != y && home_elems[x] != home_elems[y] && images[x] == images[y]) {
        fail(report.injective, "distinct classes share an image");
      }
    }
  }
  return report;
}

}  // namespace tra
