#include <algorithm>

#include "parallel.hpp"
#include "tra/error.hpp"
#include "tra/termlang.hpp"

namespace tra {

CompiledTerm::CompiledTerm(const Term& t, const CarrierRef& d,
                           const std::vector<std::string>& slots)
    : carrier_(d) {
  compile(t, slots);
}

void CompiledTerm::compile(const Term& t,
                           const std::vector<std::string>& slots) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      const auto it = std::find(slots.begin(), slots.end(), t.name());
      if (it == slots.end()) {
        throw Error(ErrorCode::InvalidArgument,
                    "unassigned variable '" + t.name() + "'");
      }
      code_.push_back({Op::Load, static_cast<std::uint32_t>(it - slots.begin())});
      return;
    }
    case Term::Kind::Zero:
      code_.push_back({Op::Zero, 0});
      return;
    case Term::Kind::One:
      code_.push_back({Op::One, 0});
      return;
    case Term::Kind::Not:
      compile(t.operand(), slots);
      code_.push_back({Op::Not, 0});
      return;
    case Term::Kind::Subst:
      compile(t.operand(), slots);
      maps_.push_back(carrier_->subst_map(instantiate(t.perm(), carrier_->dim())));
      code_.push_back({Op::Subst, static_cast<std::uint32_t>(maps_.size() - 1)});
      return;
    case Term::Kind::And:
    case Term::Kind::Or:
      compile(t.lhs(), slots);
      compile(t.rhs(), slots);
      code_.push_back({t.kind() == Term::Kind::And ? Op::And : Op::Or, 0});
      return;
  }
}

BitVec CompiledTerm::eval(std::span<const BitVec> values) const {
  boost::container::small_vector<BitVec, 8> stack;
  const std::size_t m = carrier_->size();
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::Load:
        stack.push_back(values[in.arg]);
        break;
      case Op::Zero:
        stack.emplace_back(m, false);
        break;
      case Op::One:
        stack.emplace_back(m, true);
        break;
      case Op::Not:
        stack.back().flip();
        break;
      case Op::Subst:
        stack.back() = apply_subst(*maps_[in.arg], stack.back());
        break;
      case Op::And:
      case Op::Or: {
        BitVec rhs = std::move(stack.back());
        stack.pop_back();
        if (in.op == Op::And) {
          stack.back() &= rhs;
        } else {
          stack.back() |= rhs;
        }
        break;
      }
    }
  }
  return std::move(stack.back());
}

Elem eval_term(const Term& t, const CarrierRef& d, const Assignment& env) {
  std::vector<std::string> slots;
  std::vector<BitVec> values;
  for (const auto& [name, value] : env) {
    require_same_carrier(*d, value.carrier());
    slots.push_back(name);
    values.push_back(value.bits());
  }
  CompiledTerm compiled(t, d, slots);
  return Elem(d, compiled.eval(values));
}

std::string to_string(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::HoldsExhaustive:
      return "holds-exhaustive";
    case Verdict::Outcome::HoldsSampled:
      return "holds-sampled";
    case Verdict::Outcome::Fails:
      return "fails";
  }
  return "?";
}

BitVec random_bits(SplitMix64& rng, std::size_t nbits) {
  BitVec b(nbits);
  for (std::size_t w = 0; w < b.num_words(); ++w) b.words()[w] = rng.next();
  if (const std::size_t r = nbits % BitVec::kWordBits; r != 0) {
    b.words()[b.num_words() - 1] &= (BitVec::Word{1} << r) - 1;
  }
  return b;
}

SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  SplitMix64 mix(seed);
  const std::uint64_t base = mix.next();
  return SplitMix64(base ^ (trial * 0xD1B54A32D192ED03ULL));
}

namespace {

struct CompiledQuasi {
  std::vector<std::pair<CompiledTerm, CompiledTerm>> hypotheses;
  std::pair<CompiledTerm, CompiledTerm> conclusion;

  bool violated(std::span<const BitVec> values) const {
    for (const auto& [l, r] : hypotheses) {
      if (l.eval(values) != r.eval(values)) return false;
    }
    return conclusion.first.eval(values) != conclusion.second.eval(values);
  }
};

CompiledQuasi compile_quasi(const QuasiEquation& qe, const CarrierRef& d,
                            const std::vector<std::string>& vars) {
  std::vector<std::pair<CompiledTerm, CompiledTerm>> hyps;
  for (const Equation& eq : qe.hypotheses) {
    hyps.emplace_back(CompiledTerm(eq.lhs, d, vars),
                      CompiledTerm(eq.rhs, d, vars));
  }
  return CompiledQuasi{std::move(hyps),
                       {CompiledTerm(qe.conclusion.lhs, d, vars),
                        CompiledTerm(qe.conclusion.rhs, d, vars)}};
}

Assignment make_assignment(const CarrierRef& d,
                           const std::vector<std::string>& vars,
                           std::vector<BitVec> values) {
  Assignment env;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    env.emplace(vars[k], Elem(d, std::move(values[k])));
  }
  return env;
}

std::vector<BitVec> exhaustive_values(std::uint64_t index, std::size_t m,
                                      std::size_t v) {
  std::vector<BitVec> values;
  values.reserve(v);
  const std::uint64_t mask = m == 0 ? 0 : (m == 64 ? ~0ULL : (1ULL << m) - 1);
  for (std::size_t k = 0; k < v; ++k) {
    const std::size_t shift = m * (v - 1 - k);
    values.push_back(BitVec::from_word(m, shift >= 64 ? 0 : (index >> shift) & mask));
  }
  return values;
}

std::vector<BitVec> sampled_values(std::uint64_t seed, std::uint64_t trial,
                                   std::size_t m, std::size_t v) {
  SplitMix64 rng = trial_stream(seed, trial);
  std::vector<BitVec> values;
  values.reserve(v);
  for (std::size_t k = 0; k < v; ++k) values.push_back(random_bits(rng, m));
  return values;
}

}  // namespace

Verdict check_quasi(const CarrierRef& d, const QuasiEquation& qe,
                    const CheckOptions& options) {
  const std::vector<std::string> vars = variables(qe);
  const CompiledQuasi compiled = compile_quasi(qe, d, vars);
  const std::size_t m = d->size();
  const std::size_t v = vars.size();
  Verdict verdict;

  if (const auto* sampled = std::get_if<Sampled>(&options.mode)) {
    verdict.sampling = *sampled;
    const auto hit = detail::find_first(
        sampled->trials, options.workers, [&](std::uint64_t t) {
          return compiled.violated(sampled_values(sampled->seed, t, m, v));
        });
    if (hit) {
      verdict.outcome = Verdict::Outcome::Fails;
      verdict.assignments_tested = *hit + 1;
      verdict.witness =
          make_assignment(d, vars, sampled_values(sampled->seed, *hit, m, v));
    } else {
      verdict.outcome = Verdict::Outcome::HoldsSampled;
      verdict.assignments_tested = sampled->trials;
    }
    return verdict;
  }

  const std::uint64_t bits = static_cast<std::uint64_t>(m) * v;
  if (bits >= 63 || (std::uint64_t{1} << bits) > options.limits.enumeration_budget) {
    throw Error(ErrorCode::BudgetExceeded,
                "exhaustive check needs 2^" + std::to_string(bits) +
                    " assignments; budget is " +
                    std::to_string(options.limits.enumeration_budget));
  }
  const std::uint64_t total = std::uint64_t{1} << bits;
  const auto hit = detail::find_first(total, options.workers, [&](std::uint64_t i) {
    return compiled.violated(exhaustive_values(i, m, v));
  });
  if (hit) {
    verdict.outcome = Verdict::Outcome::Fails;
    verdict.assignments_tested = *hit + 1;
    verdict.witness = make_assignment(d, vars, exhaustive_values(*hit, m, v));
  } else {
    verdict.outcome = Verdict::Outcome::HoldsExhaustive;
    verdict.assignments_tested = total;
  }
  return verdict;
}

Verdict check_equation(const CarrierRef& d, const Equation& eq,
                       const CheckOptions& options) {
  return check_quasi(d, QuasiEquation{{}, eq}, options);
}

bool violates(const CarrierRef& d, const QuasiEquation& qe,
              const Assignment& env) {
  for (const Equation& eq : qe.hypotheses) {
    if (eval_term(eq.lhs, d, env) != eval_term(eq.rhs, d, env)) return false;
  }
  return eval_term(qe.conclusion.lhs, d, env) !=
         eval_term(qe.conclusion.rhs, d, env);
}

}  // namespace tra
