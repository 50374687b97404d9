#include "tra/tra.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "tra/algspec.hpp"
#include "tra/error.hpp"
#include "tra/report.hpp"
#include "tra/theorems.hpp"

struct tra_carrier {
  tra::CarrierRef ref;
};

struct tra_elem {
  tra::Elem value;
};

struct tra_formula {
  tra::QuasiEquation qe;
};

namespace {

thread_local std::string t_last_error;
thread_local std::size_t t_error_line = 0;
thread_local std::size_t t_error_column = 0;

tra_status status_of(tra::ErrorCode code) {
  switch (code) {
    case tra::ErrorCode::InvalidArgument:
      return TRA_ERR_INVALID_ARGUMENT;
    case tra::ErrorCode::OutOfRange:
      return TRA_ERR_OUT_OF_RANGE;
    case tra::ErrorCode::DimensionMismatch:
      return TRA_ERR_DIMENSION_MISMATCH;
    case tra::ErrorCode::CarrierMismatch:
      return TRA_ERR_CARRIER_MISMATCH;
    case tra::ErrorCode::NotAPermutation:
      return TRA_ERR_NOT_A_PERMUTATION;
    case tra::ErrorCode::NotPermutable:
      return TRA_ERR_NOT_PERMUTABLE;
    case tra::ErrorCode::NotSubCarrier:
      return TRA_ERR_NOT_SUBCARRIER;
    case tra::ErrorCode::BudgetExceeded:
      return TRA_ERR_BUDGET_EXCEEDED;
    case tra::ErrorCode::Parse:
      return TRA_ERR_PARSE;
  }
  return TRA_ERR_INTERNAL;
}

tra_status fail(tra_status status, std::string message) {
  t_last_error = std::move(message);
  return status;
}

template <typename F>
tra_status guard(F&& body) {
  t_error_line = 0;
  t_error_column = 0;
  try {
    body();
    t_last_error.clear();
    return TRA_OK;
  } catch (const tra::ParseError& e) {
    t_error_line = e.line();
    t_error_column = e.column();
    return fail(TRA_ERR_PARSE, e.what());
  } catch (const tra::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(TRA_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TRA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TRA_ERR_INTERNAL, e.what());
  }
}

#define TRA_REQUIRE(ptr)                                              \
  do {                                                                \
    if ((ptr) == nullptr) {                                           \
      return fail(TRA_ERR_NULL_ARGUMENT, "null argument: " #ptr);     \
    }                                                                 \
  } while (0)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tra::CheckOptions to_options(const tra_options* o) {
  tra::CheckOptions out;
  if (o == nullptr) return out;
  if (o->mode == TRA_MODE_SAMPLED) {
    out.mode = tra::Sampled{o->trials, o->seed};
  }
  out.workers = o->workers == 0 ? 1 : o->workers;
  if (o->enumeration_budget != 0) {
    out.limits.enumeration_budget = o->enumeration_budget;
  }
  return out;
}

tra::Seq read_seq(const uint32_t* entries, uint32_t n) {
  return tra::Seq{std::vector<tra::Value>(entries, entries + n)};
}

std::vector<tra::Seq> read_seqs(const uint32_t* entries, size_t count,
                                uint32_t n) {
  std::vector<tra::Seq> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.push_back(read_seq(entries + i * n, n));
  return out;
}

tra::Perm read_perm(const uint32_t* images, size_t n) {
  return tra::Perm(std::vector<tra::Dim>(images, images + n));
}

void write_report(const tra::Json& j, char** out) {
  *out = copy_string(j.dump(2));
}

}  // namespace

extern "C" {

void tra_options_init(tra_options* options) {
  if (options == nullptr) return;
  options->mode = TRA_MODE_EXHAUSTIVE;
  options->trials = tra::kFallbackTrials;
  options->seed = tra::kDefaultSeed;
  options->workers = 1;
  options->enumeration_budget = tra::Limits{}.enumeration_budget;
}

const char* tra_version(void) { return "1.0.0"; }

const char* tra_status_name(tra_status status) {
  switch (status) {
    case TRA_OK:
      return "ok";
    case TRA_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case TRA_ERR_OUT_OF_RANGE:
      return "out of range";
    case TRA_ERR_DIMENSION_MISMATCH:
      return "dimension mismatch";
    case TRA_ERR_CARRIER_MISMATCH:
      return "carrier mismatch";
    case TRA_ERR_NOT_A_PERMUTATION:
      return "not a permutation";
    case TRA_ERR_NOT_PERMUTABLE:
      return "not permutable";
    case TRA_ERR_NOT_SUBCARRIER:
      return "not a sub-carrier";
    case TRA_ERR_BUDGET_EXCEEDED:
      return "budget exceeded";
    case TRA_ERR_PARSE:
      return "parse error";
    case TRA_ERR_NULL_ARGUMENT:
      return "null argument";
    case TRA_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* tra_last_error(void) { return t_last_error.c_str(); }
size_t tra_last_error_line(void) { return t_error_line; }
size_t tra_last_error_column(void) { return t_error_column; }
void tra_string_free(char* s) { std::free(s); }

// ---- carriers --------------------------------------------------------------

tra_status tra_carrier_full(uint32_t n, uint32_t k, tra_carrier** out) {
  TRA_REQUIRE(out);
  return guard([&] { *out = new tra_carrier{tra::Carrier::full(n, k)}; });
}

tra_status tra_carrier_from_seqs(uint32_t n, uint32_t u,
                                 const uint32_t* entries, size_t count,
                                 tra_carrier** out) {
  TRA_REQUIRE(out);
  if (count > 0 && n > 0) TRA_REQUIRE(entries);
  return guard([&] {
    const auto seqs = read_seqs(entries, count, n);
    *out = new tra_carrier{tra::Carrier::from_seqs(n, u, seqs)};
  });
}

tra_status tra_carrier_from_spec(const char* text, tra_carrier** out) {
  TRA_REQUIRE(text);
  TRA_REQUIRE(out);
  return guard([&] {
    *out = new tra_carrier{tra::parse_algebra_spec(text).build()};
  });
}

tra_status tra_carrier_to_spec(const tra_carrier* c, char** out) {
  TRA_REQUIRE(c);
  TRA_REQUIRE(out);
  return guard([&] {
    *out = copy_string(tra::print_algebra_spec(tra::spec_of(*c->ref)));
  });
}

tra_status tra_carrier_to_json(const tra_carrier* c, char** out) {
  TRA_REQUIRE(c);
  TRA_REQUIRE(out);
  return guard([&] { write_report(tra::to_json(*c->ref), out); });
}

void tra_carrier_free(tra_carrier* c) { delete c; }

uint32_t tra_carrier_dim(const tra_carrier* c) {
  return c ? c->ref->dim() : 0;
}
uint32_t tra_carrier_base(const tra_carrier* c) {
  return c ? c->ref->base() : 0;
}
size_t tra_carrier_size(const tra_carrier* c) { return c ? c->ref->size() : 0; }

tra_status tra_carrier_member(const tra_carrier* c, size_t pos,
                              uint32_t* entries) {
  TRA_REQUIRE(c);
  if (c->ref->dim() > 0) TRA_REQUIRE(entries);
  return guard([&] {
    if (pos >= c->ref->size()) {
      throw tra::Error(tra::ErrorCode::OutOfRange, "member index out of range");
    }
    const tra::Seq s = c->ref->member(pos);
    std::copy(s.entries.begin(), s.entries.end(), entries);
  });
}

tra_status tra_carrier_is_permutable(const tra_carrier* c, int* permutable) {
  TRA_REQUIRE(c);
  TRA_REQUIRE(permutable);
  return guard([&] { *permutable = c->ref->is_permutable() ? 1 : 0; });
}

tra_status tra_carrier_permutable_closure(const tra_carrier* c,
                                          tra_carrier** out) {
  TRA_REQUIRE(c);
  TRA_REQUIRE(out);
  return guard(
      [&] { *out = new tra_carrier{tra::permutable_closure(c->ref)}; });
}

// ---- elements --------------------------------------------------------------

tra_status tra_elem_zero(const tra_carrier* c, tra_elem** out) {
  TRA_REQUIRE(c);
  TRA_REQUIRE(out);
  return guard([&] { *out = new tra_elem{tra::zero(c->ref)}; });
}

tra_status tra_elem_one(const tra_carrier* c, tra_elem** out) {
  TRA_REQUIRE(c);
  TRA_REQUIRE(out);
  return guard([&] { *out = new tra_elem{tra::one(c->ref)}; });
}

tra_status tra_elem_atom(const tra_carrier* c, const uint32_t* seq,
                         tra_elem** out) {
  TRA_REQUIRE(c);
  TRA_REQUIRE(out);
  if (c->ref->dim() > 0) TRA_REQUIRE(seq);
  return guard([&] {
    *out = new tra_elem{tra::atom(c->ref, read_seq(seq, c->ref->dim()))};
  });
}

tra_status tra_elem_from_seqs(const tra_carrier* c, const uint32_t* entries,
                              size_t count, tra_elem** out) {
  TRA_REQUIRE(c);
  TRA_REQUIRE(out);
  if (count > 0 && c->ref->dim() > 0) TRA_REQUIRE(entries);
  return guard([&] {
    const auto seqs = read_seqs(entries, count, c->ref->dim());
    *out = new tra_elem{tra::elem_from_seqs(c->ref, seqs)};
  });
}

void tra_elem_free(tra_elem* x) { delete x; }

tra_status tra_elem_meet(const tra_elem* x, const tra_elem* y,
                         tra_elem** out) {
  TRA_REQUIRE(x);
  TRA_REQUIRE(y);
  TRA_REQUIRE(out);
  return guard([&] { *out = new tra_elem{tra::meet(x->value, y->value)}; });
}

tra_status tra_elem_join(const tra_elem* x, const tra_elem* y,
                         tra_elem** out) {
  TRA_REQUIRE(x);
  TRA_REQUIRE(y);
  TRA_REQUIRE(out);
  return guard([&] { *out = new tra_elem{tra::join(x->value, y->value)}; });
}

tra_status tra_elem_complement(const tra_elem* x, tra_elem** out) {
  TRA_REQUIRE(x);
  TRA_REQUIRE(out);
  return guard([&] { *out = new tra_elem{tra::complement(x->value)}; });
}

tra_status tra_elem_subst(const uint32_t* f, size_t n, const tra_elem* x,
                          tra_elem** out) {
  TRA_REQUIRE(x);
  TRA_REQUIRE(out);
  if (n > 0) TRA_REQUIRE(f);
  return guard(
      [&] { *out = new tra_elem{tra::subst(read_perm(f, n), x->value)}; });
}

tra_status tra_elem_relativize(const tra_elem* x, const tra_carrier* g,
                               tra_elem** out) {
  TRA_REQUIRE(x);
  TRA_REQUIRE(g);
  TRA_REQUIRE(out);
  return guard([&] { *out = new tra_elem{tra::relativize(x->value, g->ref)}; });
}

tra_status tra_elem_is_zero(const tra_elem* x, int* result) {
  TRA_REQUIRE(x);
  TRA_REQUIRE(result);
  return guard([&] { *result = tra::is_zero(x->value) ? 1 : 0; });
}

tra_status tra_elem_leq(const tra_elem* x, const tra_elem* y, int* result) {
  TRA_REQUIRE(x);
  TRA_REQUIRE(y);
  TRA_REQUIRE(result);
  return guard([&] { *result = tra::leq(x->value, y->value) ? 1 : 0; });
}

tra_status tra_elem_equal(const tra_elem* x, const tra_elem* y, int* result) {
  TRA_REQUIRE(x);
  TRA_REQUIRE(y);
  TRA_REQUIRE(result);
  return guard([&] {
    tra::require_same_carrier(x->value.carrier(), y->value.carrier());
    *result = x->value == y->value ? 1 : 0;
  });
}

tra_status tra_elem_contains(const tra_elem* x, const uint32_t* seq,
                             int* result) {
  TRA_REQUIRE(x);
  TRA_REQUIRE(result);
  const tra::Dim n = x->value.carrier().dim();
  if (n > 0) TRA_REQUIRE(seq);
  return guard([&] { *result = x->value.contains(read_seq(seq, n)) ? 1 : 0; });
}

size_t tra_elem_count(const tra_elem* x) { return x ? x->value.count() : 0; }

tra_status tra_elem_to_json(const tra_elem* x, char** out) {
  TRA_REQUIRE(x);
  TRA_REQUIRE(out);
  return guard([&] { *out = copy_string(tra::to_json(x->value).dump()); });
}

// ---- formulas --------------------------------------------------------------

tra_status tra_formula_parse(const char* text, tra_formula** out) {
  TRA_REQUIRE(text);
  TRA_REQUIRE(out);
  return guard([&] { *out = new tra_formula{tra::parse_quasi(text)}; });
}

tra_status tra_formula_sigma(uint32_t n, const uint32_t* f, const uint32_t* g,
                             tra_formula** out) {
  TRA_REQUIRE(out);
  if (n > 0) {
    TRA_REQUIRE(f);
    TRA_REQUIRE(g);
  }
  return guard([&] {
    *out = new tra_formula{tra::sigma(n, read_perm(f, n), read_perm(g, n))};
  });
}

tra_status tra_formula_print(const tra_formula* q, char** out) {
  TRA_REQUIRE(q);
  TRA_REQUIRE(out);
  return guard([&] { *out = copy_string(tra::print_quasi(q->qe)); });
}

void tra_formula_free(tra_formula* q) { delete q; }

tra_status tra_eval(const tra_carrier* c, const char* term,
                    const char* const* names, const tra_elem* const* values,
                    size_t count, tra_elem** out) {
  TRA_REQUIRE(c);
  TRA_REQUIRE(term);
  TRA_REQUIRE(out);
  if (count > 0) {
    TRA_REQUIRE(names);
    TRA_REQUIRE(values);
  }
  return guard([&] {
    tra::Assignment env;
    for (size_t i = 0; i < count; ++i) {
      if (names[i] == nullptr || values[i] == nullptr) {
        throw tra::Error(tra::ErrorCode::InvalidArgument, "null binding");
      }
      env.insert_or_assign(names[i], values[i]->value);
    }
    *out = new tra_elem{tra::eval_term(tra::parse_term(term), c->ref, env)};
  });
}

tra_status tra_check(const tra_carrier* c, const tra_formula* q,
                     const tra_options* options, int* holds,
                     char** verdict_json) {
  TRA_REQUIRE(c);
  TRA_REQUIRE(q);
  TRA_REQUIRE(holds);
  TRA_REQUIRE(verdict_json);
  return guard([&] {
    const tra::Verdict v = tra::check_quasi(c->ref, q->qe, to_options(options));
    *holds = v.holds() ? 1 : 0;
    write_report(tra::to_json(v), verdict_json);
  });
}

tra_status tra_revalidate_witness(const tra_carrier* c, const tra_formula* q,
                                  const char* witness_json, int* violated) {
  TRA_REQUIRE(c);
  TRA_REQUIRE(q);
  TRA_REQUIRE(witness_json);
  TRA_REQUIRE(violated);
  return guard([&] {
    const tra::Assignment env = tra::assignment_from_json(
        c->ref, tra::Json::parse(witness_json));
    *violated = tra::violates(c->ref, q->qe, env) ? 1 : 0;
  });
}

// ---- verifiers -------------------------------------------------------------

tra_status tra_verify_relativization(const tra_carrier* big,
                                     const tra_carrier* sub,
                                     const tra_options* options, int* passed,
                                     char** report) {
  TRA_REQUIRE(big);
  TRA_REQUIRE(sub);
  TRA_REQUIRE(passed);
  TRA_REQUIRE(report);
  return guard([&] {
    const auto r =
        tra::verify_relativization(big->ref, sub->ref, to_options(options));
    *passed = r.passed() ? 1 : 0;
    write_report(tra::to_json(r), report);
  });
}

tra_status tra_decompose(uint32_t n, uint32_t k, const tra_options* options,
                         int* passed, char** report) {
  TRA_REQUIRE(passed);
  TRA_REQUIRE(report);
  return guard([&] {
    const auto d = tra::decompose_small(n, k, to_options(options));
    *passed = d.passed() ? 1 : 0;
    write_report(tra::to_json(d), report);
  });
}

tra_status tra_sigma_small(uint32_t n, uint32_t k, const uint32_t* f,
                           const uint32_t* g, const tra_options* options,
                           int* holds, char** report) {
  TRA_REQUIRE(holds);
  TRA_REQUIRE(report);
  if ((f == nullptr) != (g == nullptr)) {
    return fail(TRA_ERR_NULL_ARGUMENT, "pass both f and g, or neither");
  }
  return guard([&] {
    std::optional<std::pair<tra::Perm, tra::Perm>> fg;
    if (f != nullptr) fg.emplace(read_perm(f, n), read_perm(g, n));
    const auto r = tra::sigma_holds_small(n, k, fg, to_options(options));
    *holds = r.holds() ? 1 : 0;
    write_report(tra::to_json(r), report);
  });
}

tra_status tra_counterexample(uint32_t n, const tra_options* options,
                              int* passed, char** report) {
  TRA_REQUIRE(passed);
  TRA_REQUIRE(report);
  return guard([&] {
    const auto c = tra::build_counterexample(n, to_options(options));
    *passed = c.passed() ? 1 : 0;
    write_report(tra::to_json(c), report);
  });
}

tra_status tra_h_escape(uint32_t n, const tra_options* options, int* passed,
                        char** report) {
  TRA_REQUIRE(passed);
  TRA_REQUIRE(report);
  return guard([&] {
    const auto r = tra::verify_h_escape(n, to_options(options));
    *passed = r.variety_closure_fails ? 1 : 0;
    write_report(tra::to_json(r), report);
  });
}

tra_status tra_ultraproduct(const tra_carrier* const* factors, size_t count,
                            size_t index, const tra_options* options,
                            int* passed, char** report) {
  TRA_REQUIRE(passed);
  TRA_REQUIRE(report);
  if (count > 0) TRA_REQUIRE(factors);
  return guard([&] {
    std::vector<tra::CarrierRef> refs;
    for (size_t i = 0; i < count; ++i) {
      if (factors[i] == nullptr) {
        throw tra::Error(tra::ErrorCode::InvalidArgument, "null factor");
      }
      refs.push_back(factors[i]->ref);
    }
    const auto r = tra::principal_ultraproduct(refs, index, to_options(options));
    *passed = r.passed() ? 1 : 0;
    write_report(tra::to_json(r), report);
  });
}

}  // extern "C"
