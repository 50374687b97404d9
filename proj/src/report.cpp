#include "tra/report.hpp"

#include "tra/error.hpp"

namespace tra {

namespace {

Json sampling_json(const std::optional<Sampled>& s) {
  if (!s) return Json{{"mode", "exhaustive"}};
  return Json{{"mode", "sampled"}, {"trials", s->trials}, {"seed", s->seed}};
}

Json pair_json(const Perm& f, const Perm& g) {
  return Json{{"f", to_json(f)}, {"g", to_json(g)}};
}

}  // namespace

Json to_json(const Seq& s) { return Json(s.entries); }
Json to_json(const Perm& f) { return Json(f.images()); }

Json to_json(const Carrier& d) {
  Json j{{"n", d.dim()}, {"base", d.base()}, {"size", d.size()},
         {"full", d.is_full()}};
  if (!d.is_full()) {
    Json members = Json::array();
    for (const Seq& s : d.members()) members.push_back(to_json(s));
    j["members"] = std::move(members);
  }
  return j;
}

Json to_json(const Elem& x) {
  Json members = Json::array();
  for (const Seq& s : x.seqs()) members.push_back(to_json(s));
  return members;
}

Json to_json(const Verdict& v) {
  Json j{{"outcome", to_string(v.outcome)}};
  j.update(sampling_json(v.sampling));
  j["assignments_tested"] = v.assignments_tested;
  if (v.witness) {
    Json w = Json::object();
    for (const auto& [name, value] : *v.witness) w[name] = to_json(value);
    j["witness"] = std::move(w);
  }
  return j;
}

Json to_json(const HomReport& r) {
  Json j{{"passed", r.passed()},
         {"source", to_json(*r.source)},
         {"target", to_json(*r.target)},
         {"operations", r.operations}};
  j.update(sampling_json(r.sampling));
  j["elements_tested"] = r.elements_tested;
  j["pairs_tested"] = r.pairs_tested;
  if (r.violation) {
    Json v{{"operation", r.violation->operation},
           {"x", to_json(r.violation->x)}};
    if (r.violation->y) v["y"] = to_json(*r.violation->y);
    j["violation"] = std::move(v);
  }
  return j;
}

Json to_json(const Decomposition& d) {
  Json records = Json::array();
  for (const auto& r : d.records) {
    Json rec;
    rec["q"] = r.witness ? to_json(*r.witness) : Json(nullptr);
    rec["range"] = r.range;
    rec["k_a"] = r.k_a;
    Json renaming = Json::array();
    for (auto [from, to] : r.renaming) renaming.push_back({from, to});
    rec["renaming"] = std::move(renaming);
    rec["target"] = "A_" + std::to_string(d.n) + "," + std::to_string(r.k_a);
    rec["image_nonzero"] = r.image_nonzero;
    records.push_back(std::move(rec));
  }
  const SeparationReport& s = d.separation;
  Json sep{{"separated", s.separated}};
  sep.update(sampling_json(s.sampling));
  sep["elements"] = s.elements;
  sep["pairs_checked"] = s.pairs_checked;
  sep["homomorphism"] = s.homomorphism;
  if (s.failure) {
    sep["failure"] = {to_json(s.failure->first), to_json(s.failure->second)};
  }
  if (s.homomorphism_violation) {
    sep["homomorphism_violation"] = *s.homomorphism_violation;
  }
  return Json{{"passed", d.passed()},
              {"n", d.n},
              {"k", d.k},
              {"degenerate", d.degenerate()},
              {"records", std::move(records)},
              {"separation", std::move(sep)}};
}

Json to_json(const SigmaSmallReport& r) {
  Json j{{"holds", r.holds()}, {"n", r.n}, {"k", r.k},
         {"pair_count", r.pairs.size()}};
  if (r.pairs.size() == 1) j["pair"] = pair_json(r.pairs[0].first, r.pairs[0].second);
  j["certificate"] = {{"constants", r.certificate.constants},
                      {"all_fixed", r.certificate.all_fixed},
                      {"carrier_empty", r.certificate.carrier_empty},
                      {"holds", r.certificate.holds}};
  Json brute{{"ran", r.brute_force_ran}};
  if (r.brute_force_ran) {
    brute["holds"] = r.brute_force_holds();
    brute["assignments_tested"] = r.assignments_tested;
    if (r.brute_force) brute.update(sampling_json(r.brute_force->sampling));
    if (r.failing_pair) {
      brute["failing_pair"] = pair_json(r.failing_pair->first, r.failing_pair->second);
      brute["verdict"] = to_json(*r.brute_force);
    }
  }
  if (!r.note.empty()) brute["note"] = r.note;
  j["brute_force"] = std::move(brute);
  j["agree"] = r.agree();
  return j;
}

Json to_json(const Counterexample& c) {
  return Json{{"passed", c.passed()},
              {"n", c.n},
              {"G", to_json(*c.carrier)},
              {"X", to_json(c.x)},
              {"f", to_json(c.f)},
              {"g", to_json(c.g)},
              {"sigma", print_quasi(c.formula)},
              {"union", to_json(c.image_union)},
              {"complement_X", to_json(c.complement_x)},
              {"even_units", to_json(c.even_units)},
              {"permutable", c.permutable},
              {"nonempty", c.nonempty},
              {"union_is_complement", c.union_is_complement},
              {"complement_is_even", c.complement_is_even},
              {"verdict", to_json(c.verdict)},
              {"X_falsifies", c.x_falsifies},
              {"least_witness_is_X", c.least_witness_is_x}};
}

Json to_json(const HEscapeReport& r) {
  return Json{{"variety_closure_fails", r.variety_closure_fails},
              {"n", r.n},
              {"relativization", to_json(r.hom)},
              {"surjective", r.surjective},
              {"surjectivity_checked", r.surjectivity_checked},
              {"sigma_on_full", to_json(r.sigma_full)},
              {"sigma_on_G", to_json(r.sigma_on_g)}};
}

Json to_json(const UltraproductReport& r) {
  Json factors = Json::array();
  for (const auto& f : r.factors) factors.push_back(to_json(*f));
  Json j{{"passed", r.passed()},
         {"index", r.index},
         {"factors", std::move(factors)},
         {"seed", r.seed},
         {"elements_checked", r.elements_checked},
         {"pairs_checked", r.pairs_checked},
         {"representatives_checked", r.representatives_checked},
         {"well_defined", r.well_defined},
         {"equals_projection", r.equals_projection},
         {"preserves_meet", r.preserves_meet},
         {"preserves_complement", r.preserves_complement},
         {"preserves_subst", r.preserves_subst},
         {"injective", r.injective}};
  if (r.first_violation) j["first_violation"] = *r.first_violation;
  j["note"] = r.note;
  return j;
}

Elem elem_from_json(const CarrierRef& d, const Json& j) {
  if (!j.is_array()) {
    throw Error(ErrorCode::InvalidArgument, "element must be a JSON array");
  }
  std::vector<Seq> seqs;
  for (const Json& s : j) {
    if (!s.is_array()) {
      throw Error(ErrorCode::InvalidArgument, "sequence must be a JSON array");
    }
    seqs.push_back(Seq{s.get<std::vector<Value>>()});
  }
  return elem_from_seqs(d, seqs);
}

Assignment assignment_from_json(const CarrierRef& d, const Json& witness) {
  Assignment env;
  for (const auto& [name, value] : witness.items()) {
    env.emplace(name, elem_from_json(d, value));
  }
  return env;
}

}  // namespace tra
