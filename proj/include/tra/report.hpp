#pragma once

// JSON documents for carriers, elements, verdicts and verifier reports.
// Key order is fixed, so identical inputs serialize to identical text.

#include <json.hpp>

#include "tra/theorems.hpp"

namespace tra {

using Json = nlohmann::ordered_json;

Json to_json(const Seq& s);
Json to_json(const Perm& f);
Json to_json(const Carrier& d);
/// Array of member sequences.
Json to_json(const Elem& x);
Json to_json(const Verdict& v);
Json to_json(const HomReport& r);
Json to_json(const Decomposition& d);
Json to_json(const SigmaSmallReport& r);
Json to_json(const Counterexample& c);
Json to_json(const HEscapeReport& r);
Json to_json(const UltraproductReport& r);

/// Inverse of to_json(const Elem&) against a known carrier.
Elem elem_from_json(const CarrierRef& d, const Json& j);
/// Reads a verdict's "witness" object back into an assignment.
Assignment assignment_from_json(const CarrierRef& d, const Json& witness);

}  // namespace tra
