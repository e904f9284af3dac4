#pragma once

#include <optional>
#include <string>
#include <vector>

#include "galrep/analysis.hpp"
#include "galrep/test_sets.hpp"

namespace galrep {

/// The test-set document exchanged between `sets` and `analyze`: field, S, the
/// working basis, and whichever of T0/T1/T2 were computed or injected.
struct SetsDocument {
  BaseField field = BaseField::Rationals;
  std::vector<Prime> bad_set;
  SelmerBasis basis;
  std::optional<T1Set> t1;
  std::optional<T0Set> t0;
  std::optional<T2Set> t2;          // generic
  std::optional<T2Set> t2_special;
};

std::string to_json(const SetsDocument& doc);
SetsDocument parse_sets_document(const std::string& text);

struct ReportProvenance {
  std::string sets_hash;    // hash of the sets document bytes
  std::string oracle_hash;  // hash of the canonical answer log
};

std::string report_to_json(const IsogenyReport& rep, const SetsDocument& doc,
                           const ReportProvenance& prov);

/// FNV-1a over bytes, hex-encoded; used to stamp reports with their inputs.
std::string fnv1a_hex(const std::string& bytes);

/// Canonical byte encoding of the answers consumed by a run, for hashing.
std::string canonical_query_log(const std::vector<QueryRow>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace galrep
