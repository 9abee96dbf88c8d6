#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bvm/correlators.hpp"
#include "bvm/errors.hpp"
#include "bvm/master.hpp"
#include "bvm/tower.hpp"

namespace bvm {

inline constexpr const char* kEngineVersion = "0.1.0";
// Sign choices that fix every chain-level number in the output.
inline constexpr const char* kConventions =
    "Delta=sum_i d/dx_i d/dxb_i (left derivatives); "
    "(a,b)=Delta(ab)-Delta(a)b-(-1)^|a| a Delta(b); Q=(S,.); K=Q-hbar*Delta; t even";

using Json = nlohmann::ordered_json;

struct BasisEntry {
  std::string label;
  int ghost = 0;
  int degree = 0;  // grouping degree used by the ring report
  bool operator==(const BasisEntry&) const = default;
};

struct RingReport {
  std::string model;
  std::vector<BasisEntry> basis;
  std::vector<std::size_t> dimensions;  // index = grouping degree
  std::size_t total = 0;
};
// Gauged models group by the power of p, isolated ones by their grading.
RingReport ring_report(const ModelContext& ctx);
Json to_json(const RingReport& r);

struct ResultBundle {
  std::string engine_version = kEngineVersion;
  std::string conventions = kConventions;
  std::string model;
  std::string model_class;
  int truncation = 0;
  std::vector<BasisEntry> basis;
  std::vector<StructureTensor> tensors;  // arity 2..N
  std::vector<std::map<TKey, LaurentPoly>> coordinates;  // T^gamma coefficients
  CorrelatorTable correlators;
  std::vector<CheckRecord> checks;

  bool operator==(const ResultBundle& o) const;
};

ResultBundle make_bundle(const MasterState& state, const VerificationLog& log);
void attach_correlators(ResultBundle& b, const CorrelatorTable& table, const QuantumCoordinates& coords);

Json to_json(const ResultBundle& b);
ResultBundle bundle_from_json(const Json& j);
// Deterministic text form (2-space indent, trailing newline).
std::string dump(const Json& j);

Json to_json(const VerificationLog& log);
Json to_json(const LaurentPoly& p);
LaurentPoly laurent_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);

// Obstruction report for a finite complex.
Json tower_report(const FiniteComplex& c, const CohomologyData& data, const ObstructionTower& tower,
                  const Classification& cls, const VerificationLog& log);

int exit_code(ErrorKind kind);

}  // namespace bvm
