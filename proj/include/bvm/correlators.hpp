#pragma once

#include <map>
#include <string>
#include <vector>

#include "bvm/master.hpp"

namespace bvm {

// Finite Laurent polynomial in hbar with rational coefficients; no zero entries.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(const Rational& c, int power = 0);
  // Constant parts of an HbarPoly whose coefficients are scalars.
  static LaurentPoly from_scalar(const HbarPoly& p);

  const std::map<int, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Rational coeff(int power) const;
  void add(int power, const Rational& c);
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(const Rational& c, const LaurentPoly& a);
  LaurentPoly shifted(int k) const;
  bool operator==(const LaurentPoly& o) const { return terms_ == o.terms_; }
  std::string to_string() const;

 private:
  std::map<int, Rational> terms_;
};

// (-hbar)^k
LaurentPoly minus_hbar_pow(int k);

using ScalarSeries = std::map<TKey, LaurentPoly>;
void add_to(ScalarSeries& s, const TKey& key, const LaurentPoly& v);
ScalarSeries partial(const ScalarSeries& s, int index);

// <O_gamma> for each basis index.
struct ExpectationVector {
  std::vector<LaurentPoly> values;

  static ExpectationVector socle(const ModelContext& ctx);
  // Explicit values from a model's configuration, or the socle functional.
  static ExpectationVector from_config(const ModelContext& ctx);
};

// Omega_1..Omega_order with K-closure and the d0 ladder checked into `log`.
std::vector<TSeries> omega_tower(const MasterState& state, VerificationLog* log = nullptr);
TSeries omega(const MasterState& state, int n);

// p_n as coupling fields P_n^gamma = p_n t^gamma, n = 1..order (slot 0 unused).
std::vector<CouplingField> p_sharp_tower(const MasterState& state, VerificationLog* log = nullptr);
CouplingField p_sharp(const MasterState& state, int n);
// The low-order products written out by hand, for comparison with the recursion.
CouplingField p3_closed_form(const MasterState& state);
CouplingField p4_closed_form(const MasterState& state);

// <Omega_n> = sum_gamma P_n^gamma <O_gamma>.
ScalarSeries expectation_layer(const CouplingField& p, const ExpectationVector& vec);

// arity -> sorted multi-index -> <pi>
using CorrelatorTable = std::map<int, std::map<TKey, LaurentPoly>>;
CorrelatorTable correlator_table(const MasterState& state, const ExpectationVector& vec, int max_arity);

struct QuantumCoordinates {
  std::vector<ScalarSeries> coords;  // T^gamma
  ScalarSeries z;                    // <1> - (1/hbar) T^gamma <O_gamma>
};
QuantumCoordinates quantum_coordinates(const MasterState& state, const ExpectationVector& vec,
                                       VerificationLog* log = nullptr);

// Expectation of a K-closed chain, peeling off cohomology one hbar order at a time.
LaurentPoly chain_expectation(const MasterState& state, const ExpectationVector& vec, const HbarPoly& chain);

struct OracleResult {
  HbarPoly chain;           // pi_n from the partition formula
  LaurentPoly via_chain;    // its expectation
  LaurentPoly via_p_sharp;  // multiplicity-scaled coefficient of <Omega_n>
  LaurentPoly via_components;
};
// Throws OracleMismatch unless all three evaluations and the chain itself agree.
OracleResult partition_oracle(const MasterState& state, const ExpectationVector& vec, const TKey& indices);

// Every multi-index of the given arity over the basis, sorted.
std::vector<TKey> multi_indices(std::size_t dim, int arity);

// Correlator identities (Omega ladder, p compatibility, coordinates, optional oracle sweep).
VerificationLog verify_correlators(const MasterState& state, const ExpectationVector& vec, int max_arity,
                                   bool run_oracle);

}  // namespace bvm
