#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bvm/matrix.hpp"
#include "bvm/model.hpp"

namespace bvm {

// hbar-series of matrices; index = power of hbar.
using MatrixSeries = std::vector<Matrix>;

// Graded space with K = Q + hbar K^(1) + ... + hbar^N K^(N), every piece raising ghost by one.
struct FiniteComplex {
  std::vector<int> ghosts;
  std::vector<std::string> labels;
  Matrix q;
  std::vector<Matrix> k;  // k[l-1] = K^(l)
  // Regression data carried by fixture files: expected kappa^(l).
  std::map<int, Matrix> frozen_kappa;

  std::size_t dim() const { return ghosts.size(); }
  int order() const { return static_cast<int>(k.size()); }
  // K^(l) with K^(0) = Q and zero beyond the stored order.
  Matrix piece(int l) const;
};

// Shapes, ghost degrees and Q K^(n) + K^(n) Q + sum K^(n-l) K^(l) = 0 for n <= N.
// Throws NotNilpotent naming the first failing order.
void validate(const FiniteComplex& c);

// Strong deformation retract onto cohomology: Q h + h Q = 1 - f0 proj.
struct CohomologyData {
  std::vector<int> h_ghosts;
  Matrix f0;    // C x H
  Matrix proj;  // H x C
  Matrix h;     // C x C
  std::size_t dim() const { return h_ghosts.size(); }
};
CohomologyData cohomology(const FiniteComplex& c);

struct ObstructionTower {
  int order = 0;
  MatrixSeries kappa;  // kappa[0] = 0
  MatrixSeries f;      // f[0] = f0
  std::vector<Matrix> g;  // g[l] for l >= 1; g[0] unused
};
ObstructionTower build_tower(const FiniteComplex& c, const CohomologyData& data);

struct Classification {
  Matrix observables;  // H x k, basis of the common kernel of all kappa^(l)
  Matrix invisibles;   // H x (dim H - k), standard complement
};
Classification classify(const ObstructionTower& tower, std::size_t dim_h);

struct QuantumExtension {
  std::vector<std::vector<Rational>> chain;  // chain[l] = f^(l) a
  bool observable = false;
  bool closed = false;  // K f(a) = 0 mod hbar^(N+1), checked for observables
};
QuantumExtension quantum_extend(const FiniteComplex& c, const ObstructionTower& tower, const std::vector<Rational>& a);

// Series helpers (truncated at `order`).
MatrixSeries series_product(const MatrixSeries& a, const MatrixSeries& b, int order);
MatrixSeries series_inverse(const MatrixSeries& a, int order);
MatrixSeries k_series(const FiniteComplex& c, int order);

struct GaugeReport {
  bool chain_relation = false;  // K f' = f' kappa'
  bool kappa_square = false;    // kappa'^2 = 0
  MatrixSeries kappa;
  MatrixSeries f;
};
// f' = f xi + K s + s kappa', kappa' = xi^-1 kappa xi.
GaugeReport gauge_transform(const FiniteComplex& c, const ObstructionTower& tower, const MatrixSeries& s,
                            const MatrixSeries& xi);

// c^(n) Q + sum c^(n-l) K^(l) = 0 for n <= N.
bool functional_closed(const FiniteComplex& c, const MatrixSeries& functional);
// Order-by-order solve for a K-closed functional starting from c0 (1 x dim, c0 Q = 0).
std::optional<MatrixSeries> extend_functional(const FiniteComplex& c, const Matrix& c0);
// iota(a) = sum_n hbar^n sum_l c^(n-l) f^(l) a, as hbar coefficients.
std::vector<Rational> expectation_iota(const MatrixSeries& functional, const MatrixSeries& f,
                                       const std::vector<Rational>& a, int order);

// Random ghost-respecting data for tests and fixture searches.
Matrix random_graded(const std::vector<int>& row_ghosts, const std::vector<int>& col_ghosts, int shift,
                     std::mt19937_64& rng, int lo = -2, int hi = 2);
// Random square-zero Q on the given ghost layout.
Matrix random_differential(const std::vector<int>& ghosts, std::mt19937_64& rng);
// K = g Q g^-1 with g = 1 + hbar g1 + ..., so kappa vanishes identically.
FiniteComplex conjugated_complex(const std::vector<int>& ghosts, const Matrix& q, int order, std::mt19937_64& rng);
// Searches small K^(1) perturbations of a fixed Q for kappa^(1) = 0, kappa^(2) != 0,
// then disguises the hit by a random conjugation.
std::optional<FiniteComplex> search_kappa2_fixture(std::mt19937_64& rng, int attempts);

// Polynomial model cut to weighted degree <= max_degree, with K^(1) = -Delta.
struct TruncatedModel {
  FiniteComplex complex;
  std::vector<Monomial> basis;
};
TruncatedModel truncated_complex(const ModelContext& ctx, const std::vector<int>& weights, int max_degree,
                                 int ghost_lo, int ghost_hi);

FiniteComplex parse_complex(std::string_view json_text);
std::string complex_to_json(const FiniteComplex& c);

}  // namespace bvm
