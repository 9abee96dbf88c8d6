#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bvm/element.hpp"
#include "bvm/groebner.hpp"

namespace bvm {

enum class ModelClass { IsolatedSingularity, GaugedWeightedHomogeneous };

// An integer grading over all variables under which Q has degree zero.
struct Grading {
  std::string name;
  std::vector<int> weights;
};

// Values <O_gamma> as hbar-polynomials; empty means the socle functional.
struct ExpectationConfig {
  std::vector<std::vector<Rational>> values;
  bool use_socle() const { return values.empty(); }
};

struct ModelSpec {
  std::string name;
  ModelClass model_class = ModelClass::IsolatedSingularity;
  TablePtr table;
  Element action;
  MonomialOrder order;
  // Isolated class: the even coordinates x^i. Gauged class: the x^i of G.
  std::vector<std::size_t> coordinates;
  // Gauged class only.
  Element superpotential;
  Element symmetry;
  std::optional<std::size_t> p, p_dual, c, c_dual;
  std::vector<Grading> gradings;
  ExpectationConfig expectation;
  // Degree cap for the filtered linear-algebra backend (non-graded models).
  int degree_cap = 8;
};

// Isolated-singularity model: coordinates get odd partners named <x>_b.
// With weights the action must be quasi-homogeneous; without, a grading is
// attached only if the action is homogeneous in the standard weights.
ModelSpec isolated_spec(std::string name, const std::vector<std::string>& coordinates,
                        const std::string& action_text, std::optional<std::vector<int>> weights = std::nullopt);
ModelSpec isolated_spec(std::string name, TablePtr table, Element action,
                        std::optional<std::vector<int>> weights = std::nullopt);

// Gauged weighted-homogeneous model S = p G + c R with R = x^i x^i_b - (n+2) p p_b.
ModelSpec gauged_spec(std::string name, const std::vector<std::string>& coordinates, const std::string& g_text);

// Variable table for the gauged class, used by parsers that build G themselves.
TablePtr gauged_table(const std::vector<std::string>& coordinates);
ModelSpec gauged_spec(std::string name, TablePtr table, Element superpotential);

struct HBasis {
  std::vector<Element> reps;
  std::vector<int> ghosts;
  std::vector<std::string> labels;
  std::size_t size() const { return reps.size(); }
};

struct Decomposition {
  std::vector<Rational> m;
  Element lambda;
  bool verified = false;
};

enum class DecompositionBackend { Auto, Groebner, Linear };

struct SliceCache;

class ModelContext {
 public:
  explicit ModelContext(ModelSpec spec);

  const ModelSpec& spec() const noexcept { return spec_; }
  const TablePtr& table() const noexcept { return spec_.table; }
  const Element& action() const noexcept { return spec_.action; }
  const GroebnerBasis& jacobian() const { return *jacobian_; }
  const HBasis& h_basis() const noexcept { return h_; }
  bool graded() const noexcept { return !spec_.gradings.empty(); }
  const std::vector<Grading>& gradings() const noexcept { return spec_.gradings; }

  Element q(const Element& a) const;
  // Grading values of a monomial, one per grading.
  std::vector<int> multidegree(const Monomial& m) const;
  // Index of the socle representative (top of the H-basis).
  std::size_t socle_index() const;
  // Memoized per-slice solvers; safe to use from several threads.
  SliceCache& slice_cache() const { return *cache_; }

 private:
  void validate();
  void compute_h_basis();

  ModelSpec spec_;
  std::unique_ptr<GroebnerBasis> jacobian_;
  HBasis h_;
  std::shared_ptr<SliceCache> cache_;
};

using ContextPtr = std::shared_ptr<const ModelContext>;

ContextPtr build_model(ModelSpec spec);
const HBasis& h_basis(const ModelContext& ctx);

Decomposition decompose(const ModelContext& ctx, const Element& closed, int expected_ghost,
                        DecompositionBackend backend = DecompositionBackend::Auto);

struct ExactnessWitness {
  bool exact = false;
  Element lambda;
};
ExactnessWitness is_exact(const ModelContext& ctx, const Element& closed);

// All monomials of the given ghost number whose grading values equal `multidegree`
// (graded models), or whose standard degree is at most `max_degree` (any model).
std::vector<Monomial> slice_monomials(const ModelContext& ctx, int ghost, const std::vector<int>& multidegree);
std::vector<Monomial> bounded_monomials(const TablePtr& table, int ghost, const std::vector<int>& weights,
                                        int max_degree, bool exact_degree);

struct SliceCohomology {
  int ghost = 0;
  std::vector<int> multidegree;
  std::size_t dimension = 0;
  std::size_t expected = 0;  // number of H-basis elements in the slice
};
// dim H in every slice with ghost in [ghost_lo, ghost_hi] and primary degree <= max_degree.
std::vector<SliceCohomology> slice_cohomology(const ModelContext& ctx, int ghost_lo, int ghost_hi, int max_degree);

// Random Q-exact element of the given ghost whose homogeneous components match
// those of `like` (graded models) or whose degree does not exceed it.
Element random_exact(const ModelContext& ctx, int ghost, const Element& like, std::mt19937_64& rng);

}  // namespace bvm
