#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bvm/model.hpp"
#include "bvm/tseries.hpp"

namespace bvm {

struct CheckRecord {
  std::string name;
  int order = 0;
  bool passed = true;
  std::string detail;
};

struct VerificationLog {
  std::vector<CheckRecord> records;

  void add(std::string name, int order, bool passed, std::string detail = {});
  bool all_passed() const;
  std::size_t failures() const;
  void append(const VerificationLog& other);
};

// Symmetric tensor m_{a1..an}^gamma, keyed by sorted index tuple; zero rows omitted.
struct StructureTensor {
  int arity = 0;
  std::map<TKey, std::vector<Rational>> entries;

  std::vector<Rational> at(const TKey& key, std::size_t dim) const;
};

struct SolveOptions {
  DecompositionBackend backend = DecompositionBackend::Auto;
  // Extra Q-closed ghost -1 element added to the homotopy at (order, key).
  // Only consulted for keys free of the unit index.
  std::function<Element(int, const TKey&, const Element&)> lambda_perturbation;
  // Replacement first-order deformation for models whose basis is not Delta-closed.
  std::optional<TSeries> theta1;
};

struct MasterState {
  ContextPtr ctx;
  int truncation = 0;
  int order = 0;
  // Index n holds the t-length-n layer; slot 0 is unused.
  std::vector<TSeries> theta;
  std::vector<TSeries> lambda;
  std::vector<TSeries> obstruction;
  std::vector<CouplingField> m_sharp;
  std::vector<StructureTensor> m;
  VerificationLog log;

  std::size_t dim() const { return ctx->h_basis().size(); }
};

MasterState init(ContextPtr ctx, int truncation, const SolveOptions& options = {});
// Builds the order-n obstruction from the lower orders and checks its two defining identities.
TSeries build_obstruction(MasterState& state, int n);
void extend(MasterState& state, const SolveOptions& options = {});
MasterState solve(ContextPtr ctx, int truncation, const SolveOptions& options = {});

// Re-derives every identity from the stored data; never throws on a failed check.
VerificationLog verify_state(const MasterState& state);
// Delta Theta_1 = 0 and Theta_n = Delta Lambda_n.
VerificationLog verify_semiclassical(const MasterState& state);

// Tensor component of Theta_k at a multi-index (k = indices.size()).
HbarPoly extract_descendant_morphism(const MasterState& state, TKey indices);

// Full deformation Theta_1 + ... + Theta_order.
TSeries total_theta(const MasterState& state);

// Jacobian-ring style product table recomputed from products of representatives.
StructureTensor reference_product_table(const ModelContext& ctx);

}  // namespace bvm
