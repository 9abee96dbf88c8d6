#include "bvm/master.hpp"

#include <algorithm>

#include "bvm/errors.hpp"
#include "bvm/operators.hpp"
#include "bvm/parallel.hpp"

namespace bvm {

void VerificationLog::add(std::string name, int order, bool passed, std::string detail) {
  records.push_back({std::move(name), order, passed, std::move(detail)});
}

bool VerificationLog::all_passed() const { return failures() == 0; }

std::size_t VerificationLog::failures() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return !r.passed; }));
}

void VerificationLog::append(const VerificationLog& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
}

std::vector<Rational> StructureTensor::at(const TKey& key, std::size_t dim) const {
  TKey sorted = key;
  std::sort(sorted.begin(), sorted.end());
  auto it = entries.find(sorted);
  return it == entries.end() ? std::vector<Rational>(dim, 0) : it->second;
}

namespace {

HbarPoly one(const TablePtr& t) { return HbarPoly(Element::constant(t, 1)); }

// Describes the first nonzero term of a series that should vanish.
std::string residue(const TSeries& diff) {
  if (diff.is_zero()) return {};
  const auto& [k, c] = *diff.terms().begin();
  return "at t" + key_to_string(k) + ": " + c.to_string();
}

// Records a check; in strict mode a failure aborts with the offending term.
void expect_zero(VerificationLog& log, const std::string& name, int order, const TSeries& diff, bool strict) {
  bool ok = diff.is_zero();
  std::string detail = residue(diff);
  log.add(name, order, ok, detail);
  if (!ok && strict)
    throw Error(ErrorKind::InternalIdentityViolation, name + " (order " + std::to_string(order) + ") " + detail);
}

bool has_unit_index(const TKey& k) { return std::find(k.begin(), k.end(), 0) != k.end(); }

TSeries obstruction_formula(const MasterState& s, int n) {
  const TablePtr& t = s.ctx->table();
  TSeries acc(t);
  for (int k = 1; k <= n - 1; ++k) acc += Rational(k * (n - k)) * (s.theta[k] * s.theta[n - k]);
  for (int k = 2; k <= n - 1; ++k)
    acc -= Rational((n - k + 1) * (n - k)) * s.m_sharp[n - k + 1].apply(s.theta[k]);
  for (int k = 2; k <= n - 1; ++k) acc -= Rational(k * (k - 1)) * bv_bracket(s.theta[n - k], s.lambda[k]);
  return acc * ratio(1, n * (n - 1));
}

TSeries half_bracket_sum(const MasterState& s, int n) {
  TSeries acc(s.ctx->table());
  for (int k = 1; k <= n - 1; ++k) acc += bv_bracket(s.theta[k], s.theta[n - k]);
  return acc * ratio(1, 2);
}

void check_obstruction(const MasterState& s, VerificationLog& log, int n, const TSeries& mm, bool strict) {
  const Element& action = s.ctx->action();
  TSeries lhs = k_apply(action, mm);
  TSeries rhs = -half_bracket_sum(s, n).shifted(1);
  expect_zero(log, "K M_n = -(hbar/2) sum (Theta_k, Theta_n-k)", n, lhs - rhs, strict);
  // The unit direction of the quadratic term survives at n = 2: d0 M_2 = Theta_1.
  TSeries d0 = mm.partial(0);
  if (n == 2) d0 -= s.theta[1];
  expect_zero(log, n == 2 ? "d0 M_2 = Theta_1" : "d0 M_n = 0", n, d0, strict);
}

void check_unit_axioms(const MasterState& s, VerificationLog& log, int n, bool strict) {
  const std::size_t dim = s.dim();
  const auto& tensor = s.m[n];
  bool ok = true;
  std::string detail;
  if (n == 2) {
    for (std::size_t b = 0; b < dim && ok; ++b) {
      auto row = tensor.at({0, static_cast<int>(b)}, dim);
      for (std::size_t g = 0; g < dim; ++g)
        if (row[g] != Rational(g == b ? 1 : 0)) {
          ok = false;
          detail = "m_2(e0, e" + std::to_string(b) + ") != e" + std::to_string(b);
        }
    }
  } else {
    for (const auto& [k, row] : tensor.entries)
      if (has_unit_index(k) && std::any_of(row.begin(), row.end(), [](const Rational& c) { return c != 0; })) {
        ok = false;
        detail = "nonzero entry at " + key_to_string(k);
        break;
      }
  }
  log.add("unit axiom", n, ok, detail);
  if (!ok && strict) throw Error(ErrorKind::InternalIdentityViolation, "unit axiom (order " + std::to_string(n) + ") " + detail);
}

void check_descendant(const MasterState& s, VerificationLog& log, int n, bool strict) {
  const Element& action = s.ctx->action();
  TSeries lhs = k_apply(action, s.theta[n]);
  if (n >= 2) lhs += half_bracket_sum(s, n);
  expect_zero(log, "K Theta_n + 1/2 sum (Theta_k, Theta_n-k) = 0", n, lhs, strict);
}

void check_unit_derivative(const MasterState& s, VerificationLog& log, int n, bool strict) {
  TSeries d0 = s.theta[n].partial(0);
  if (n == 1) d0 -= TSeries::monomial(s.ctx->table(), {}, one(s.ctx->table()));
  expect_zero(log, n == 1 ? "d0 Theta_1 = 1" : "d0 Theta_n = 0", n, d0, strict);
}

}  // namespace

MasterState init(ContextPtr ctx, int truncation, const SolveOptions& options) {
  if (truncation < 1) throw Error(ErrorKind::Usage, "truncation order must be at least 1");
  MasterState s;
  s.ctx = ctx;
  s.truncation = truncation;
  s.order = 1;
  s.theta.assign(truncation + 1, TSeries(ctx->table()));
  s.lambda = s.theta;
  s.obstruction = s.theta;
  s.m_sharp.assign(truncation + 1, CouplingField{});
  s.m.assign(truncation + 1, StructureTensor{});
  const auto& h = ctx->h_basis();
  const TablePtr& t = ctx->table();

  if (options.theta1) {
    s.theta[1] = options.theta1->layer(1);
    if (s.theta[1] != *options.theta1)
      throw Error(ErrorKind::InvalidModel, "replacement Theta_1 must be linear in the couplings");
  } else {
    for (std::size_t g = 0; g < h.size(); ++g) {
      if (!bv_delta(h.reps[g]).is_zero())
        throw Error(ErrorKind::QuantumExtensionFails,
                    "basis element " + h.labels[g] + " is not Delta-closed and no corrected Theta_1 was supplied");
      s.theta[1].add({static_cast<int>(g)}, HbarPoly(h.reps[g]));
    }
  }
  // t-variables are all even here; odd couplings would need Koszul-signed keys.
  for (int g : h.ghosts)
    if (g % 2 != 0) throw Error(ErrorKind::OddCouplingUnsupported, "cohomology has odd ghost classes");
  s.m[1].arity = 1;
  check_unit_derivative(s, s.log, 1, true);
  check_descendant(s, s.log, 1, true);
  (void)t;
  return s;
}

TSeries build_obstruction(MasterState& s, int n) {
  if (n != s.order + 1 || n < 2) throw Error(ErrorKind::Usage, "obstruction requested out of order");
  TSeries mm = obstruction_formula(s, n);
  check_obstruction(s, s.log, n, mm, true);
  s.obstruction[n] = mm;
  return mm;
}

void extend(MasterState& s, const SolveOptions& options) {
  const int n = s.order + 1;
  if (n > s.truncation) throw Error(ErrorKind::Usage, "already at the truncation order");
  const ModelContext& ctx = *s.ctx;
  const TablePtr& t = ctx.table();
  const std::size_t dim = s.dim();

  TSeries mm = build_obstruction(s, n);
  TSeries classical = mm.hbar_part(0);
  std::vector<std::pair<TKey, Element>> work;
  for (const auto& [k, c] : classical.terms()) work.emplace_back(k, c.coeff(0));
  std::vector<Decomposition> parts(work.size());
  parallel_for(work.size(), [&](std::size_t i) {
    try {
      parts[i] = decompose(ctx, work[i].second, 0, options.backend);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " [order " + std::to_string(n) + ", t" +
                                key_to_string(work[i].first) + "]");
    }
  });

  CouplingField field;
  field.components.assign(dim, TSeries(t));
  StructureTensor tensor;
  tensor.arity = n;
  TSeries lam(t);
  for (std::size_t i = 0; i < work.size(); ++i) {
    const TKey& key = work[i].first;
    Element lambda = parts[i].lambda;
    if (options.lambda_perturbation && !has_unit_index(key)) {
      Element extra = options.lambda_perturbation(n, key, lambda);
      if (!extra.is_zero()) {
        if (!ctx.q(extra).is_zero())
          throw Error(ErrorKind::InvalidModel, "homotopy perturbation is not Q-closed at t" + key_to_string(key));
        lambda += extra;
      }
    }
    lam.add(key, HbarPoly(lambda));
    std::vector<Rational> row(dim, 0);
    bool nonzero = false;
    const Rational factor = multiplicity_factor(key);
    for (std::size_t g = 0; g < dim; ++g) {
      const Rational& c = parts[i].m[g];
      if (c == 0) continue;
      field.components[g].add(key, HbarPoly(Element::constant(t, c)));
      row[g] = factor * c;
      nonzero = true;
    }
    if (nonzero) tensor.entries.emplace(key, std::move(row));
  }
  s.m_sharp[n] = std::move(field);
  s.m[n] = std::move(tensor);
  s.lambda[n] = lam;

  TSeries hbar_theta = mm - s.m_sharp[n].apply(s.theta[1]) - k_apply(ctx.action(), lam);
  s.theta[n] = hbar_theta.divided_by_hbar();
  s.order = n;

  check_unit_derivative(s, s.log, n, true);
  check_descendant(s, s.log, n, true);
  check_unit_axioms(s, s.log, n, true);
}

MasterState solve(ContextPtr ctx, int truncation, const SolveOptions& options) {
  MasterState s = init(std::move(ctx), truncation, options);
  while (s.order < s.truncation) extend(s, options);
  return s;
}

StructureTensor reference_product_table(const ModelContext& ctx) {
  const auto& h = ctx.h_basis();
  const std::size_t dim = h.size();
  StructureTensor out;
  out.arity = 2;
  const bool isolated = ctx.spec().model_class == ModelClass::IsolatedSingularity;
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = a; b < dim; ++b) {
      Element prod = h.reps[a] * h.reps[b];
      std::vector<Rational> row(dim, 0);
      if (isolated) {
        Element rem = ctx.jacobian().normal_form(prod).remainder;
        for (const auto& [mono, c] : rem.terms())
          for (std::size_t g = 0; g < dim; ++g)
            if (h.reps[g].terms().begin()->first == mono) row[g] = c;
      } else {
        row = decompose(ctx, prod, h.ghosts[a] + h.ghosts[b], DecompositionBackend::Linear).m;
      }
      if (std::any_of(row.begin(), row.end(), [](const Rational& c) { return c != 0; }))
        out.entries.emplace(TKey{static_cast<int>(a), static_cast<int>(b)}, std::move(row));
    }
  }
  return out;
}

VerificationLog verify_state(const MasterState& s) {
  VerificationLog log;
  const ModelContext& ctx = *s.ctx;
  const Element& action = ctx.action();
  const TablePtr& t = ctx.table();
  for (int n = 1; n <= s.order; ++n) {
    check_unit_derivative(s, log, n, false);
    check_descendant(s, log, n, false);
    // Classical limit of the descendant equation.
    TSeries cl = q_apply(action, s.theta[n].hbar_part(0));
    for (int k = 1; k <= n - 1; ++k)
      cl += bv_bracket(s.theta[k].hbar_part(0), s.theta[n - k].hbar_part(0)) * ratio(1, 2);
    expect_zero(log, "Q Theta_n + 1/2 sum (Theta_k, Theta_n-k) = 0 at hbar = 0", n, cl.hbar_part(0), false);
    if (n == 1) continue;

    TSeries mm = obstruction_formula(s, n);
    check_obstruction(s, log, n, mm, false);
    expect_zero(log, "stored obstruction matches recomputation", n, mm - s.obstruction[n], false);
    TSeries defect = mm - s.m_sharp[n].apply(s.theta[1]) - k_apply(action, s.lambda[n]) - s.theta[n].shifted(1);
    expect_zero(log, "hbar Theta_n = M_n - m_n Theta_1 - K Lambda_n", n, defect, false);

    bool ghost_ok = true;
    for (const auto& [k, c] : s.lambda[n].terms())
      if (c.degree() > 0 || c.ghost() != std::optional<int>(-1)) ghost_ok = false;
    log.add("Lambda_n is hbar-free of ghost -1", n, ghost_ok);

    // The tensor and the vector field must describe the same map.
    bool consistent = true;
    for (const auto& [k, row] : s.m[n].entries)
      for (std::size_t g = 0; g < row.size(); ++g) {
        HbarPoly c = s.m_sharp[n].components[g].coefficient(k);
        if (multiplicity_factor(k) * c.coeff(0).constant_term() != row[g]) consistent = false;
      }
    log.add("tensor matches its coupling field", n, consistent);
    check_unit_axioms(s, log, n, false);
  }
  if (s.order >= 2) {
    StructureTensor ref = reference_product_table(ctx);
    bool same = true;
    std::string detail;
    for (std::size_t a = 0; a < s.dim() && same; ++a)
      for (std::size_t b = a; b < s.dim() && same; ++b) {
        TKey k{static_cast<int>(a), static_cast<int>(b)};
        if (s.m[2].at(k, s.dim()) != ref.at(k, s.dim())) {
          same = false;
          detail = "mismatch at " + key_to_string(k);
        }
      }
    log.add("m_2 equals the product table of the cohomology ring", 2, same, detail);
  }
  (void)t;
  return log;
}

VerificationLog verify_semiclassical(const MasterState& s) {
  VerificationLog log;
  expect_zero(log, "Delta Theta_1 = 0", 1, bv_delta(s.theta[1]), false);
  for (int n = 2; n <= s.order; ++n)
    expect_zero(log, "Theta_n = Delta Lambda_n", n, s.theta[n] - bv_delta(s.lambda[n]), false);
  return log;
}

HbarPoly extract_descendant_morphism(const MasterState& s, TKey indices) {
  std::sort(indices.begin(), indices.end());
  const int k = static_cast<int>(indices.size());
  if (k < 1 || k > s.order) throw Error(ErrorKind::Usage, "descendant component beyond the solved order");
  for (int i : indices)
    if (i < 0 || static_cast<std::size_t>(i) >= s.dim()) throw Error(ErrorKind::Usage, "coupling index out of range");
  return s.theta[k].coefficient(indices) * multiplicity_factor(indices);
}

TSeries total_theta(const MasterState& s) {
  TSeries out(s.ctx->table());
  for (int n = 1; n <= s.order; ++n) out += s.theta[n];
  return out;
}

}  // namespace bvm
