#include "bvm/model.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "bvm/errors.hpp"
#include "bvm/operators.hpp"
#include "bvm/poly_parser.hpp"
#include "bvm/sparse_solver.hpp"

namespace bvm {

namespace {

// Common weighted degree of all terms, nullopt if inhomogeneous. Zero gives 0.
std::optional<int> homogeneous_degree(const Element& e, const std::vector<int>& w) {
  std::optional<int> d;
  for (const auto& [m, c] : e.terms()) {
    int k = m.weighted_degree(w);
    if (d && *d != k) return std::nullopt;
    d = k;
  }
  return d.value_or(0);
}

TablePtr isolated_table(const std::vector<std::string>& coords, const std::vector<int>& coord_w,
                        const std::vector<int>& dual_w) {
  std::vector<Variable> vars;
  const std::size_t n = coords.size();
  for (std::size_t i = 0; i < n; ++i) vars.push_back({coords[i], 0, false, coord_w[i], n + i});
  for (std::size_t i = 0; i < n; ++i) vars.push_back({coords[i] + "_b", -1, true, dual_w[i], i});
  return make_table(std::move(vars));
}

}  // namespace

ModelSpec isolated_spec(std::string name, const std::vector<std::string>& coordinates,
                        const std::string& action_text, std::optional<std::vector<int>> weights) {
  std::vector<int> w = weights ? *weights : std::vector<int>(coordinates.size(), 1);
  if (w.size() != coordinates.size()) throw Error(ErrorKind::InvalidModel, "one weight per coordinate required");
  // The dual weights depend on the degree of the action, so parse once to learn it.
  TablePtr probe = isolated_table(coordinates, w, std::vector<int>(w.size(), 0));
  Element s = parse_polynomial(probe, action_text);
  std::vector<int> full(w);
  full.resize(probe->size(), 0);
  auto d = homogeneous_degree(s, full);
  std::vector<int> dual(w.size(), 0);
  if (d)
    for (std::size_t i = 0; i < w.size(); ++i) dual[i] = *d - w[i];
  TablePtr table = isolated_table(coordinates, w, dual);
  return isolated_spec(std::move(name), table, parse_polynomial(table, action_text), std::move(weights));
}

ModelSpec isolated_spec(std::string name, TablePtr table, Element action, std::optional<std::vector<int>> weights) {
  ModelSpec spec;
  spec.name = std::move(name);
  spec.model_class = ModelClass::IsolatedSingularity;
  spec.table = table;
  spec.action = std::move(action);
  for (const auto& p : table->pairs())
    if ((*table)[p.even].ghost == 0) spec.coordinates.push_back(p.even);
  std::vector<int> cw;
  if (weights) {
    if (weights->size() != spec.coordinates.size())
      throw Error(ErrorKind::InvalidModel, "one weight per coordinate required");
    cw = *weights;
    spec.order = MonomialOrder::weighted(cw);
  } else {
    cw.assign(spec.coordinates.size(), 1);
    spec.order = MonomialOrder::grevlex();
  }
  std::vector<int> full(table->size(), 0);
  for (std::size_t i = 0; i < spec.coordinates.size(); ++i) full[spec.coordinates[i]] = cw[i];
  auto d = homogeneous_degree(spec.action, full);
  if (!d && weights)
    throw Error(ErrorKind::InvalidModel, "action is not quasi-homogeneous for the given weights");
  if (d && *d > 0) {
    for (const auto& p : table->pairs()) full[p.odd] = *d - full[p.even];
    spec.gradings.push_back({"degree", full});
  }
  return spec;
}

TablePtr gauged_table(const std::vector<std::string>& coordinates) {
  const int n2 = static_cast<int>(coordinates.size());
  const std::size_t n = coordinates.size();
  std::vector<Variable> vars;
  // x^i, p, x^i_b, p_b, c, c_b
  for (std::size_t i = 0; i < n; ++i) vars.push_back({coordinates[i], 0, false, 1, n + 1 + i});
  vars.push_back({"p", 0, false, 1, 2 * n + 1});
  for (std::size_t i = 0; i < n; ++i) vars.push_back({coordinates[i] + "_b", -1, true, n2, i});
  vars.push_back({"p_b", -1, true, n2, n});
  vars.push_back({"c", 1, true, 0, 2 * n + 3});
  vars.push_back({"c_b", -2, false, n2 + 1, 2 * n + 2});
  return make_table(std::move(vars));
}

ModelSpec gauged_spec(std::string name, const std::vector<std::string>& coordinates, const std::string& g_text) {
  TablePtr table = gauged_table(coordinates);
  return gauged_spec(std::move(name), table, parse_polynomial(table, g_text));
}

ModelSpec gauged_spec(std::string name, TablePtr table, Element superpotential) {
  ModelSpec spec;
  spec.name = std::move(name);
  spec.model_class = ModelClass::GaugedWeightedHomogeneous;
  spec.table = table;
  const std::size_t n = (table->size() - 4) / 2;
  const int n2 = static_cast<int>(n);
  for (std::size_t i = 0; i < n; ++i) spec.coordinates.push_back(i);
  spec.p = n;
  spec.p_dual = 2 * n + 1;
  spec.c = 2 * n + 2;
  spec.c_dual = 2 * n + 3;
  spec.superpotential = std::move(superpotential);
  spec.order = MonomialOrder::grevlex();

  Element r(table);
  for (std::size_t i = 0; i < n; ++i) r += Element::variable(table, i) * Element::variable(table, n + 1 + i);
  r -= Rational(n2) * Element::variable(table, *spec.p) * Element::variable(table, *spec.p_dual);
  spec.symmetry = r;
  Element pvar = Element::variable(table, *spec.p);
  Element cvar = Element::variable(table, *spec.c);
  spec.action = pvar * spec.superpotential + cvar * r;

  std::vector<int> degree(table->size()), cstar(table->size());
  for (std::size_t i = 0; i < n; ++i) {
    degree[i] = 1;
    degree[n + 1 + i] = n2;
    cstar[i] = 1;
    cstar[n + 1 + i] = -1;
  }
  degree[*spec.p] = 1;
  degree[*spec.p_dual] = n2;
  degree[*spec.c] = 0;
  degree[*spec.c_dual] = n2 + 1;
  cstar[*spec.p] = -n2;
  cstar[*spec.p_dual] = n2;
  cstar[*spec.c] = 0;
  cstar[*spec.c_dual] = 0;
  spec.gradings.push_back({"degree", degree});
  spec.gradings.push_back({"cstar", cstar});
  return spec;
}

// Per-slice linear-algebra data: Q images of candidate homotopies next to the
// H-basis columns, in a reusable echelon form.
struct SliceSolver {
  std::map<Monomial, int> rows;
  std::vector<std::size_t> h_indices;
  std::vector<Monomial> candidates;
  SparseEchelon echelon;

  SparseVector vectorize(const Element& e) {
    SparseVector v;
    for (const auto& [m, c] : e.terms()) {
      auto [it, inserted] = rows.try_emplace(m, static_cast<int>(rows.size()));
      v.emplace_back(it->second, c);
    }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  }
  // Row lookup without growing the map; nullopt when e touches an unseen monomial.
  std::optional<SparseVector> lookup(const Element& e) const {
    SparseVector v;
    for (const auto& [m, c] : e.terms()) {
      auto it = rows.find(m);
      if (it == rows.end()) return std::nullopt;
      v.emplace_back(it->second, c);
    }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  }
};

struct SliceCache {
  std::mutex mu;
  std::map<std::pair<int, std::vector<int>>, std::shared_ptr<SliceSolver>> slices;
};

ModelContext::ModelContext(ModelSpec spec) : spec_(std::move(spec)), cache_(std::make_shared<SliceCache>()) {
  validate();
  compute_h_basis();
}

Element ModelContext::q(const Element& a) const { return q_apply(spec_.action, a); }

std::vector<int> ModelContext::multidegree(const Monomial& m) const {
  std::vector<int> out;
  for (const auto& g : spec_.gradings) out.push_back(m.weighted_degree(g.weights));
  return out;
}

std::size_t ModelContext::socle_index() const { return h_.size() - 1; }

void ModelContext::validate() {
  const auto& table = *spec_.table;
  const Element& s = spec_.action;
  if (s.table() != spec_.table) throw Error(ErrorKind::ModelMismatch, "action uses a different variable table");
  if (s.ghost() != std::optional<int>(0)) throw Error(ErrorKind::InvalidModel, "action must have ghost number 0");
  for (const auto& [m, c] : s.terms())
    if (m.parity(table)) throw Error(ErrorKind::InvalidModel, "action must be even");

  Element ds = bv_delta(s);
  if (!ds.is_zero()) throw Error(ErrorKind::DeltaSNonzero, "Delta S = " + ds.to_string());
  Element ss = bv_bracket(s, s);
  if (!ss.is_zero()) throw Error(ErrorKind::MasterEquationFails, "(S,S) = " + ss.to_string());

  for (std::size_t k = 0; k < spec_.gradings.size(); ++k) {
    const auto& g = spec_.gradings[k];
    if (g.weights.size() != table.size())
      throw Error(ErrorKind::InvalidModel, "grading '" + g.name + "' has the wrong length");
    auto d = homogeneous_degree(s, g.weights);
    if (!d) throw Error(ErrorKind::InvalidModel, "action is not homogeneous for grading '" + g.name + "'");
    for (const auto& p : table.pairs())
      if (g.weights[p.even] + g.weights[p.odd] != *d)
        throw Error(ErrorKind::InvalidModel, "grading '" + g.name + "' is not preserved by Q");
    if (k == 0)
      for (auto i : table.even_indices())
        if (g.weights[i] <= 0)
          throw Error(ErrorKind::InvalidModel, "primary grading must be positive on even variables");
  }

  std::vector<Element> gens;
  if (spec_.model_class == ModelClass::IsolatedSingularity) {
    if (spec_.coordinates.empty()) throw Error(ErrorKind::InvalidModel, "no coordinates");
    for (auto i : spec_.coordinates) gens.push_back(derivative(s, i));
  } else {
    const Element& g = spec_.superpotential;
    std::vector<int> ones(table.size(), 0);
    for (auto i : spec_.coordinates) ones[i] = 1;
    auto d = homogeneous_degree(g, ones);
    for (const auto& [m, c] : g.terms())
      for (std::size_t v = 0; v < table.size(); ++v)
        if (m[v] && ones[v] == 0) throw Error(ErrorKind::InvalidModel, "superpotential must only involve x^i");
    if (!d || *d != static_cast<int>(spec_.coordinates.size()))
      throw Error(ErrorKind::InvalidModel, "superpotential must be homogeneous of degree equal to the number of x^i");
    for (auto i : spec_.coordinates) gens.push_back(derivative(g, i));
    Element qcb = q(Element::variable(spec_.table, *spec_.c_dual));
    if (qcb != spec_.symmetry)
      throw Error(ErrorKind::InternalIdentityViolation, "Q(c_b) = " + qcb.to_string() + " differs from R");
    if (!q(spec_.symmetry).is_zero()) throw Error(ErrorKind::InternalIdentityViolation, "Q(R) != 0");
  }
  jacobian_ = std::make_unique<GroebnerBasis>(
      buchberger(gens, spec_.order, std::vector<std::size_t>(spec_.coordinates.begin(), spec_.coordinates.end())));
  if (jacobian_->contains_unit()) throw Error(ErrorKind::UnitInIdeal, "Jacobian ideal is the whole ring");
  if (!jacobian_->is_zero_dimensional())
    throw Error(ErrorKind::NonIsolatedSingularity, "Jacobian ideal is not zero-dimensional");
}

void ModelContext::compute_h_basis() {
  const auto& table = spec_.table;
  std::vector<Element> reps;
  if (spec_.model_class == ModelClass::IsolatedSingularity) {
    for (const auto& m : jacobian_->standard_monomials()) reps.push_back(Element::monomial(table, m));
  } else {
    const int n = static_cast<int>(spec_.coordinates.size()) - 2;
    Element pvar = Element::variable(table, *spec_.p);
    Element ppow = Element::constant(table, 1);
    for (int k = 0; k <= n; ++k) {
      for (const auto& m : jacobian_->graded_slice(k * (n + 2))) reps.push_back(ppow * Element::monomial(table, m));
      ppow = ppow * pvar;
    }
  }
  for (auto& r : reps) {
    if (!q(r).is_zero()) throw Error(ErrorKind::InternalIdentityViolation, "representative " + r.to_string() + " is not closed");
    h_.ghosts.push_back(*r.ghost());
    h_.labels.push_back(r.to_string());
    h_.reps.push_back(std::move(r));
  }
  if (h_.reps.empty() || h_.reps.front() != Element::constant(table, 1))
    throw Error(ErrorKind::InternalIdentityViolation, "first basis element is not the unit");
}

ContextPtr build_model(ModelSpec spec) { return std::make_shared<const ModelContext>(std::move(spec)); }

const HBasis& h_basis(const ModelContext& ctx) { return ctx.h_basis(); }

std::vector<Monomial> bounded_monomials(const TablePtr& table, int ghost, const std::vector<int>& weights,
                                        int max_degree, bool exact_degree) {
  const auto& t = *table;
  auto odd = t.odd_indices();
  auto even = t.even_indices();
  for (auto i : even)
    if (weights[i] <= 0) throw Error(ErrorKind::UnboundedSlice, "non-positive weight on an even variable");
  std::vector<Monomial> out;
  Monomial cur(t.size());
  for (std::size_t mask = 0; mask < (std::size_t{1} << odd.size()); ++mask) {
    int deg = 0, gh = 0;
    for (std::size_t k = 0; k < odd.size(); ++k) {
      bool on = (mask >> k) & 1;
      cur.set(odd[k], on ? 1 : 0);
      if (on) {
        deg += weights[odd[k]];
        gh += t[odd[k]].ghost;
      }
    }
    auto rec = [&](auto&& self, std::size_t k, int d, int g) -> void {
      if (k == even.size()) {
        if (g == ghost && (!exact_degree || d == max_degree)) out.push_back(cur);
        return;
      }
      std::size_t v = even[k];
      for (int e = 0; d + e * weights[v] <= max_degree; ++e) {
        cur.set(v, static_cast<std::uint16_t>(e));
        self(self, k + 1, d + e * weights[v], g + e * t[v].ghost);
      }
      cur.set(v, 0);
    };
    if (deg <= max_degree) rec(rec, 0, deg, gh);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Monomial> slice_monomials(const ModelContext& ctx, int ghost, const std::vector<int>& multidegree) {
  if (!ctx.graded()) throw Error(ErrorKind::UnboundedSlice, "model carries no grading");
  std::vector<Monomial> out;
  for (auto& m : bounded_monomials(ctx.table(), ghost, ctx.gradings()[0].weights, multidegree[0], true))
    if (ctx.multidegree(m) == multidegree) out.push_back(std::move(m));
  return out;
}

namespace {

std::shared_ptr<SliceSolver> make_slice_solver(const ModelContext& ctx, int ghost, const std::vector<Monomial>& cands,
                                               const std::function<bool(std::size_t)>& h_filter) {
  auto solver = std::make_shared<SliceSolver>();
  const auto& h = ctx.h_basis();
  int id = 0;
  for (std::size_t a = 0; a < h.size(); ++a) {
    if (h.ghosts[a] != ghost || !h_filter(a)) continue;
    solver->h_indices.push_back(a);
    solver->echelon.insert(id++, solver->vectorize(h.reps[a]));
  }
  for (const auto& m : cands) {
    solver->candidates.push_back(m);
    solver->echelon.insert(id++, solver->vectorize(ctx.q(Element::monomial(ctx.table(), m))));
  }
  return solver;
}

// Solves target = sum m O + Q(lambda) inside one slice; false if not in the span.
bool solve_in_slice(const ModelContext& ctx, const SliceSolver& solver, const Element& target,
                    std::vector<Rational>& m, Element& lambda) {
  if (target.is_zero()) return true;
  auto v = solver.lookup(target);
  if (!v) return false;
  auto comb = solver.echelon.solve(*v);
  if (!comb) return false;
  const int nh = static_cast<int>(solver.h_indices.size());
  for (const auto& [id, c] : *comb) {
    if (id < nh) {
      m[solver.h_indices[id]] += c;
    } else {
      lambda.add_term(solver.candidates[id - nh], c);
    }
  }
  (void)ctx;
  return true;
}

int max_standard_degree(const Element& e) {
  int d = 0;
  for (const auto& [m, c] : e.terms()) d = std::max(d, m.total_degree());
  return d;
}

Decomposition decompose_linear(const ModelContext& ctx, const Element& target, int ghost) {
  SliceCache* cache = &ctx.slice_cache();
  const auto& h = ctx.h_basis();
  Decomposition out{std::vector<Rational>(h.size(), 0), Element(ctx.table()), false};
  if (ctx.graded()) {
    std::map<std::vector<int>, Element> parts;
    for (const auto& [mono, c] : target.terms()) {
      auto md = ctx.multidegree(mono);
      auto [it, ins] = parts.try_emplace(md, Element(ctx.table()));
      it->second.add_term(mono, c);
    }
    for (const auto& [md, part] : parts) {
      std::shared_ptr<SliceSolver> solver;
      {
        std::lock_guard lock(cache->mu);
        auto& slot = cache->slices[{ghost, md}];
        if (!slot) {
          auto cands = slice_monomials(ctx, ghost - 1, md);
          slot = make_slice_solver(ctx, ghost, cands, [&](std::size_t a) {
            return ctx.multidegree(h.reps[a].terms().begin()->first) == md;
          });
        }
        solver = slot;
      }
      if (!solve_in_slice(ctx, *solver, part, out.m, out.lambda))
        throw Error(ErrorKind::InternalIdentityViolation,
                    "closed element not decomposable in its slice: " + part.to_string());
    }
    return out;
  }
  const int d0 = max_standard_degree(target);
  std::vector<int> ones(ctx.table()->size(), 1);
  for (int d = std::max(d0, 1); d <= d0 + ctx.spec().degree_cap; ++d) {
    std::shared_ptr<SliceSolver> solver;
    {
      std::lock_guard lock(cache->mu);
      // Filtered slices are keyed by a negative marker to keep them apart from graded ones.
      auto& slot = cache->slices[{ghost, {-1, d}}];
      if (!slot) {
        auto cands = bounded_monomials(ctx.table(), ghost - 1, ones, d, false);
        slot = make_slice_solver(ctx, ghost, cands, [](std::size_t) { return true; });
      }
      solver = slot;
    }
    std::vector<Rational> m(h.size(), 0);
    Element lambda(ctx.table());
    if (solve_in_slice(ctx, *solver, target, m, lambda)) {
      out.m = std::move(m);
      out.lambda = std::move(lambda);
      return out;
    }
  }
  throw Error(ErrorKind::UnboundedSlice, "no decomposition within the degree cap for " + target.to_string());
}

Decomposition decompose_groebner(const ModelContext& ctx, const Element& target) {
  const auto& spec = ctx.spec();
  const auto& h = ctx.h_basis();
  DivisionResult div = ctx.jacobian().normal_form(target);
  Decomposition out{std::vector<Rational>(h.size(), 0), Element(ctx.table()), false};
  for (const auto& [mono, c] : div.remainder.terms()) {
    bool placed = false;
    for (std::size_t a = 0; a < h.size() && !placed; ++a) {
      if (h.reps[a].terms().begin()->first == mono) {
        out.m[a] = c;
        placed = true;
      }
    }
    if (!placed) throw Error(ErrorKind::InternalIdentityViolation, "normal form outside the standard monomials");
  }
  for (std::size_t i = 0; i < spec.coordinates.size(); ++i) {
    std::size_t dual = *(*spec.table)[spec.coordinates[i]].partner;
    out.lambda += div.quotients[i] * Element::variable(ctx.table(), dual);
  }
  return out;
}

}  // namespace

Decomposition decompose(const ModelContext& ctx, const Element& closed, int expected_ghost,
                        DecompositionBackend backend) {
  if (closed.table() && closed.table() != ctx.table())
    throw Error(ErrorKind::ModelMismatch, "element over a different variable table");
  auto g = closed.ghost();
  if (!closed.is_zero() && (!g || *g != expected_ghost))
    throw Error(ErrorKind::InvalidModel, "element is not homogeneous of ghost " + std::to_string(expected_ghost));
  Element qm = ctx.q(closed);
  if (!qm.is_zero()) throw Error(ErrorKind::NotClosed, "Q M = " + qm.to_string());

  const bool groebner_ok = ctx.spec().model_class == ModelClass::IsolatedSingularity && expected_ghost == 0;
  if (backend == DecompositionBackend::Groebner && !groebner_ok)
    throw Error(ErrorKind::InvalidModel, "Groebner backend only applies to ghost-0 isolated-singularity elements");
  const bool use_groebner = backend == DecompositionBackend::Groebner || (backend == DecompositionBackend::Auto && groebner_ok);

  Decomposition out = use_groebner ? decompose_groebner(ctx, closed) : decompose_linear(ctx, closed, expected_ghost);
  Element rebuilt = ctx.q(out.lambda);
  for (std::size_t a = 0; a < out.m.size(); ++a)
    if (out.m[a] != 0) rebuilt += out.m[a] * ctx.h_basis().reps[a];
  if (rebuilt != (closed.table() ? closed : Element(ctx.table())))
    throw Error(ErrorKind::InternalIdentityViolation, "decomposition does not reconstruct its input");
  out.verified = true;
  return out;
}

ExactnessWitness is_exact(const ModelContext& ctx, const Element& closed) {
  if (closed.is_zero()) return {true, Element(ctx.table())};
  auto g = closed.ghost();
  if (!g) throw Error(ErrorKind::InvalidModel, "mixed ghost element");
  Decomposition d = decompose(ctx, closed, *g);
  bool exact = std::all_of(d.m.begin(), d.m.end(), [](const Rational& c) { return c == 0; });
  return {exact, exact ? d.lambda : Element(ctx.table())};
}

std::vector<SliceCohomology> slice_cohomology(const ModelContext& ctx, int ghost_lo, int ghost_hi, int max_degree) {
  if (!ctx.graded()) throw Error(ErrorKind::UnboundedSlice, "model carries no grading");
  const auto& primary = ctx.gradings()[0].weights;
  const auto& h = ctx.h_basis();
  std::vector<SliceCohomology> out;
  for (int d = 0; d <= max_degree; ++d) {
    std::map<std::pair<int, std::vector<int>>, std::vector<Monomial>> slices;
    for (int g = ghost_lo - 1; g <= ghost_hi + 1; ++g)
      for (auto& m : bounded_monomials(ctx.table(), g, primary, d, true)) slices[{g, ctx.multidegree(m)}].push_back(m);
    auto rank_of_q = [&](int g, const std::vector<int>& md) -> std::size_t {
      auto it = slices.find({g, md});
      if (it == slices.end()) return 0;
      SliceSolver s;
      s.echelon = SparseEchelon(false);
      int id = 0;
      for (const auto& m : it->second) s.echelon.insert(id++, s.vectorize(ctx.q(Element::monomial(ctx.table(), m))));
      return s.echelon.rank();
    };
    std::set<std::vector<int>> mds;
    for (const auto& [key, ms] : slices) mds.insert(key.second);
    for (int g = ghost_lo; g <= ghost_hi; ++g) {
      for (const auto& md : mds) {
        auto it = slices.find({g, md});
        std::size_t n = it == slices.end() ? 0 : it->second.size();
        std::size_t expected = 0;
        for (std::size_t a = 0; a < h.size(); ++a)
          if (h.ghosts[a] == g && ctx.multidegree(h.reps[a].terms().begin()->first) == md) ++expected;
        if (n == 0 && expected == 0) continue;
        std::size_t dim = n - rank_of_q(g, md) - rank_of_q(g - 1, md);
        out.push_back({g, md, dim, expected});
      }
    }
  }
  return out;
}

Element random_exact(const ModelContext& ctx, int ghost, const Element& like, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::vector<std::vector<Monomial>> pools;
  if (ctx.graded()) {
    std::set<std::vector<int>> mds;
    for (const auto& [m, c] : like.terms()) mds.insert(ctx.multidegree(m));
    for (const auto& md : mds) pools.push_back(slice_monomials(ctx, ghost - 1, md));
  } else {
    std::vector<int> ones(ctx.table()->size(), 1);
    pools.push_back(bounded_monomials(ctx.table(), ghost - 1, ones, max_standard_degree(like), false));
  }
  Element mu(ctx.table());
  for (const auto& pool : pools) {
    if (pool.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int k = 0; k < 3; ++k) mu.add_term(pool[pick(rng)], coef(rng));
  }
  return ctx.q(mu);
}

}  // namespace bvm
