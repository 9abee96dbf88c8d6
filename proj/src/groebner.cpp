#include "bvm/groebner.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "bvm/errors.hpp"

namespace bvm {

using Poly = GroebnerBasis::Poly;
using Term = GroebnerBasis::Term;

int MonomialOrder::degree(const Exponents& e) const {
  if (kind == OrderKind::WeightedGradedReverseLex) {
    int d = 0;
    for (std::size_t i = 0; i < e.size(); ++i) d += weights.at(i) * e[i];
    return d;
  }
  return std::accumulate(e.begin(), e.end(), 0);
}

int MonomialOrder::compare(const Exponents& a, const Exponents& b) const {
  int da = degree(a), db = degree(b);
  if (da != db) return da < db ? -1 : 1;
  if (kind == OrderKind::GradedLex) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  }
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  return 0;
}

namespace {

bool exp_divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Exponents exp_lcm(const Exponents& a, const Exponents& b) {
  Exponents out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

Exponents exp_sub(const Exponents& a, const Exponents& b) {
  Exponents out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Exponents exp_add(const Exponents& a, const Exponents& b) {
  Exponents out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

bool coprime(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

struct Kernel {
  const MonomialOrder& order;

  // a + c * m * b, with both inputs sorted by decreasing order.
  Poly axpy(const Poly& a, const Rational& c, const Exponents& m, const Poly& b) const {
    Poly out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size()) {
        out.push_back(a[i++]);
        continue;
      }
      Exponents bj = exp_add(m, b[j].exps);
      int cmp = i == a.size() ? -1 : order.compare(a[i].exps, bj);
      if (cmp > 0) {
        out.push_back(a[i++]);
      } else if (cmp < 0) {
        out.push_back({std::move(bj), c * b[j].coef});
        ++j;
      } else {
        Rational v = a[i].coef + c * b[j].coef;
        if (v != 0) out.push_back({std::move(bj), std::move(v)});
        ++i;
        ++j;
      }
    }
    return out;
  }

  Poly add(const Poly& a, const Poly& b) const {
    if (b.empty()) return a;
    return axpy(a, 1, Exponents(b.front().exps.size(), 0), b);
  }

  Poly mul(const Poly& a, const Poly& b) const {
    Poly out;
    for (const auto& t : a) out = axpy(out, t.coef, t.exps, b);
    return out;
  }

  Poly scaled(const Poly& a, const Rational& c) const {
    Poly out = a;
    for (auto& t : out) t.coef *= c;
    return out;
  }

  void sort(Poly& p) const {
    std::sort(p.begin(), p.end(),
              [&](const Term& x, const Term& y) { return order.compare(x.exps, y.exps) > 0; });
  }
};

// Full reduction of p by `basis`; quotients (if given) are indexed like `basis`.
Poly reduce_by(const Kernel& k, const std::vector<Poly>& basis, Poly p, std::vector<Poly>* quotients) {
  Poly rem;
  while (!p.empty()) {
    const Term lt = p.front();
    bool reduced = false;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto& g = basis[j];
      if (!exp_divides(g.front().exps, lt.exps)) continue;
      Exponents m = exp_sub(lt.exps, g.front().exps);
      Rational c = lt.coef / g.front().coef;
      p = k.axpy(p, -c, m, g);
      if (quotients) (*quotients)[j] = k.add((*quotients)[j], Poly{{m, c}});
      reduced = true;
      break;
    }
    if (!reduced) {
      rem.push_back(lt);
      p.erase(p.begin());
    }
  }
  return rem;
}

// acc[i] += c * mult * row[i]
void add_rows(const Kernel& k, std::vector<Poly>& acc, const Rational& c, const Poly& mult,
              const std::vector<Poly>& row) {
  Poly scaled = k.scaled(mult, c);
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (!row[i].empty()) acc[i] = k.add(acc[i], k.mul(scaled, row[i]));
}

}  // namespace

GroebnerBasis::GroebnerBasis(TablePtr table, std::vector<std::size_t> ring_vars, MonomialOrder order,
                             std::vector<Element> generators)
    : table_(std::move(table)),
      ring_vars_(std::move(ring_vars)),
      order_(std::move(order)),
      generators_(std::move(generators)) {
  if (order_.kind == OrderKind::WeightedGradedReverseLex && order_.weights.size() != ring_vars_.size())
    throw Error(ErrorKind::InvalidModel, "weighted order needs one weight per ring variable");
  for (const auto& g : generators_) gens_.push_back(to_poly(g));
  run_buchberger();
  reduce_basis();
}

Exponents GroebnerBasis::to_exponents(const Monomial& m) const {
  Exponents e(ring_vars_.size());
  std::vector<bool> in_ring(table_->size(), false);
  for (std::size_t j = 0; j < ring_vars_.size(); ++j) {
    e[j] = m[ring_vars_[j]];
    in_ring[ring_vars_[j]] = true;
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0 || in_ring[i]) continue;
    if ((*table_)[i].odd)
      throw Error(ErrorKind::OddVariablePresent, "odd variable '" + (*table_)[i].name + "' in ring input");
    throw Error(ErrorKind::ModelMismatch, "variable '" + (*table_)[i].name + "' is outside the ring");
  }
  return e;
}

Monomial GroebnerBasis::to_monomial(const Exponents& e) const {
  Monomial m(table_->size());
  for (std::size_t j = 0; j < ring_vars_.size(); ++j) m.set(ring_vars_[j], static_cast<std::uint16_t>(e[j]));
  return m;
}

Poly GroebnerBasis::to_poly(const Element& e) const {
  if (e.table() && e.table() != table_)
    throw Error(ErrorKind::ModelMismatch, "element over a different variable table");
  Poly p;
  for (const auto& [m, c] : e.terms()) p.push_back({to_exponents(m), c});
  Kernel{order_}.sort(p);
  return p;
}

Element GroebnerBasis::to_element(const Poly& p) const {
  Element e(table_);
  for (const auto& t : p) e.add_term(to_monomial(t.exps), t.coef);
  return e;
}

Poly GroebnerBasis::reduce(Poly p, std::vector<Poly>* quotients) const {
  return reduce_by(Kernel{order_}, basis_, std::move(p), quotients);
}

void GroebnerBasis::run_buchberger() {
  Kernel k{order_};
  const std::size_t ngen = gens_.size();
  const Exponents zero(ring_vars_.size(), 0);
  auto unit_row = [&](std::size_t i) {
    std::vector<Poly> row(ngen);
    row[i] = Poly{{zero, 1}};
    return row;
  };
  for (std::size_t i = 0; i < ngen; ++i) {
    if (gens_[i].empty()) continue;
    basis_.push_back(gens_[i]);
    cof_.push_back(unit_row(i));
  }

  std::set<std::pair<std::size_t, std::size_t>> pending;
  for (std::size_t j = 0; j < basis_.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pending.insert({i, j});

  auto lcm_degree = [&](const std::pair<std::size_t, std::size_t>& pr) {
    return order_.degree(exp_lcm(basis_[pr.first].front().exps, basis_[pr.second].front().exps));
  };

  while (!pending.empty()) {
    auto best = std::min_element(pending.begin(), pending.end(), [&](const auto& a, const auto& b) {
      int da = lcm_degree(a), db = lcm_degree(b);
      return da != db ? da < db : a < b;
    });
    auto [i, j] = *best;
    pending.erase(best);
    const Exponents& li = basis_[i].front().exps;
    const Exponents& lj = basis_[j].front().exps;
    if (coprime(li, lj)) continue;
    Exponents lcm = exp_lcm(li, lj);
    bool chain = false;
    for (std::size_t m = 0; m < basis_.size() && !chain; ++m) {
      if (m == i || m == j) continue;
      if (!exp_divides(basis_[m].front().exps, lcm)) continue;
      auto key = [](std::size_t a, std::size_t b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
      chain = !pending.count(key(i, m)) && !pending.count(key(j, m));
    }
    if (chain) continue;

    Exponents mi = exp_sub(lcm, li), mj = exp_sub(lcm, lj);
    Rational ci = 1 / basis_[i].front().coef, cj = 1 / basis_[j].front().coef;
    Poly s = k.axpy(k.axpy(Poly{}, ci, mi, basis_[i]), -cj, mj, basis_[j]);
    std::vector<Poly> q(basis_.size());
    Poly r = reduce(s, &q);
    if (r.empty()) continue;

    std::vector<Poly> row(ngen);
    add_rows(k, row, ci, Poly{{mi, 1}}, cof_[i]);
    add_rows(k, row, -cj, Poly{{mj, 1}}, cof_[j]);
    for (std::size_t b = 0; b < q.size(); ++b)
      if (!q[b].empty()) add_rows(k, row, -1, q[b], cof_[b]);
    basis_.push_back(r);
    cof_.push_back(row);
    for (std::size_t a = 0; a + 1 < basis_.size(); ++a) pending.insert({a, basis_.size() - 1});
  }
}

void GroebnerBasis::reduce_basis() {
  Kernel k{order_};

  // Keep only elements whose leading monomial is minimal; ties resolved by position.
  std::vector<std::size_t> keep;
  for (std::size_t a = 0; a < basis_.size(); ++a) {
    bool redundant = false;
    for (std::size_t b = 0; b < basis_.size() && !redundant; ++b) {
      if (a == b || !exp_divides(basis_[b].front().exps, basis_[a].front().exps)) continue;
      bool equal = basis_[b].front().exps == basis_[a].front().exps;
      redundant = !equal || b < a;
    }
    if (!redundant) keep.push_back(a);
  }
  std::vector<Poly> basis;
  std::vector<std::vector<Poly>> cof;
  for (auto a : keep) {
    basis.push_back(basis_[a]);
    cof.push_back(cof_[a]);
  }
  basis_ = std::move(basis);
  cof_ = std::move(cof);

  // Inter-reduce the tails, tracking cofactors.
  for (std::size_t a = 0; a < basis_.size(); ++a) {
    std::vector<Poly> reducers;
    std::vector<std::size_t> idx;
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      if (b == a) continue;
      reducers.push_back(basis_[b]);
      idx.push_back(b);
    }
    std::vector<Poly> q(reducers.size());
    Poly tail(basis_[a].begin() + 1, basis_[a].end());
    Poly fresh{basis_[a].front()};
    for (auto& t : reduce_by(k, reducers, tail, &q)) fresh.push_back(std::move(t));
    for (std::size_t r = 0; r < idx.size(); ++r)
      if (!q[r].empty()) add_rows(k, cof_[a], -1, q[r], cof_[idx[r]]);
    basis_[a] = std::move(fresh);
  }

  for (std::size_t a = 0; a < basis_.size(); ++a) {
    Rational inv = 1 / basis_[a].front().coef;
    basis_[a] = k.scaled(basis_[a], inv);
    for (auto& p : cof_[a]) p = k.scaled(p, inv);
  }
  std::vector<std::size_t> perm(basis_.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](auto x, auto y) {
    return order_.compare(basis_[x].front().exps, basis_[y].front().exps) < 0;
  });
  std::vector<Poly> sorted;
  std::vector<std::vector<Poly>> sorted_cof;
  for (auto a : perm) {
    sorted.push_back(basis_[a]);
    sorted_cof.push_back(cof_[a]);
  }
  basis_ = std::move(sorted);
  cof_ = std::move(sorted_cof);
}

std::vector<Element> GroebnerBasis::basis() const {
  std::vector<Element> out;
  for (const auto& p : basis_) out.push_back(to_element(p));
  return out;
}

std::vector<std::vector<Element>> GroebnerBasis::cofactors() const {
  std::vector<std::vector<Element>> out;
  for (const auto& row : cof_) {
    std::vector<Element> r;
    for (const auto& p : row) r.push_back(to_element(p));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Monomial> GroebnerBasis::leading_monomials() const {
  std::vector<Monomial> out;
  for (const auto& p : basis_) out.push_back(to_monomial(p.front().exps));
  return out;
}

DivisionResult GroebnerBasis::normal_form(const Element& p) const {
  Kernel k{order_};
  std::vector<Poly> q(basis_.size());
  Poly rem = reduce(to_poly(p), &q);
  const Exponents zero(ring_vars_.size(), 0);
  std::vector<Poly> orig(gens_.size());
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    if (q[j].empty()) continue;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (cof_[j][i].empty()) continue;
      orig[i] = k.add(orig[i], k.mul(q[j], cof_[j][i]));
    }
  }
  DivisionResult out{to_element(rem), {}};
  for (const auto& o : orig) out.quotients.push_back(to_element(o));
  return out;
}

bool GroebnerBasis::contains_unit() const {
  for (const auto& p : basis_)
    if (order_.degree(p.front().exps) == 0 &&
        std::all_of(p.front().exps.begin(), p.front().exps.end(), [](int e) { return e == 0; }))
      return true;
  return false;
}

bool GroebnerBasis::is_zero_dimensional() const {
  for (std::size_t v = 0; v < ring_vars_.size(); ++v) {
    bool pure = false;
    for (const auto& p : basis_) {
      const auto& e = p.front().exps;
      bool only_v = true;
      for (std::size_t w = 0; w < e.size(); ++w)
        if (w != v && e[w] != 0) only_v = false;
      if (only_v && e[v] > 0) pure = true;
    }
    if (!pure) return false;
  }
  return true;
}

bool GroebnerBasis::is_homogeneous() const {
  for (const auto& g : gens_) {
    if (g.empty()) continue;
    int d = order_.degree(g.front().exps);
    for (const auto& t : g)
      if (order_.degree(t.exps) != d) return false;
  }
  return true;
}

std::vector<Monomial> GroebnerBasis::standard_monomials(std::optional<int> degree_cap) const {
  if (!degree_cap && !is_zero_dimensional())
    throw Error(ErrorKind::NotZeroDimensional, "staircase is infinite");
  std::vector<Exponents> leads;
  for (const auto& p : basis_) leads.push_back(p.front().exps);
  auto standard = [&](const Exponents& e) {
    return std::none_of(leads.begin(), leads.end(), [&](const auto& l) { return exp_divides(l, e); });
  };
  std::vector<Exponents> found;
  std::set<Exponents> seen;
  std::vector<Exponents> frontier;
  Exponents one(ring_vars_.size(), 0);
  if (standard(one)) {
    frontier.push_back(one);
    seen.insert(one);
  }
  while (!frontier.empty()) {
    Exponents e = frontier.back();
    frontier.pop_back();
    found.push_back(e);
    for (std::size_t v = 0; v < e.size(); ++v) {
      Exponents n = e;
      ++n[v];
      if (degree_cap && order_.degree(n) > *degree_cap) continue;
      if (seen.count(n) || !standard(n)) continue;
      seen.insert(n);
      frontier.push_back(n);
    }
  }
  std::sort(found.begin(), found.end(), [&](const auto& a, const auto& b) { return order_.compare(a, b) < 0; });
  std::vector<Monomial> out;
  for (const auto& e : found) out.push_back(to_monomial(e));
  return out;
}

std::vector<Monomial> GroebnerBasis::graded_slice(int degree) const {
  if (!is_homogeneous()) throw Error(ErrorKind::NonHomogeneousIdeal, "graded slice of a non-homogeneous ideal");
  std::vector<Exponents> leads;
  for (const auto& p : basis_) leads.push_back(p.front().exps);
  std::vector<int> w(ring_vars_.size(), 1);
  if (order_.kind == OrderKind::WeightedGradedReverseLex) w = order_.weights;
  for (int x : w)
    if (x <= 0) throw Error(ErrorKind::NonHomogeneousIdeal, "slice needs positive weights");

  std::vector<Exponents> found;
  Exponents cur(ring_vars_.size(), 0);
  // Enumerate exponent vectors of the requested weighted degree, pruning non-standard prefixes.
  auto rec = [&](auto&& self, std::size_t v, int remaining) -> void {
    if (v + 1 == cur.size()) {
      if (remaining % w[v] != 0) return;
      cur[v] = remaining / w[v];
      if (std::none_of(leads.begin(), leads.end(), [&](const auto& l) { return exp_divides(l, cur); }))
        found.push_back(cur);
      cur[v] = 0;
      return;
    }
    for (int e = 0; e * w[v] <= remaining; ++e) {
      cur[v] = e;
      if (std::any_of(leads.begin(), leads.end(), [&](const auto& l) { return exp_divides(l, cur); })) break;
      self(self, v + 1, remaining - e * w[v]);
    }
    cur[v] = 0;
  };
  if (cur.empty()) {
    if (degree == 0) found.push_back(cur);
  } else if (degree >= 0) {
    rec(rec, 0, degree);
  }
  std::sort(found.begin(), found.end(), [&](const auto& a, const auto& b) { return order_.compare(a, b) < 0; });
  std::vector<Monomial> out;
  for (const auto& e : found) out.push_back(to_monomial(e));
  return out;
}

GroebnerBasis buchberger(const std::vector<Element>& generators, const MonomialOrder& order,
                         std::optional<std::vector<std::size_t>> ring_vars) {
  TablePtr table;
  for (const auto& g : generators)
    if (g.table()) table = g.table();
  if (!table) throw Error(ErrorKind::InvalidModel, "generators carry no variable table");
  for (const auto& g : generators) {
    for (const auto& [m, c] : g.terms())
      if (m.parity(*table) || std::any_of(table->odd_indices().begin(), table->odd_indices().end(),
                                          [&](auto i) { return m[i] != 0; }))
        throw Error(ErrorKind::OddVariablePresent, "generator " + g.to_string() + " involves odd variables");
  }
  std::vector<std::size_t> vars = ring_vars ? *ring_vars
                                            : std::vector<std::size_t>(table->even_indices().begin(),
                                                                       table->even_indices().end());
  return GroebnerBasis(table, std::move(vars), order, generators);
}

}  // namespace bvm
