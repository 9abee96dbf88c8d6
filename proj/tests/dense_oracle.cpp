#include "dense_oracle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "bvm/matrix.hpp"
#include "bvm/operators.hpp"

namespace bvm::oracle {

namespace {

void put(Series& s, const Key& k, std::size_t power, const Element& e) {
  if (e.is_zero()) return;
  auto& v = s[k];
  if (v.size() <= power) v.resize(power + 1, Element(e.table()));
  v[power] += e;
}

void prune(Series& s) {
  for (auto it = s.begin(); it != s.end();) {
    auto& v = it->second;
    while (!v.empty() && v.back().is_zero()) v.pop_back();
    it = v.empty() ? s.erase(it) : std::next(it);
  }
}

Key merged(Key a, const Key& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

template <class Op>
Series pairwise(const Series& a, const Series& b, Op op) {
  Series out;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b)
      for (std::size_t i = 0; i < va.size(); ++i)
        for (std::size_t j = 0; j < vb.size(); ++j) put(out, merged(ka, kb), i + j, op(va[i], vb[j]));
  prune(out);
  return out;
}

Series scaled(const Series& a, const Rational& c) {
  Series out;
  for (const auto& [k, v] : a)
    for (std::size_t i = 0; i < v.size(); ++i) put(out, k, i, v[i] * c);
  prune(out);
  return out;
}

void accumulate(Series& acc, const Series& a, const Rational& c = 1) {
  for (const auto& [k, v] : a)
    for (std::size_t i = 0; i < v.size(); ++i) put(acc, k, i, v[i] * c);
  prune(acc);
}

// d/dt^g
Series derivative(const Series& a, int g) {
  Series out;
  for (const auto& [k, v] : a) {
    auto first = std::find(k.begin(), k.end(), g);
    if (first == k.end()) continue;
    long mult = std::count(k.begin(), k.end(), g);
    Key rest = k;
    rest.erase(rest.begin() + (first - k.begin()));
    for (std::size_t i = 0; i < v.size(); ++i) put(out, rest, i, v[i] * Rational(mult));
  }
  prune(out);
  return out;
}

Rational factorial_product(const Key& k) {
  Rational out = 1;
  std::size_t i = 0;
  while (i < k.size()) {
    std::size_t j = i;
    while (j < k.size() && k[j] == k[i]) ++j;
    for (std::size_t r = 2; r <= j - i; ++r) out *= static_cast<long>(r);
    i = j;
  }
  return out;
}

// Monomials of ghost -1 up to a total degree, enumerated directly.
std::vector<Monomial> candidates(const TablePtr& table, int max_degree) {
  std::vector<Monomial> out;
  Monomial cur(table->size());
  auto rec = [&](auto&& self, std::size_t v, int deg, int ghost) -> void {
    if (v == table->size()) {
      if (ghost == -1) out.push_back(cur);
      return;
    }
    int cap = (*table)[v].odd ? 1 : max_degree;
    for (int e = 0; e <= cap && deg + e <= max_degree; ++e) {
      cur.set(v, static_cast<std::uint16_t>(e));
      self(self, v + 1, deg + e, ghost + e * (*table)[v].ghost);
    }
    cur.set(v, 0);
  };
  rec(rec, 0, 0, 0);
  return out;
}

struct Split {
  std::vector<Rational> coords;
  Element lambda;
};

// target = sum_g coords[g] reps[g] + Q(lambda), solved as one dense system.
Split dense_split(const ModelContext& ctx, const Element& target) {
  const auto& table = ctx.table();
  const auto& reps = ctx.h_basis().reps;
  int deg = 0;
  for (const auto& [m, c] : target.terms()) deg = std::max(deg, m.total_degree());
  auto cand = candidates(table, deg + 2);
  std::vector<Element> cols(reps.begin(), reps.end());
  for (const auto& m : cand) cols.push_back(ctx.q(Element::monomial(table, m)));
  std::set<Monomial> rows_set;
  for (const auto& c : cols)
    for (const auto& [m, v] : c.terms()) rows_set.insert(m);
  for (const auto& [m, v] : target.terms()) rows_set.insert(m);
  std::vector<Monomial> rows(rows_set.begin(), rows_set.end());
  Matrix a(rows.size(), cols.size());
  std::vector<Rational> b(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) a(i, j) = cols[j].coefficient(rows[i]);
    b[i] = target.coefficient(rows[i]);
  }
  auto x = solve(a, b);
  if (!x) throw std::runtime_error("dense oracle: element is not in H + Im Q within the degree bound");
  Split out{std::vector<Rational>(x->begin(), x->begin() + static_cast<long>(reps.size())), Element(table)};
  for (std::size_t j = 0; j < cand.size(); ++j)
    if ((*x)[reps.size() + j] != 0) out.lambda += Element::monomial(table, cand[j], (*x)[reps.size() + j]);
  return out;
}

}  // namespace

DenseSolution dense_solve(const ModelContext& ctx, int order) {
  const auto& action = ctx.action();
  const auto& reps = ctx.h_basis().reps;
  const int dim = static_cast<int>(reps.size());
  DenseSolution s;
  s.order = order;
  s.tensors.resize(order + 1);
  s.theta.resize(order + 1);
  std::vector<Series> lambda(order + 1);
  // m_sharp[n][g]: coupling polynomial multiplying d/dt^g
  std::vector<std::vector<Series>> m_sharp(order + 1, std::vector<Series>(dim));
  for (int g = 0; g < dim; ++g) put(s.theta[1], {g}, 0, reps[g]);

  auto bracket = [](const Element& a, const Element& b) { return bv_bracket(a, b); };
  auto times = [](const Element& a, const Element& b) { return a * b; };
  auto apply_field = [&](int j, const Series& x) {
    Series out;
    for (int g = 0; g < dim; ++g) accumulate(out, pairwise(m_sharp[j][g], derivative(x, g), times));
    return out;
  };

  for (int n = 2; n <= order; ++n) {
    Series big;
    for (int k = 1; k <= n - 1; ++k) accumulate(big, pairwise(s.theta[k], s.theta[n - k], times), Rational(k * (n - k)));
    for (int k = 2; k <= n - 1; ++k)
      accumulate(big, apply_field(n - k + 1, s.theta[k]), Rational(-(n - k + 1) * (n - k)));
    for (int k = 2; k <= n - 1; ++k)
      accumulate(big, pairwise(s.theta[n - k], lambda[k], bracket), Rational(-k * (k - 1)));
    big = scaled(big, Rational(1) / Rational(n * (n - 1)));

    Series hbar_theta = big;
    for (const auto& [key, v] : big) {
      Split sp = dense_split(ctx, v[0]);
      lambda[n][key] = {sp.lambda};
      std::vector<Rational> row(dim);
      bool any = false;
      for (int g = 0; g < dim; ++g) {
        if (sp.coords[g] == 0) continue;
        put(m_sharp[n][g], key, 0, Element::constant(ctx.table(), sp.coords[g]));
        put(hbar_theta, key, 0, reps[g] * (-sp.coords[g]));
        row[g] = sp.coords[g] * factorial_product(key);
        any = true;
      }
      if (any) s.tensors[n][key] = row;
      // K lambda = Q lambda - hbar Delta lambda
      put(hbar_theta, key, 0, -ctx.q(sp.lambda));
      put(hbar_theta, key, 1, bv_delta(sp.lambda));
    }
    prune(lambda[n]);
    prune(hbar_theta);
    for (const auto& [key, v] : hbar_theta) {
      if (!v[0].is_zero()) throw std::runtime_error("dense oracle: hbar^0 part survives");
      for (std::size_t i = 1; i < v.size(); ++i) put(s.theta[n], key, i - 1, v[i]);
    }
    prune(s.theta[n]);
  }
  return s;
}

std::string golden_json(const std::string& model, const DenseSolution& s) {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["order"] = s.order;
  nlohmann::ordered_json tensors = nlohmann::ordered_json::array();
  for (int n = 2; n <= s.order; ++n) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& [k, row] : s.tensors[n]) {
      std::vector<std::string> vals;
      for (const auto& r : row) vals.push_back(r.get_str());
      entries.push_back({{"indices", k}, {"value", vals}});
    }
    tensors.push_back({{"arity", n}, {"entries", entries}});
  }
  j["tensors"] = tensors;
  std::vector<int> vanishing;
  for (int n = 2; n <= s.order; ++n)
    if (s.theta[n].empty()) vanishing.push_back(n);
  j["vanishing_theta"] = vanishing;
  return j.dump(2) + "\n";
}

}  // namespace bvm::oracle
