#include "bvm/correlators.hpp"

#include <algorithm>
#include <functional>

#include "bvm/errors.hpp"
#include "bvm/operators.hpp"

namespace bvm {

LaurentPoly::LaurentPoly(const Rational& c, int power) { add(power, c); }

LaurentPoly LaurentPoly::from_scalar(const HbarPoly& p) {
  LaurentPoly out;
  for (int i = 0; i <= p.degree(); ++i) {
    const Element& c = p.coefficients()[i];
    if (!c.is_constant()) throw Error(ErrorKind::InternalIdentityViolation, "expected a scalar, got " + c.to_string());
    out.add(i, c.constant_term());
  }
  return out;
}

Rational LaurentPoly::coeff(int power) const {
  auto it = terms_.find(power);
  return it == terms_.end() ? Rational(0) : it->second;
}

void LaurentPoly::add(int power, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(power, 0);
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (const auto& [p, c] : o.terms_) add(p, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (const auto& [p, c] : o.terms_) add(p, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly out;
  for (const auto& [pa, ca] : a.terms_)
    for (const auto& [pb, cb] : b.terms_) out.add(pa + pb, ca * cb);
  return out;
}

LaurentPoly operator*(const Rational& c, const LaurentPoly& a) {
  LaurentPoly out;
  for (const auto& [p, v] : a.terms_) out.add(p, c * v);
  return out;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly out;
  for (const auto& [p, c] : terms_) out.terms_.emplace(p + k, c);
  return out;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [p, c] : terms_) {
    std::string mag = bvm::to_string(Rational(abs(c)));
    bool neg = c < 0;
    std::string term;
    if (p == 0) {
      term = mag;
    } else {
      std::string h = p == 1 ? "hbar" : "hbar^" + std::to_string(p);
      term = mag == "1" ? h : mag + "*" + h;
    }
    if (s.empty()) {
      s = (neg ? "-" : "") + term;
    } else {
      s += (neg ? " - " : " + ") + term;
    }
  }
  return s;
}

LaurentPoly minus_hbar_pow(int k) { return LaurentPoly(Rational(k % 2 == 0 ? 1 : -1), k); }

void add_to(ScalarSeries& s, const TKey& key, const LaurentPoly& v) {
  if (v.is_zero()) return;
  auto [it, inserted] = s.try_emplace(key);
  it->second += v;
  if (it->second.is_zero()) s.erase(it);
}

ScalarSeries partial(const ScalarSeries& s, int index) {
  ScalarSeries out;
  for (const auto& [k, v] : s) {
    long mult = std::count(k.begin(), k.end(), index);
    if (mult == 0) continue;
    TKey rest = k;
    rest.erase(std::find(rest.begin(), rest.end(), index));
    add_to(out, rest, Rational(mult) * v);
  }
  return out;
}

ExpectationVector ExpectationVector::socle(const ModelContext& ctx) {
  ExpectationVector v;
  v.values.assign(ctx.h_basis().size(), LaurentPoly());
  v.values[ctx.socle_index()] = LaurentPoly(1);
  return v;
}

ExpectationVector ExpectationVector::from_config(const ModelContext& ctx) {
  const auto& cfg = ctx.spec().expectation;
  if (cfg.use_socle()) return socle(ctx);
  if (cfg.values.size() != ctx.h_basis().size())
    throw Error(ErrorKind::InvalidModel, "expectation vector needs one entry per basis element");
  ExpectationVector v;
  for (const auto& poly : cfg.values) {
    LaurentPoly lp;
    for (std::size_t i = 0; i < poly.size(); ++i) lp.add(static_cast<int>(i), poly[i]);
    v.values.push_back(std::move(lp));
  }
  return v;
}

namespace {

HbarPoly scalar_hbar(const TablePtr& t, const LaurentPoly& c) {
  HbarPoly out(t);
  for (const auto& [p, v] : c.terms()) {
    if (p < 0) throw Error(ErrorKind::InternalIdentityViolation, "negative hbar power inside the chain algebra");
    out.add(p, Element::constant(t, v));
  }
  return out;
}

void expect(VerificationLog* log, const std::string& name, int order, bool ok, const std::string& detail = {}) {
  if (log) log->add(name, order, ok, detail);
}

std::string first_key(const TSeries& s) { return s.is_zero() ? "" : "at t" + key_to_string(s.terms().begin()->first); }

}  // namespace

std::vector<TSeries> omega_tower(const MasterState& s, VerificationLog* log) {
  const TablePtr& t = s.ctx->table();
  std::vector<TSeries> out(s.order + 1, TSeries(t));
  for (int n = 1; n <= s.order; ++n) {
    if (n == 1) {
      out[1] = s.theta[1];
    } else {
      TSeries acc = s.theta[n].times(scalar_hbar(t, minus_hbar_pow(n - 1)));
      TSeries sum(t);
      for (int j = 1; j <= n - 1; ++j)
        sum += Rational(j) * (s.theta[j] * out[n - j]).times(scalar_hbar(t, minus_hbar_pow(j - 1)));
      out[n] = acc + sum * ratio(1, n);
    }
    TSeries k = k_apply(s.ctx->action(), out[n]);
    expect(log, "K Omega_n = 0", n, k.is_zero(), first_key(k));
    TSeries d0 = out[n].partial(0) - (n == 1 ? TSeries::monomial(t, {}, HbarPoly(Element::constant(t, 1))) : out[n - 1]);
    expect(log, n == 1 ? "d0 Omega_1 = 1" : "d0 Omega_n = Omega_n-1", n, d0.is_zero(), first_key(d0));
  }
  return out;
}

TSeries omega(const MasterState& s, int n) {
  if (n < 1 || n > s.order) throw Error(ErrorKind::Usage, "Omega requested beyond the solved order");
  return omega_tower(s)[n];
}

std::vector<CouplingField> p_sharp_tower(const MasterState& s, VerificationLog* log) {
  const TablePtr& t = s.ctx->table();
  std::vector<CouplingField> p(s.order + 1);
  if (s.order >= 1) p[1] = coupling_identity(t, s.dim());
  for (int n = 2; n <= s.order; ++n) {
    p[n] = s.m_sharp[n].scaled(scalar_hbar(t, minus_hbar_pow(n - 2)));
    for (int k = 2; k <= n - 1; ++k) {
      LaurentPoly c = ratio(k * (k - 1), n * (n - 1)) * minus_hbar_pow(k - 2);
      p[n] += s.m_sharp[k].after(p[n + 1 - k]).scaled(scalar_hbar(t, c));
    }
    bool ok = true;
    std::string detail;
    for (std::size_t g = 0; g < s.dim() && ok; ++g) {
      TSeries diff = p[n].components[g].partial(0) - p[n - 1].components[g];
      if (!diff.is_zero()) {
        ok = false;
        detail = "component " + std::to_string(g) + " " + first_key(diff);
      }
    }
    expect(log, "d0 P_n = P_n-1", n, ok, detail);
  }
  return p;
}

CouplingField p_sharp(const MasterState& s, int n) {
  if (n < 1 || n > s.order) throw Error(ErrorKind::Usage, "p-tensor requested beyond the solved order");
  return p_sharp_tower(s)[n];
}

CouplingField p3_closed_form(const MasterState& s) {
  if (s.order < 3) throw Error(ErrorKind::Usage, "needs order 3");
  const TablePtr& t = s.ctx->table();
  CouplingField id = coupling_identity(t, s.dim());
  const auto& m2 = s.m_sharp[2];
  CouplingField out = m2.after(m2.after(id)).scaled(scalar_hbar(t, LaurentPoly(ratio(1, 3))));
  out += s.m_sharp[3].after(id).scaled(scalar_hbar(t, LaurentPoly(-1, 1)));
  return out;
}

CouplingField p4_closed_form(const MasterState& s) {
  if (s.order < 4) throw Error(ErrorKind::Usage, "needs order 4");
  const TablePtr& t = s.ctx->table();
  CouplingField id = coupling_identity(t, s.dim());
  const auto& m2 = s.m_sharp[2];
  const auto& m3 = s.m_sharp[3];
  auto c = [&](const Rational& v, int p) { return scalar_hbar(t, LaurentPoly(v, p)); };
  CouplingField out = m2.after(m2.after(m2.after(id))).scaled(c(ratio(1, 18), 0));
  out += m2.after(m3.after(id)).scaled(c(ratio(-1, 6), 1));
  out += m3.after(m2.after(id)).scaled(c(ratio(-1, 2), 1));
  out += s.m_sharp[4].after(id).scaled(c(1, 2));
  return out;
}

ScalarSeries expectation_layer(const CouplingField& p, const ExpectationVector& vec) {
  ScalarSeries out;
  for (std::size_t g = 0; g < p.components.size(); ++g) {
    if (vec.values[g].is_zero()) continue;
    for (const auto& [k, c] : p.components[g].terms()) add_to(out, k, LaurentPoly::from_scalar(c) * vec.values[g]);
  }
  return out;
}

std::vector<TKey> multi_indices(std::size_t dim, int arity) {
  std::vector<TKey> out;
  TKey cur;
  std::function<void(int)> rec = [&](int lo) {
    if (static_cast<int>(cur.size()) == arity) {
      out.push_back(cur);
      return;
    }
    for (int i = lo; i < static_cast<int>(dim); ++i) {
      cur.push_back(i);
      rec(i);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

CorrelatorTable correlator_table(const MasterState& s, const ExpectationVector& vec, int max_arity) {
  CorrelatorTable table;
  auto p = p_sharp_tower(s);
  for (int n = 1; n <= std::min(max_arity, s.order); ++n) {
    ScalarSeries layer = expectation_layer(p[n], vec);
    auto& row = table[n];
    for (const auto& key : multi_indices(s.dim(), n)) {
      auto it = layer.find(key);
      row[key] = it == layer.end() ? LaurentPoly() : multiplicity_factor(key) * it->second;
    }
  }
  return table;
}

QuantumCoordinates quantum_coordinates(const MasterState& s, const ExpectationVector& vec, VerificationLog* log) {
  auto p = p_sharp_tower(s);
  QuantumCoordinates q;
  const std::size_t dim = s.dim();
  q.coords.assign(dim, ScalarSeries{});
  for (std::size_t g = 0; g < dim; ++g) {
    add_to(q.coords[g], {static_cast<int>(g)}, LaurentPoly(1));
    for (int n = 2; n <= s.order; ++n)
      for (const auto& [k, c] : p[n].components[g].terms())
        add_to(q.coords[g], k, LaurentPoly::from_scalar(c).shifted(-(n - 1)) * LaurentPoly(n % 2 == 0 ? -1 : 1));
  }
  add_to(q.z, {}, vec.values[0]);
  for (std::size_t g = 0; g < dim; ++g)
    for (const auto& [k, v] : q.coords[g]) add_to(q.z, k, LaurentPoly(-1, -1) * v * vec.values[g]);

  // d0 T = delta - T / hbar, exact below the truncation order.
  bool ok = true;
  std::string detail;
  for (std::size_t g = 0; g < dim && ok; ++g) {
    ScalarSeries diff = partial(q.coords[g], 0);
    if (g == 0) add_to(diff, {}, LaurentPoly(-1));
    for (const auto& [k, v] : q.coords[g]) add_to(diff, k, v.shifted(-1));
    for (const auto& [k, v] : diff)
      if (static_cast<int>(k.size()) < s.order) {
        ok = false;
        detail = "T^" + std::to_string(g) + " at t" + key_to_string(k);
        break;
      }
  }
  expect(log, "d0 T = delta_0 - T/hbar", s.order, ok, detail);
  return q;
}

LaurentPoly chain_expectation(const MasterState& s, const ExpectationVector& vec, const HbarPoly& chain) {
  const ModelContext& ctx = *s.ctx;
  const std::size_t dim = s.dim();
  std::vector<HbarPoly> reps;
  for (std::size_t g = 0; g < dim; ++g) reps.push_back(s.theta[1].partial(static_cast<int>(g)).coefficient({}));
  LaurentPoly out;
  HbarPoly x = chain;
  const int cap = 64 + std::max(0, chain.degree());
  for (int k = 0; !x.is_zero(); ++k) {
    if (k > cap) throw Error(ErrorKind::InternalIdentityViolation, "hbar-adic expectation did not terminate");
    auto g = x.coeff(0).ghost();
    Decomposition d = decompose(ctx, x.coeff(0), g ? *g : 0);
    for (std::size_t a = 0; a < dim; ++a) {
      if (d.m[a] == 0) continue;
      out += d.m[a] * vec.values[a].shifted(k);
      x -= reps[a] * d.m[a];
    }
    x -= k_apply(ctx.action(), HbarPoly(d.lambda));
    x = x.divided_by_hbar();
  }
  return out;
}

namespace {

// Shared data for repeated oracle evaluations on one state.
class OracleRunner {
 public:
  OracleRunner(const MasterState& s, const ExpectationVector& vec)
      : s_(s), vec_(vec), omega_(omega_tower(s)), p_(p_sharp_tower(s)) {
    for (int n = 1; n <= s.order; ++n) layers_.push_back(expectation_layer(p_[n], vec));
  }

  OracleResult run(TKey a) {
    std::sort(a.begin(), a.end());
    const int n = static_cast<int>(a.size());
    if (n < 1 || n > s_.order || n > 6)
      throw Error(ErrorKind::Usage, "partition oracle supports arity 1..min(order, 6)");
    const TablePtr& t = s_.ctx->table();
    OracleResult r;
    r.chain = HbarPoly(t);

    // Restricted growth strings enumerate the set partitions of the positions.
    std::vector<int> block(n, 0);
    std::function<void(int, int)> rec = [&](int i, int nblocks) {
      if (i == n) {
        HbarPoly term = HbarPoly(Element::constant(t, 1));
        for (int b = 0; b < nblocks; ++b) {
          TKey sub;
          for (int j = 0; j < n; ++j)
            if (block[j] == b) sub.push_back(a[j]);
          term = term * extract_descendant_morphism(s_, sub);
        }
        r.chain += term * scalar_hbar(t, minus_hbar_pow(n - nblocks));
        return;
      }
      for (int b = 0; b <= nblocks; ++b) {
        block[i] = b;
        rec(i + 1, std::max(nblocks, b + 1));
      }
    };
    rec(0, 0);

    HbarPoly from_omega = omega_[n].coefficient(a) * multiplicity_factor(a);
    if (from_omega != r.chain)
      throw Error(ErrorKind::OracleMismatch, "partition chain differs from Omega_n at " + key_to_string(a));
    if (!k_apply(s_.ctx->action(), r.chain).is_zero())
      throw Error(ErrorKind::InternalIdentityViolation, "K pi_n != 0 at " + key_to_string(a));

    r.via_chain = chain_expectation(s_, vec_, r.chain);
    auto it = layers_[n - 1].find(a);
    if (it != layers_[n - 1].end()) r.via_p_sharp = multiplicity_factor(a) * it->second;
    auto comp = component(a);
    for (std::size_t g = 0; g < comp.size(); ++g) r.via_components += comp[g] * vec_.values[g];

    if (!(r.via_chain == r.via_p_sharp) || !(r.via_chain == r.via_components))
      throw Error(ErrorKind::OracleMismatch, "expectation paths disagree at " + key_to_string(a) + ": chain " +
                                                 r.via_chain.to_string() + ", p-field " + r.via_p_sharp.to_string() +
                                                 ", components " + r.via_components.to_string());
    return r;
  }

 private:
  // p_n(a) from its component recursion: an unshuffle sum over which k inputs feed m_k.
  std::vector<LaurentPoly> component(const TKey& a) {
    if (auto it = memo_.find(a); it != memo_.end()) return it->second;
    const std::size_t dim = s_.dim();
    const int n = static_cast<int>(a.size());
    std::vector<LaurentPoly> out(dim);
    if (n == 1) {
      out[a[0]] = LaurentPoly(1);
    } else {
      auto top = s_.m[n].at(a, dim);
      for (std::size_t g = 0; g < dim; ++g) out[g] += top[g] * minus_hbar_pow(n - 2);
      for (int k = 2; k <= n - 1; ++k) {
        LaurentPoly c = ratio(k * (k - 1), n * (n - 1)) * minus_hbar_pow(k - 2);
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + k, true);
        do {
          TKey in, rest;
          for (int j = 0; j < n; ++j) (pick[j] ? in : rest).push_back(a[j]);
          auto mk = s_.m[k].at(in, dim);
          for (std::size_t b = 0; b < dim; ++b) {
            if (mk[b] == 0) continue;
            TKey next = rest;
            next.insert(std::upper_bound(next.begin(), next.end(), static_cast<int>(b)), static_cast<int>(b));
            auto sub = component(next);
            for (std::size_t g = 0; g < dim; ++g) out[g] += (mk[b] * c) * sub[g];
          }
        } while (std::prev_permutation(pick.begin(), pick.end()));
      }
    }
    memo_.emplace(a, out);
    return out;
  }

  const MasterState& s_;
  const ExpectationVector& vec_;
  std::vector<TSeries> omega_;
  std::vector<CouplingField> p_;
  std::vector<ScalarSeries> layers_;
  std::map<TKey, std::vector<LaurentPoly>> memo_;
};

}  // namespace

OracleResult partition_oracle(const MasterState& s, const ExpectationVector& vec, const TKey& indices) {
  OracleRunner runner(s, vec);
  return runner.run(indices);
}

VerificationLog verify_correlators(const MasterState& s, const ExpectationVector& vec, int max_arity, bool run_oracle) {
  VerificationLog log;
  omega_tower(s, &log);
  auto p = p_sharp_tower(s, &log);
  if (s.order >= 2) log.add("p_2 = m_2", 2, p[2] == s.m_sharp[2].after(coupling_identity(s.ctx->table(), s.dim())));
  if (s.order >= 3) log.add("p_3 matches its closed form", 3, p[3] == p3_closed_form(s));
  if (s.order >= 4) log.add("p_4 matches its closed form", 4, p[4] == p4_closed_form(s));
  quantum_coordinates(s, vec, &log);
  if (run_oracle) {
    OracleRunner runner(s, vec);
    for (int n = 1; n <= std::min({max_arity, s.order, 6}); ++n) {
      bool ok = true;
      std::string detail;
      for (const auto& key : multi_indices(s.dim(), n)) {
        try {
          runner.run(key);
        } catch (const Error& e) {
          ok = false;
          detail = e.what();
          break;
        }
      }
      log.add("partition formula expectation = p-field expectation", n, ok, detail);
    }
  }
  return log;
}

}  // namespace bvm
