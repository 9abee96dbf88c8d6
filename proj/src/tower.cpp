#include "bvm/tower.hpp"

#include <sstream>

#include <algorithm>
#include <sstream>
#include <json.hpp>

#include "bvm/errors.hpp"
#include "bvm/operators.hpp"

namespace bvm {

namespace {

Matrix zeros_like(const Matrix& a) { return Matrix(a.rows(), a.cols()); }

int ghost_of(const std::vector<Rational>& v, const std::vector<int>& ghosts) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return ghosts[i];
  return 0;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InternalIdentityViolation, what);
}

// Greedily extends `base` (columns) by candidates that increase the rank.
std::vector<std::size_t> extend_basis(std::vector<std::vector<Rational>> base,
                                      const std::vector<std::vector<Rational>>& candidates, std::size_t rows) {
  std::vector<std::size_t> picked;
  std::size_t r = base.empty() ? 0 : rank(Matrix::from_columns(rows, base));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    base.push_back(candidates[i]);
    std::size_t r2 = rank(Matrix::from_columns(rows, base));
    if (r2 > r) {
      picked.push_back(i);
      r = r2;
    } else {
      base.pop_back();
    }
  }
  return picked;
}

std::vector<std::vector<Rational>> columns_of(const Matrix& m) {
  std::vector<std::vector<Rational>> out;
  for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.column(j));
  return out;
}

Matrix at_or_zero(const MatrixSeries& s, int i, std::size_t rows, std::size_t cols) {
  if (i >= 0 && static_cast<std::size_t>(i) < s.size()) return s[i];
  return Matrix(rows, cols);
}

}  // namespace

Matrix FiniteComplex::piece(int l) const {
  if (l == 0) return q;
  if (l >= 1 && l <= order()) return k[l - 1];
  return Matrix(dim(), dim());
}

void validate(const FiniteComplex& c) {
  const std::size_t n = c.dim();
  if (c.labels.size() != n) throw Error(ErrorKind::InvalidModel, "one label per basis vector required");
  for (int l = 0; l <= c.order(); ++l) {
    const Matrix m = c.piece(l);
    if (m.rows() != n || m.cols() != n) throw Error(ErrorKind::InvalidModel, "matrix K^(" + std::to_string(l) + ") has the wrong shape");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (m(i, j) != 0 && c.ghosts[i] != c.ghosts[j] + 1)
          throw Error(ErrorKind::InvalidModel, "K^(" + std::to_string(l) + ") does not raise ghost number by one");
  }
  for (int order = 0; order <= c.order(); ++order) {
    Matrix acc(n, n);
    for (int a = 0; a <= order; ++a) acc += c.piece(a) * c.piece(order - a);
    if (!acc.is_zero()) throw Error(ErrorKind::NotNilpotent, "K^2 != 0 at order " + std::to_string(order));
  }
}

CohomologyData cohomology(const FiniteComplex& c) {
  const std::size_t n = c.dim();
  Matrix kernel = nullspace(c.q);
  auto ker_cols = columns_of(kernel);
  std::vector<std::vector<Rational>> unit;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> e(n);
    e[i] = 1;
    unit.push_back(std::move(e));
  }
  std::vector<std::vector<Rational>> w;
  for (auto i : extend_basis(ker_cols, unit, n)) w.push_back(unit[i]);
  std::vector<std::vector<Rational>> qw;
  for (const auto& v : w) qw.push_back(c.q.apply(v));
  std::vector<std::vector<Rational>> reps;
  for (auto i : extend_basis(qw, ker_cols, n)) reps.push_back(ker_cols[i]);

  CohomologyData d;
  const std::size_t r = w.size(), hd = reps.size();
  for (const auto& v : reps) d.h_ghosts.push_back(ghost_of(v, c.ghosts));
  std::vector<std::vector<Rational>> all = qw;
  all.insert(all.end(), reps.begin(), reps.end());
  all.insert(all.end(), w.begin(), w.end());
  Matrix pinv = inverse(Matrix::from_columns(n, all));
  std::vector<std::size_t> image_rows, h_rows;
  for (std::size_t i = 0; i < r; ++i) image_rows.push_back(i);
  for (std::size_t i = 0; i < hd; ++i) h_rows.push_back(r + i);
  d.f0 = Matrix::from_columns(n, reps);
  d.proj = pinv.rows_subset(h_rows);
  d.h = Matrix::from_columns(n, w) * pinv.rows_subset(image_rows);
  if (hd == 0) d.f0 = Matrix(n, 0);
  if (r == 0) d.h = Matrix(n, n);

  require((c.q * d.f0).is_zero(), "representatives are not closed");
  require(d.proj * d.f0 == Matrix::identity(hd), "projection does not invert the embedding");
  require(c.q * d.h + d.h * c.q == Matrix::identity(n) - d.f0 * d.proj, "contraction identity fails");
  return d;
}

ObstructionTower build_tower(const FiniteComplex& c, const CohomologyData& data) {
  const int big_n = c.order();
  const std::size_t n = c.dim(), hd = data.dim();
  ObstructionTower t;
  t.order = big_n;
  t.kappa.assign(big_n + 1, Matrix(hd, hd));
  t.f.assign(big_n + 1, Matrix(n, hd));
  t.g.assign(big_n + 1, Matrix(n, hd));
  t.f[0] = data.f0;
  for (int m = 1; m <= big_n; ++m) {
    Matrix g(n, hd);
    for (int l = 0; l <= m - 1; ++l) g += c.piece(m - l) * t.f[l];
    for (int l = 1; l <= m - 1; ++l) g -= t.f[l] * t.kappa[m - l];
    Matrix expected(n, hd);
    for (int l = 1; l <= m - 1; ++l) expected -= data.f0 * (t.kappa[m - l] * t.kappa[l]);
    require(c.q * g == expected, "Q g^(" + std::to_string(m) + ") identity fails");
    t.kappa[m] = data.proj * g;
    t.f[m] = data.h * (data.f0 * t.kappa[m] - g);
    require(c.q * t.f[m] == data.f0 * t.kappa[m] - g, "f^(" + std::to_string(m) + ") does not solve its equation");
    t.g[m] = std::move(g);
  }
  for (int m = 2; m <= big_n; ++m) {
    Matrix acc(hd, hd);
    for (int l = 1; l <= m - 1; ++l) acc += t.kappa[m - l] * t.kappa[l];
    require(acc.is_zero(), "kappa^2 != 0 at order " + std::to_string(m));
  }
  for (int m = 0; m <= big_n; ++m) {
    Matrix acc(n, hd);
    for (int a = 0; a <= m; ++a) acc += c.piece(a) * t.f[m - a] - t.f[a] * t.kappa[m - a];
    require(acc.is_zero(), "K f != f kappa at order " + std::to_string(m));
  }
  return t;
}

Classification classify(const ObstructionTower& tower, std::size_t dim_h) {
  Matrix stacked(dim_h * std::max(1, tower.order), dim_h);
  for (int l = 1; l <= tower.order; ++l)
    for (std::size_t i = 0; i < dim_h; ++i)
      for (std::size_t j = 0; j < dim_h; ++j) stacked((l - 1) * dim_h + i, j) = tower.kappa[l](i, j);
  Classification out;
  out.observables = nullspace(stacked);
  std::vector<std::vector<Rational>> unit;
  for (std::size_t i = 0; i < dim_h; ++i) {
    std::vector<Rational> e(dim_h);
    e[i] = 1;
    unit.push_back(std::move(e));
  }
  std::vector<std::vector<Rational>> inv;
  for (auto i : extend_basis(columns_of(out.observables), unit, dim_h)) inv.push_back(unit[i]);
  out.invisibles = inv.empty() ? Matrix(dim_h, 0) : Matrix::from_columns(dim_h, inv);
  if (out.observables.cols() == 0) out.observables = Matrix(dim_h, 0);
  return out;
}

QuantumExtension quantum_extend(const FiniteComplex& c, const ObstructionTower& tower, const std::vector<Rational>& a) {
  QuantumExtension out;
  for (const auto& f : tower.f) out.chain.push_back(f.apply(a));
  out.observable = true;
  for (int l = 1; l <= tower.order; ++l) {
    auto k = tower.kappa[l].apply(a);
    if (std::any_of(k.begin(), k.end(), [](const Rational& x) { return x != 0; })) out.observable = false;
  }
  if (out.observable) {
    out.closed = true;
    for (int m = 0; m <= tower.order && out.closed; ++m) {
      std::vector<Rational> acc(c.dim());
      for (int l = 0; l <= m; ++l) {
        auto v = c.piece(l).apply(out.chain[m - l]);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
      }
      out.closed = std::all_of(acc.begin(), acc.end(), [](const Rational& x) { return x == 0; });
    }
  }
  return out;
}

MatrixSeries series_product(const MatrixSeries& a, const MatrixSeries& b, int order) {
  const std::size_t rows = a.at(0).rows(), cols = b.at(0).cols();
  MatrixSeries out(order + 1, Matrix(rows, cols));
  for (int m = 0; m <= order; ++m)
    for (int i = 0; i <= m; ++i) {
      if (static_cast<std::size_t>(i) >= a.size() || static_cast<std::size_t>(m - i) >= b.size()) continue;
      out[m] += a[i] * b[m - i];
    }
  return out;
}

MatrixSeries series_inverse(const MatrixSeries& a, int order) {
  MatrixSeries inv(order + 1);
  inv[0] = inverse(a.at(0));
  for (int m = 1; m <= order; ++m) {
    Matrix acc = zeros_like(inv[0]);
    for (int i = 1; i <= m; ++i)
      if (static_cast<std::size_t>(i) < a.size()) acc += a[i] * inv[m - i];
    inv[m] = (inv[0] * acc) * Rational(-1);
  }
  return inv;
}

MatrixSeries k_series(const FiniteComplex& c, int order) {
  MatrixSeries out;
  for (int l = 0; l <= order; ++l) out.push_back(c.piece(l));
  return out;
}

GaugeReport gauge_transform(const FiniteComplex& c, const ObstructionTower& tower, const MatrixSeries& s,
                            const MatrixSeries& xi) {
  const int big_n = tower.order;
  const std::size_t n = c.dim(), hd = tower.f[0].cols();
  MatrixSeries k = k_series(c, big_n);
  MatrixSeries s_full(big_n + 1);
  for (int l = 0; l <= big_n; ++l) s_full[l] = at_or_zero(s, l, n, hd);
  GaugeReport r;
  MatrixSeries xi_inv = series_inverse(xi, big_n);
  r.kappa = series_product(series_product(xi_inv, tower.kappa, big_n), xi, big_n);
  MatrixSeries fx = series_product(tower.f, xi, big_n);
  MatrixSeries ks = series_product(k, s_full, big_n);
  MatrixSeries sk = series_product(s_full, r.kappa, big_n);
  r.f.assign(big_n + 1, Matrix(n, hd));
  for (int m = 0; m <= big_n; ++m) r.f[m] = fx[m] + ks[m] + sk[m];
  MatrixSeries lhs = series_product(k, r.f, big_n);
  MatrixSeries rhs = series_product(r.f, r.kappa, big_n);
  r.chain_relation = true;
  for (int m = 0; m <= big_n; ++m) r.chain_relation = r.chain_relation && lhs[m] == rhs[m];
  MatrixSeries sq = series_product(r.kappa, r.kappa, big_n);
  r.kappa_square = std::all_of(sq.begin(), sq.end(), [](const Matrix& m) { return m.is_zero(); });
  return r;
}

bool functional_closed(const FiniteComplex& c, const MatrixSeries& functional) {
  const int big_n = c.order();
  for (int m = 0; m <= big_n; ++m) {
    Matrix acc(1, c.dim());
    for (int l = 0; l <= m; ++l)
      if (static_cast<std::size_t>(m - l) < functional.size()) acc += functional[m - l] * c.piece(l);
    if (!acc.is_zero()) return false;
  }
  return true;
}

std::optional<MatrixSeries> extend_functional(const FiniteComplex& c, const Matrix& c0) {
  if (!(c0 * c.q).is_zero()) return std::nullopt;
  MatrixSeries out{c0};
  Matrix qt = c.q.transposed();
  for (int m = 1; m <= c.order(); ++m) {
    Matrix rhs(1, c.dim());
    for (int l = 1; l <= m; ++l) rhs -= out[m - l] * c.piece(l);
    auto x = solve(qt, rhs.row(0));
    if (!x) return std::nullopt;
    Matrix row(1, c.dim());
    for (std::size_t j = 0; j < c.dim(); ++j) row(0, j) = (*x)[j];
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<Rational> expectation_iota(const MatrixSeries& functional, const MatrixSeries& f,
                                       const std::vector<Rational>& a, int order) {
  std::vector<Rational> out(order + 1);
  for (int m = 0; m <= order; ++m)
    for (int l = 0; l <= m; ++l) {
      if (static_cast<std::size_t>(m - l) >= functional.size() || static_cast<std::size_t>(l) >= f.size()) continue;
      out[m] += functional[m - l].apply(f[l].apply(a))[0];
    }
  return out;
}

Matrix random_graded(const std::vector<int>& row_ghosts, const std::vector<int>& col_ghosts, int shift,
                     std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  Matrix m(row_ghosts.size(), col_ghosts.size());
  for (std::size_t i = 0; i < row_ghosts.size(); ++i)
    for (std::size_t j = 0; j < col_ghosts.size(); ++j)
      if (row_ghosts[i] == col_ghosts[j] + shift) m(i, j) = dist(rng);
  return m;
}

namespace {

Matrix random_invertible(const std::vector<int>& ghosts, std::mt19937_64& rng) {
  for (;;) {
    Matrix p = random_graded(ghosts, ghosts, 0, rng, -1, 1);
    for (std::size_t i = 0; i < ghosts.size(); ++i) p(i, i) += 1;
    if (rank(p) == ghosts.size()) return p;
  }
}

}  // namespace

Matrix random_differential(const std::vector<int>& ghosts, std::mt19937_64& rng) {
  const std::size_t n = ghosts.size();
  Matrix std_q(n, n);
  std::vector<bool> used(n, false);
  std::bernoulli_distribution coin(0.6);
  for (std::size_t j = 0; j < n; ++j) {
    if (used[j] || !coin(rng)) continue;
    for (std::size_t i = 0; i < n; ++i)
      if (!used[i] && ghosts[i] == ghosts[j] + 1) {
        std_q(i, j) = 1;
        used[i] = used[j] = true;
        break;
      }
  }
  Matrix p = random_invertible(ghosts, rng);
  return p * std_q * inverse(p);
}

FiniteComplex conjugated_complex(const std::vector<int>& ghosts, const Matrix& q, int order, std::mt19937_64& rng) {
  const std::size_t n = ghosts.size();
  MatrixSeries g{Matrix::identity(n)};
  for (int l = 1; l <= order; ++l) g.push_back(random_graded(ghosts, ghosts, 0, rng, -1, 1));
  MatrixSeries k = series_product(series_product(g, MatrixSeries{q}, order), series_inverse(g, order), order);
  FiniteComplex c;
  c.ghosts = ghosts;
  for (std::size_t i = 0; i < n; ++i) c.labels.push_back("v" + std::to_string(i));
  c.q = k[0];
  c.k.assign(k.begin() + 1, k.end());
  return c;
}

std::optional<FiniteComplex> search_kappa2_fixture(std::mt19937_64& rng, int attempts) {
  // a, w in ghost 0; y, b in ghost 1; Q w = y.
  const std::vector<int> ghosts{0, 0, 1, 1};
  Matrix q(4, 4);
  q(2, 1) = 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    FiniteComplex c;
    c.ghosts = ghosts;
    c.labels = {"a", "w", "y", "b"};
    c.q = q;
    c.k = {random_graded(ghosts, ghosts, 1, rng, -1, 1), Matrix(4, 4)};
    try {
      validate(c);
    } catch (const Error&) {
      continue;
    }
    ObstructionTower t = build_tower(c, cohomology(c));
    if (!t.kappa[1].is_zero() || t.kappa[2].is_zero()) continue;

    // Disguise the hit: K -> g K g^-1 with g = P (1 + hbar g1), truncated at order 2.
    Matrix p = random_invertible(ghosts, rng);
    MatrixSeries g{p, p * random_graded(ghosts, ghosts, 0, rng, -1, 1)};
    MatrixSeries k = series_product(series_product(g, k_series(c, 2), 2), series_inverse(g, 2), 2);
    FiniteComplex out;
    out.ghosts = ghosts;
    out.labels = c.labels;
    out.q = k[0];
    out.k = {k[1], k[2]};
    validate(out);
    ObstructionTower t2 = build_tower(out, cohomology(out));
    if (!t2.kappa[1].is_zero() || t2.kappa[2].is_zero()) continue;
    out.frozen_kappa = {{1, t2.kappa[1]}, {2, t2.kappa[2]}};
    return out;
  }
  return std::nullopt;
}

TruncatedModel truncated_complex(const ModelContext& ctx, const std::vector<int>& weights, int max_degree,
                                 int ghost_lo, int ghost_hi) {
  TruncatedModel out;
  for (int g = ghost_lo; g <= ghost_hi; ++g)
    for (auto& m : bounded_monomials(ctx.table(), g, weights, max_degree, false)) out.basis.push_back(std::move(m));
  std::map<Monomial, std::size_t> index;
  for (std::size_t i = 0; i < out.basis.size(); ++i) index.emplace(out.basis[i], i);
  const std::size_t n = out.basis.size();
  FiniteComplex& c = out.complex;
  c.q = Matrix(n, n);
  c.k = {Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    c.ghosts.push_back(out.basis[j].ghost(*ctx.table()));
    c.labels.push_back(monomial_to_string(out.basis[j], *ctx.table()));
    Element e = Element::monomial(ctx.table(), out.basis[j]);
    auto fill = [&](Matrix& m, const Element& image, const Rational& scale) {
      for (const auto& [mono, coef] : image.terms()) {
        auto it = index.find(mono);
        if (it != index.end()) {
          m(it->second, j) += scale * coef;
        } else if (mono.ghost(*ctx.table()) <= ghost_hi) {
          throw Error(ErrorKind::UnboundedSlice, "truncation is not closed under the differential");
        }
      }
    };
    fill(c.q, ctx.q(e), 1);
    fill(c.k[0], bv_delta(e), -1);
  }
  return out;
}

namespace {

using nlohmann::json;

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(ErrorKind::ParseError, "matrix entries must be integers or \"p/q\" strings");
}

Matrix matrix_from_json(const json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) throw Error(ErrorKind::InvalidModel, "matrix must have one row per basis vector");
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw Error(ErrorKind::InvalidModel, "matrix rows must have full length");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = rational_from_json(j[i][k]);
  }
  return m;
}


}  // namespace

FiniteComplex parse_complex(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("complex file: ") + e.what());
  }
  FiniteComplex c;
  if (j.contains("ghosts")) {
    c.ghosts = j.at("ghosts").get<std::vector<int>>();
  } else if (j.contains("dimensions")) {
    std::map<int, int> dims;
    for (const auto& [g, d] : j.at("dimensions").items()) dims[std::stoi(g)] = d.get<int>();
    for (const auto& [g, d] : dims)
      for (int i = 0; i < d; ++i) c.ghosts.push_back(g);
  } else {
    throw Error(ErrorKind::InvalidModel, "complex needs \"ghosts\" or \"dimensions\"");
  }
  const std::size_t n = c.ghosts.size();
  if (j.contains("labels")) {
    c.labels = j.at("labels").get<std::vector<std::string>>();
  } else {
    for (std::size_t i = 0; i < n; ++i) c.labels.push_back("v" + std::to_string(i));
  }
  c.q = j.contains("Q") ? matrix_from_json(j.at("Q"), n) : Matrix(n, n);
  if (j.contains("K"))
    for (const auto& m : j.at("K")) c.k.push_back(matrix_from_json(m, n));
  if (j.contains("frozen_kappa")) {
    for (const auto& [l, m] : j.at("frozen_kappa").items()) {
      std::size_t rows = m.size();
      Matrix k(rows, rows);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t r = 0; r < rows; ++r) k(i, r) = rational_from_json(m[i][r]);
      c.frozen_kappa[std::stoi(l)] = k;
    }
  }
  return c;
}

namespace {

// One matrix row per line keeps fixture files reviewable.
void write_matrix(std::ostringstream& out, const Matrix& m, const std::string& indent) {
  out << "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << (r ? ",\n" : "\n") << indent << "  [";
    for (std::size_t col = 0; col < m.cols(); ++col) out << (col ? ", " : "") << '"' << m(r, col).get_str() << '"';
    out << "]";
  }
  out << (m.rows() ? "\n" + indent : "") << "]";
}

}  // namespace

std::string complex_to_json(const FiniteComplex& c) {
  std::ostringstream out;
  out << "{\n  \"ghosts\": " << json(c.ghosts).dump() << ",\n";
  out << "  \"labels\": " << json(c.labels).dump() << ",\n";
  out << "  \"Q\": ";
  write_matrix(out, c.q, "  ");
  out << ",\n  \"K\": [";
  for (std::size_t l = 0; l < c.k.size(); ++l) {
    out << (l ? ",\n    " : "\n    ");
    write_matrix(out, c.k[l], "    ");
  }
  out << (c.k.empty() ? "]" : "\n  ]");
  if (!c.frozen_kappa.empty()) {
    out << ",\n  \"frozen_kappa\": {";
    bool first = true;
    for (const auto& [l, m] : c.frozen_kappa) {
      out << (first ? "\n    " : ",\n    ") << '"' << l << "\": ";
      write_matrix(out, m, "    ");
      first = false;
    }
    out << "\n  }";
  }
  out << "\n}\n";
  return out.str();
}

}  // namespace bvm
