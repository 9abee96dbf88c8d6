#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "bvm/hbar_poly.hpp"
#include "bvm/model.hpp"
#include "bvm/model_file.hpp"

namespace bvm::test {

inline std::filesystem::path source_dir() { return BVM_SOURCE_DIR; }

inline ContextPtr shipped_model(const std::string& name) {
  return build_model(load_model_file(source_dir() / "models" / (name + ".toml")).spec);
}

inline int shipped_truncation(const std::string& name) {
  return load_model_file(source_dir() / "models" / (name + ".toml")).truncation;
}

inline const std::vector<std::string>& identity_models() {
  static const std::vector<std::string> names{"a2", "a3", "mixed2", "fermat_cubic"};
  return names;
}

inline Rational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  return ratio(num(rng), den(rng));
}

// Random element whose terms all have the given parity; even exponents stay small.
inline Element random_element(const TablePtr& table, int parity, std::mt19937_64& rng, int max_terms = 4,
                              int max_exp = 2, int min_terms = 0) {
  Element out(table);
  std::uniform_int_distribution<int> nterms(min_terms, max_terms), bit(0, 1), ex(0, max_exp);
  int terms = nterms(rng);
  for (int attempt = 0; attempt < 200 && static_cast<int>(out.size()) < terms; ++attempt) {
    Monomial m(table->size());
    for (std::size_t v = 0; v < table->size(); ++v)
      m.set(v, static_cast<std::uint16_t>((*table)[v].odd ? bit(rng) : ex(rng)));
    if (m.parity(*table) != parity) continue;
    out.add_term(m, small_rational(rng));
  }
  return out;
}

inline HbarPoly random_hbar_poly(const TablePtr& table, int parity, std::mt19937_64& rng, int max_degree = 2) {
  HbarPoly p(table);
  std::uniform_int_distribution<int> deg(0, max_degree);
  int d = deg(rng);
  for (int k = 0; k <= d; ++k) p.add(k, random_element(table, parity, rng, 3));
  return p;
}

}  // namespace bvm::test

namespace doctest {
template <>
struct StringMaker<bvm::Element> {
  static String convert(const bvm::Element& e) { return e.to_string().c_str(); }
};
template <>
struct StringMaker<bvm::HbarPoly> {
  static String convert(const bvm::HbarPoly& p) { return p.to_string().c_str(); }
};
template <>
struct StringMaker<bvm::Rational> {
  static String convert(const bvm::Rational& r) { return r.get_str().c_str(); }
};
}  // namespace doctest

#include <set>

#include "bvm/matrix.hpp"

namespace bvm::test {

// Basis of Ker Q among ghost -1 elements of primary degree <= max_degree,
// computed slice by slice for graded models.
inline std::vector<Element> ghost_minus_one_kernel(const ModelContext& ctx, int max_degree) {
  const auto& table = ctx.table();
  std::vector<std::vector<Monomial>> slices;
  if (ctx.graded()) {
    std::set<std::vector<int>> mds;
    for (int d = 0; d <= max_degree; ++d)
      for (const auto& m : bounded_monomials(table, -1, ctx.gradings()[0].weights, d, true)) mds.insert(ctx.multidegree(m));
    for (const auto& md : mds) slices.push_back(slice_monomials(ctx, -1, md));
  } else {
    slices.push_back(bounded_monomials(table, -1, std::vector<int>(table->size(), 1), max_degree, false));
  }
  std::vector<Element> out;
  for (const auto& mons : slices) {
    std::vector<Element> images;
    std::set<Monomial> rows_set;
    for (const auto& m : mons) {
      images.push_back(ctx.q(Element::monomial(table, m)));
      for (const auto& [r, c] : images.back().terms()) rows_set.insert(r);
    }
    std::vector<Monomial> rows(rows_set.begin(), rows_set.end());
    Matrix a(rows.size(), mons.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < mons.size(); ++j) a(i, j) = images[j].coefficient(rows[i]);
    Matrix ker = nullspace(a);
    for (std::size_t k = 0; k < ker.cols(); ++k) {
      Element e(table);
      for (std::size_t j = 0; j < mons.size(); ++j)
        if (ker(j, k) != 0) e.add_term(mons[j], ker(j, k));
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace bvm::test
