#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "bvm/errors.hpp"
#include "bvm/tower.hpp"
#include "support.hpp"
#include "tower_checks.hpp"

using namespace bvm;
using namespace bvm::test;


TEST_CASE("two-dimensional fixture: a is invisible, b observable") {
  auto b = build(load_complex("two_dim"));
  REQUIRE(b.data.dim() == 2);
  CHECK(b.tower.kappa[1] == b.c.frozen_kappa.at(1));
  auto cls = classify(b.tower, 2);
  REQUIRE(cls.observables.cols() == 1);
  REQUIRE(cls.invisibles.cols() == 1);
  // Map both classes back to chain level.
  auto inv_chain = b.data.f0.apply(cls.invisibles.column(0));
  auto obs_chain = b.data.f0.apply(cls.observables.column(0));
  CHECK(inv_chain[0] != 0);
  CHECK(inv_chain[1] == 0);
  CHECK(obs_chain[0] == 0);
  CHECK(obs_chain[1] != 0);
  auto ext = quantum_extend(b.c, b.tower, cls.observables.column(0));
  CHECK(ext.observable);
  CHECK(ext.closed);
  CHECK_FALSE(quantum_extend(b.c, b.tower, cls.invisibles.column(0)).observable);
  CHECK_FALSE(extends_to(b.c, b.data, cls.invisibles.column(0), 1));
  CHECK(extends_to(b.c, b.data, cls.observables.column(0), 1));
}

TEST_CASE("conjugated towers are fully observable to order 4") {
  std::mt19937_64 rng(99);
  std::vector<std::vector<int>> layouts{{-1, -1, 0, 0, 0, 1, 1}, {0, 0, 1, 1, 2}, {-1, 0, 0, 0, 1}};
  int tested = 0;
  for (int trial = 0; trial < 24; ++trial) {
    const auto& gh = layouts[trial % layouts.size()];
    Matrix q = random_differential(gh, rng);
    auto b = build(conjugated_complex(gh, q, 4, rng));
    CHECK(b.tower.order == 4);
    for (const auto& k : b.tower.kappa) CHECK(k.is_zero());
    auto cls = classify(b.tower, b.data.dim());
    CHECK(cls.observables.cols() == b.data.dim());
    CHECK(cls.invisibles.cols() == 0);
    for (std::size_t i = 0; i < b.data.dim(); ++i) {
      auto ext = quantum_extend(b.c, b.tower, unit(b.data.dim(), i));
      CHECK(ext.observable);
      CHECK(ext.closed);
      CHECK(extends_to(b.c, b.data, unit(b.data.dim(), i), 4));
    }
    ++tested;
  }
  CHECK(tested == 24);
  // The shipped conjugated fixture as well.
  auto shipped = build(load_complex("conjugated"));
  for (const auto& k : shipped.tower.kappa) CHECK(k.is_zero());
}

TEST_CASE("searched kappa^(2) fixture regression") {
  auto b = build(load_complex("kappa2"));
  REQUIRE(b.tower.order == 2);
  CHECK(b.tower.kappa[1].is_zero());
  CHECK_FALSE(b.tower.kappa[2].is_zero());
  CHECK(b.tower.kappa[1] == b.c.frozen_kappa.at(1));
  CHECK(b.tower.kappa[2] == b.c.frozen_kappa.at(2));
  // Without the tower: everything extends one step, but not two.
  auto cls = classify(b.tower, b.data.dim());
  REQUIRE(cls.invisibles.cols() == 1);
  for (std::size_t i = 0; i < b.data.dim(); ++i) CHECK(extends_to(b.c, b.data, unit(b.data.dim(), i), 1));
  CHECK_FALSE(extends_to(b.c, b.data, cls.invisibles.column(0), 2));
  CHECK(extends_to(b.c, b.data, cls.observables.column(0), 2));
}

TEST_CASE("fixture search produces valid kappa^(2) complexes") {
  std::mt19937_64 rng(8);
  auto fx = search_kappa2_fixture(rng, 2000);
  REQUIRE(fx.has_value());
  auto b = build(*fx);
  CHECK(b.tower.kappa[1].is_zero());
  CHECK_FALSE(b.tower.kappa[2].is_zero());
  CHECK(b.tower.kappa[2] == fx->frozen_kappa.at(2));
}

TEST_CASE("gauge covariance of the tower (>= 100 samples)") {
  std::mt19937_64 rng(4242);
  std::vector<FiniteComplex> complexes{load_complex("two_dim"), load_complex("kappa2"), load_complex("conjugated")};
  for (int i = 0; i < 3; ++i) {
    std::vector<int> gh{-1, 0, 0, 1, 1, 2};
    complexes.push_back(conjugated_complex(gh, random_differential(gh, rng), 3, rng));
  }
  int samples = 0;
  for (const auto& c : complexes) {
    auto b = build(c);
    for (int k = 0; k < 20; ++k) {
      auto s = random_s(b.c, b.data.h_ghosts, b.tower.order, rng);
      auto xi = random_xi(b.data.dim(), b.data.h_ghosts, b.tower.order, rng);
      auto rep = gauge_transform(b.c, b.tower, s, xi);
      CHECK(rep.chain_relation);
      CHECK(rep.kappa_square);
      // kappa^(1) is fixed by every automorphism.
      CHECK(rep.kappa[1] == b.tower.kappa[1]);
      ++samples;
    }
  }
  CHECK(samples >= 100);
}

TEST_CASE("iota is invariant on observables and shifts by the stated formula otherwise") {
  std::mt19937_64 rng(77);
  std::vector<FiniteComplex> complexes{load_complex("conjugated"), load_complex("kappa2"), load_complex("two_dim")};
  for (int i = 0; i < 4; ++i) {
    std::vector<int> gh{-1, -1, 0, 0, 0, 1, 1};
    complexes.push_back(conjugated_complex(gh, random_differential(gh, rng), 3, rng));
  }
  int functionals = 0, observable_checks = 0;
  for (const auto& c : complexes) {
    auto b = build(c);
    const int order = b.tower.order;
    const std::size_t hd = b.data.dim();
    for (int k = 0; k < 15; ++k) {
      auto cf = random_functional(b.c, rng);
      if (!cf) continue;
      REQUIRE(functional_closed(b.c, *cf));
      ++functionals;
      auto s = random_s(b.c, b.data.h_ghosts, order, rng);
      auto xi = random_xi(hd, b.data.h_ghosts, order, rng);
      auto rep = gauge_transform(b.c, b.tower, s, xi);
      auto r = random_homotopy(b.c, order, rng);
      CHECK(iota_identity(b, *cf, r, s, xi, rep));
      auto c2 = shifted_functional(b.c, *cf, r, order);

      // Literal invariance on classes with kappa(a) = 0 (xi = 1 keeps kappa' = kappa).
      MatrixSeries one(order + 1, Matrix(hd, hd));
      one[0] = Matrix::identity(hd);
      auto plain = gauge_transform(b.c, b.tower, s, one);
      auto cls = classify(b.tower, hd);
      for (std::size_t j = 0; j < cls.observables.cols(); ++j) {
        auto a = cls.observables.column(j);
        CHECK(expectation_iota(c2, plain.f, a, order) == expectation_iota(*cf, b.tower.f, a, order));
        ++observable_checks;
      }
    }
  }
  CHECK(functionals >= 20);
  CHECK(observable_checks >= 20);
}

TEST_CASE("truncated polynomial models agree with the algebraic engine") {
  struct Case {
    const char* name;
    std::vector<int> weights;  // x, x_b
    int top;
  };
  for (const auto& cs : {Case{"a2", {1, 2}, 6}, Case{"a3", {1, 3}, 8}}) {
    auto ctx = test::shipped_model(cs.name);
    auto tm = truncated_complex(*ctx, cs.weights, cs.top, -1, 0);
    auto b = build(tm.complex);
    INFO(cs.name);
    CHECK(b.data.dim() == ctx->h_basis().size());
    for (const auto& k : b.tower.kappa) CHECK(k.is_zero());
    // Each representative is cohomologous to a combination of f0 columns and vice versa.
    Matrix span(tm.basis.size(), b.data.dim() + tm.basis.size());
    for (std::size_t j = 0; j < b.data.dim(); ++j)
      for (std::size_t i = 0; i < tm.basis.size(); ++i) span(i, j) = b.data.f0(i, j);
    for (std::size_t j = 0; j < tm.basis.size(); ++j)
      for (std::size_t i = 0; i < tm.basis.size(); ++i) span(i, b.data.dim() + j) = b.c.q(i, j);
    for (const auto& rep : ctx->h_basis().reps) {
      std::vector<Rational> v(tm.basis.size());
      for (std::size_t i = 0; i < tm.basis.size(); ++i) v[i] = rep.coefficient(tm.basis[i]);
      CHECK(solve(span, v).has_value());
    }
  }
}

TEST_CASE("complex files: parsing, round trip and validation") {
  auto c = load_complex("kappa2");
  auto again = parse_complex(complex_to_json(c));
  CHECK(again.ghosts == c.ghosts);
  CHECK(again.q == c.q);
  CHECK(again.k == c.k);
  CHECK(again.frozen_kappa == c.frozen_kappa);
  CHECK(complex_to_json(again) == complex_to_json(c));

  auto with_dims = parse_complex(R"({"dimensions": {"0": 1, "1": 1}, "Q": [[0, 0], ["1/2", 0]], "K": []})");
  CHECK(with_dims.ghosts == std::vector<int>{0, 1});
  CHECK(with_dims.q(1, 0) == ratio(1, 2));

  CHECK_THROWS_AS(parse_complex("{not json"), Error);
  CHECK_THROWS_AS(parse_complex(R"({"ghosts": [0, 1], "Q": [[0]], "K": []})"), Error);
  CHECK_THROWS_AS(parse_complex(R"({"Q": [[0]], "K": []})"), Error);
  // Q must raise ghost by one.
  CHECK_THROWS_AS(validate(parse_complex(R"({"ghosts": [0, 0], "Q": [[0, 0], [1, 0]], "K": []})")), Error);

  std::ifstream in(test::source_dir() / "tests/fixtures/not_nilpotent.json");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    validate(parse_complex(ss.str()));
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotNilpotent);
  }
}
