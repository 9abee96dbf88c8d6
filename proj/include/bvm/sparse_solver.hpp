#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "bvm/rational.hpp"

namespace bvm {

// Sorted by index, no zero entries.
using SparseVector = std::vector<std::pair<int, Rational>>;
using Combination = std::map<int, Rational>;

SparseVector sparse_axpy(const SparseVector& a, const Rational& c, const SparseVector& b);

// Incremental column echelon form over the rationals. Each stored vector keeps
// its expression in terms of the inserted column ids, so membership queries
// return explicit coefficients. Pivot choice is the smallest row index, which
// makes the result deterministic for a fixed insertion order.
class SparseEchelon {
 public:
  explicit SparseEchelon(bool track_combinations = true) : track_(track_combinations) {}

  // Returns true when the column was independent of those already present.
  bool insert(int id, SparseVector v);
  // Coefficients c with sum c[id] * column(id) == v, or nullopt when v is outside the span.
  std::optional<Combination> solve(SparseVector v) const;
  std::size_t rank() const noexcept { return basis_.size(); }

 private:
  struct Stored {
    SparseVector vec;
    Combination comb;
  };
  // Reduces v in place; returns false if it stopped at an unpivoted leading row.
  bool reduce(SparseVector& v, Combination* comb) const;

  bool track_;
  std::map<int, std::size_t> pivot_;
  std::vector<Stored> basis_;
};

}  // namespace bvm
