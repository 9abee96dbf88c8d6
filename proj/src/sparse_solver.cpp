#include "bvm/sparse_solver.hpp"

namespace bvm {

SparseVector sparse_axpy(const SparseVector& a, const Rational& c, const SparseVector& b) {
  SparseVector out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, c * b[j].second);
      ++j;
    } else {
      Rational v = a[i].second + c * b[j].second;
      if (v != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

namespace {

void combine(Combination& acc, const Rational& c, const Combination& other) {
  for (const auto& [id, v] : other) {
    auto [it, inserted] = acc.try_emplace(id, c * v);
    if (!inserted) {
      it->second += c * v;
      if (it->second == 0) acc.erase(it);
    }
  }
}

}  // namespace

bool SparseEchelon::reduce(SparseVector& v, Combination* comb) const {
  while (!v.empty()) {
    auto it = pivot_.find(v.front().first);
    if (it == pivot_.end()) return false;
    const Stored& s = basis_[it->second];
    Rational c = v.front().second / s.vec.front().second;
    v = sparse_axpy(v, -c, s.vec);
    if (comb) combine(*comb, c, s.comb);
  }
  return true;
}

bool SparseEchelon::insert(int id, SparseVector v) {
  Combination comb;
  // Track -(reduction) so that the residual equals column(id) - sum(...).
  Combination used;
  bool in_span = reduce(v, track_ ? &used : nullptr);
  if (in_span) return false;
  if (track_) {
    comb[id] = 1;
    combine(comb, -1, used);
  }
  pivot_[v.front().first] = basis_.size();
  basis_.push_back({std::move(v), std::move(comb)});
  return true;
}

std::optional<Combination> SparseEchelon::solve(SparseVector v) const {
  Combination comb;
  if (!reduce(v, &comb)) return std::nullopt;
  return comb;
}

}  // namespace bvm
