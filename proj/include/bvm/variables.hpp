#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bvm {

struct Variable {
  std::string name;
  int ghost = 0;
  bool odd = false;
  int weight = 1;
  std::optional<std::size_t> partner;
};

// A conjugate pair entering the BV operator: `even` is the commuting member,
// `odd` the anticommuting one.
struct BvPair {
  std::size_t even;
  std::size_t odd;
};

class VariableTable {
 public:
  explicit VariableTable(std::vector<Variable> vars);

  std::size_t size() const noexcept { return vars_.size(); }
  const Variable& operator[](std::size_t i) const { return vars_[i]; }
  const std::vector<Variable>& variables() const noexcept { return vars_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::span<const std::size_t> odd_indices() const noexcept { return odd_; }
  std::span<const std::size_t> even_indices() const noexcept { return even_; }
  std::span<const BvPair> pairs() const noexcept { return pairs_; }

 private:
  std::vector<Variable> vars_;
  std::vector<std::size_t> odd_;
  std::vector<std::size_t> even_;
  std::vector<BvPair> pairs_;
};

using TablePtr = std::shared_ptr<const VariableTable>;

inline TablePtr make_table(std::vector<Variable> vars) {
  return std::make_shared<const VariableTable>(std::move(vars));
}

}  // namespace bvm
