#include "bvm/variables.hpp"

#include <set>

#include "bvm/errors.hpp"

namespace bvm {

VariableTable::VariableTable(std::vector<Variable> vars) : vars_(std::move(vars)) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const auto& v = vars_[i];
    if (v.name.empty()) throw Error(ErrorKind::InvalidVariableTable, "empty variable name");
    if (!seen.insert(v.name).second)
      throw Error(ErrorKind::InvalidVariableTable, "duplicate variable '" + v.name + "'");
    (v.odd ? odd_ : even_).push_back(i);
  }
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const auto& v = vars_[i];
    if (!v.partner) continue;
    std::size_t j = *v.partner;
    if (j >= vars_.size() || j == i || vars_[j].partner != i)
      throw Error(ErrorKind::InvalidVariableTable, "partner of '" + v.name + "' is not an involution");
    if (v.odd == vars_[j].odd)
      throw Error(ErrorKind::InvalidVariableTable,
                  "partners '" + v.name + "' and '" + vars_[j].name + "' have equal parity");
    if (v.ghost + vars_[j].ghost != -1)
      throw Error(ErrorKind::InvalidVariableTable,
                  "ghost numbers of '" + v.name + "' and '" + vars_[j].name + "' do not sum to -1");
    if (!v.odd) pairs_.push_back({i, j});
  }
}

std::optional<std::size_t> VariableTable::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

}  // namespace bvm
