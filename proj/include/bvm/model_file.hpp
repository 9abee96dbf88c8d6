#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "bvm/model.hpp"

namespace bvm {

// Declarative model description.
//
//   name = "a2"
//   class = "isolated"            # or "gauged"
//   coordinates = ["x"]
//   action = "x^3/3"              # isolated; gauged files give `superpotential`
//   weights = [1]                 # optional quasi-homogeneous weights
//   order = "grevlex"             # grevlex | grlex | weighted
//   truncation = 6
//   expectation = ["0", "1"]      # optional; entries may be hbar-coefficient arrays
//   degree_cap = 8
//
// An isolated model may instead declare its variables explicitly with
// [[variable]] blocks (name, ghost, parity, weight, partner).
struct ModelFile {
  ModelSpec spec;
  int truncation = 4;
  // Test hook: after solving, spoil the homotopy at this order.
  std::optional<int> corrupt_lambda;
};

ModelFile parse_model_file(std::string_view text);
ModelFile load_model_file(const std::filesystem::path& path);

}  // namespace bvm
