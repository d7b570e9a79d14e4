#ifndef SYNTHFORGE_DATASET_HPP
#define SYNTHFORGE_DATASET_HPP

#include <optional>
#include <string>
#include <vector>

#include "synthforge/common.hpp"

namespace synthforge {

// Numeric design matrix plus optional response; the unit every stage consumes.
struct Dataset {
  Matrix inputs;
  std::optional<Vector> response;
  std::vector<std::string> columnNames;  // input column names, may be empty

  Index rows() const { return inputs.rows(); }
  Index cols() const { return inputs.cols(); }
  bool hasResponse() const { return response.has_value(); }

  // throws std::invalid_argument on shape or finiteness violations
  void validate() const;
};

}  // namespace synthforge

#endif
