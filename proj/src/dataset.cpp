#include "synthforge/dataset.hpp"

#include <stdexcept>

namespace synthforge {

void Dataset::validate() const {
  if (inputs.rows() < 1 || inputs.cols() < 1) {
    throw std::invalid_argument("Dataset: inputs must be at least 1x1");
  }
  if (!inputs.allFinite()) {
    throw std::invalid_argument("Dataset: inputs contain non-finite entries");
  }
  if (response) {
    if (response->size() != inputs.rows()) {
      throw std::invalid_argument("Dataset: response length must equal row count");
    }
    if (!response->allFinite()) {
      throw std::invalid_argument("Dataset: response contains non-finite entries");
    }
  }
  if (!columnNames.empty() &&
      static_cast<Index>(columnNames.size()) != inputs.cols()) {
    throw std::invalid_argument("Dataset: columnNames length must equal column count");
  }
}

}  // namespace synthforge
