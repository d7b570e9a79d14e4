#ifndef SYNTHFORGE_CSV_HPP
#define SYNTHFORGE_CSV_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "synthforge/dataset.hpp"

namespace synthforge {

// Ingest problems are usage errors, distinct from numeric failures.
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Column selectors are names or 0-based indices rendered as strings. Empty
// inputs means "all columns except the response"; empty response means the
// last column (or no response for audit-style ingestion).
struct ColumnSelectors {
  std::vector<std::string> inputs;
  std::string response;       // empty + useResponse -> last column
  bool useResponse = true;
};

// Remembers where selected columns sat in the source file so emission can
// reproduce the original header and ordering.
struct CsvLayout {
  std::vector<std::string> header;    // full header of the source file
  std::vector<Index> inputFileCols;   // file column per dataset input column
  Index responseFileCol = -1;         // -1 when no response selected
};

struct IngestResult {
  Dataset dataset;
  CsvLayout layout;
};

IngestResult ingestCsv(const std::string& path, const ColumnSelectors& selectors);

// Writes the dataset back in the source-file column order with 17 significant
// digits, enough for bit-exact round trips.
void writeCsv(const std::string& path, const Dataset& dataset,
              const CsvLayout& layout);

std::string formatDouble(double v);

}  // namespace synthforge

#endif
