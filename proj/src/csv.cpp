#include "synthforge/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace synthforge {

namespace {

std::vector<std::vector<std::string>> parseRecords(const std::string& text,
                                                   const std::string& path) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool inQuotes = false;
  bool fieldQuoted = false;

  auto endField = [&] {
    if (!fieldQuoted) {
      // trim stray spaces and carriage returns around unquoted fields
      std::size_t b = 0, e = field.size();
      while (b < e && (field[b] == ' ' || field[b] == '\t')) ++b;
      while (e > b && (field[e - 1] == ' ' || field[e - 1] == '\t' ||
                       field[e - 1] == '\r')) {
        --e;
      }
      field = field.substr(b, e - b);
    }
    record.push_back(field);
    field.clear();
    fieldQuoted = false;
  };
  auto endRecord = [&] {
    endField();
    const bool blank = record.size() == 1 && record[0].empty();
    if (!blank) records.push_back(record);
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (inQuotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          inQuotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      inQuotes = true;
      fieldQuoted = true;
    } else if (c == ',') {
      endField();
    } else if (c == '\n') {
      endRecord();
    } else if (c == '\r') {
      // CRLF line ending; bare \r survives only inside quoted fields
    } else {
      field.push_back(c);
    }
  }
  if (inQuotes) throw IngestError(path + ": unterminated quoted field");
  if (!field.empty() || !record.empty()) endRecord();
  return records;
}

bool parseCell(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) return false;
  return std::isfinite(out);
}

Index resolveColumn(const std::string& selector,
                    const std::vector<std::string>& header,
                    const std::string& path) {
  auto it = std::find(header.begin(), header.end(), selector);
  if (it != header.end()) return it - header.begin();
  if (!selector.empty() &&
      std::all_of(selector.begin(), selector.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    const Index idx = std::stoll(selector);
    if (idx >= 0 && idx < static_cast<Index>(header.size())) return idx;
  }
  throw IngestError(path + ": no column named '" + selector + "'");
}

}  // namespace

IngestResult ingestCsv(const std::string& path, const ColumnSelectors& selectors) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto records = parseRecords(buffer.str(), path);
  if (records.empty()) throw IngestError(path + ": empty file (header row required)");

  IngestResult result;
  result.layout.header = records.front();
  const auto& header = result.layout.header;
  const Index fileCols = static_cast<Index>(header.size());

  Index responseCol = -1;
  std::vector<Index> inputCols;
  if (selectors.useResponse) {
    responseCol = selectors.response.empty()
                      ? fileCols - 1
                      : resolveColumn(selectors.response, header, path);
  }
  if (selectors.inputs.empty()) {
    for (Index j = 0; j < fileCols; ++j) {
      if (j != responseCol) inputCols.push_back(j);
    }
  } else {
    for (const auto& sel : selectors.inputs) {
      inputCols.push_back(resolveColumn(sel, header, path));
    }
  }
  if (inputCols.empty()) throw IngestError(path + ": no input columns selected");
  for (Index col : inputCols) {
    if (col == responseCol) {
      throw IngestError(path + ": response column '" + header[responseCol] +
                        "' also selected as an input");
    }
  }

  const Index nRows = static_cast<Index>(records.size()) - 1;
  if (nRows < 1) throw IngestError(path + ": no data rows");

  Matrix inputs(nRows, static_cast<Index>(inputCols.size()));
  Vector response(nRows);
  std::vector<Index> badRows;
  for (Index r = 0; r < nRows; ++r) {
    const auto& record = records[r + 1];
    if (static_cast<Index>(record.size()) != fileCols) {
      badRows.push_back(r + 1);
      continue;
    }
    bool ok = true;
    for (std::size_t j = 0; j < inputCols.size(); ++j) {
      double v;
      if (!parseCell(record[inputCols[j]], v)) {
        ok = false;
        break;
      }
      inputs(r, static_cast<Index>(j)) = v;
    }
    if (ok && responseCol >= 0) {
      double v;
      if (!parseCell(record[responseCol], v)) ok = false;
      else response(r) = v;
    }
    if (!ok) badRows.push_back(r + 1);
  }
  if (!badRows.empty()) {
    std::string list;
    for (std::size_t i = 0; i < badRows.size() && i < 20; ++i) {
      list += (i ? ", " : "") + std::to_string(badRows[i]);
    }
    if (badRows.size() > 20) list += ", ...";
    throw IngestError(path + ": non-numeric or non-finite cells in data row(s) " + list);
  }

  result.dataset.inputs = std::move(inputs);
  if (responseCol >= 0) result.dataset.response = std::move(response);
  result.dataset.columnNames.reserve(inputCols.size());
  for (Index col : inputCols) result.dataset.columnNames.push_back(header[col]);
  result.layout.inputFileCols = std::move(inputCols);
  result.layout.responseFileCol = responseCol;
  return result;
}

std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string quoteField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

void writeCsv(const std::string& path, const Dataset& dataset,
              const CsvLayout& layout) {
  if (static_cast<Index>(layout.inputFileCols.size()) != dataset.cols()) {
    throw std::invalid_argument("writeCsv: layout does not match dataset");
  }
  // emitted columns in their source-file order
  struct Emit {
    Index fileCol;
    Index datasetCol;  // -1 for the response
  };
  std::vector<Emit> emits;
  for (Index j = 0; j < dataset.cols(); ++j) {
    emits.push_back({layout.inputFileCols[j], j});
  }
  if (layout.responseFileCol >= 0 && dataset.hasResponse()) {
    emits.push_back({layout.responseFileCol, -1});
  }
  std::sort(emits.begin(), emits.end(),
            [](const Emit& a, const Emit& b) { return a.fileCol < b.fileCol; });

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("writeCsv: cannot open " + path);
  for (std::size_t i = 0; i < emits.size(); ++i) {
    out << (i ? "," : "") << quoteField(layout.header[emits[i].fileCol]);
  }
  out << "\n";
  for (Index r = 0; r < dataset.rows(); ++r) {
    for (std::size_t i = 0; i < emits.size(); ++i) {
      const double v = emits[i].datasetCol >= 0 ? dataset.inputs(r, emits[i].datasetCol)
                                                : (*dataset.response)(r);
      out << (i ? "," : "") << formatDouble(v);
    }
    out << "\n";
  }
}

}  // namespace synthforge
