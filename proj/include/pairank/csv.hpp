#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pairank/analytics.hpp"
#include "pairank/core.hpp"

namespace pairank {

// A data error tied to a physical line of the input (1-based, header = 1).
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, const std::string& message)
      : Error(kind, "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Reads `left,right,winner[,weight]` CSV with a header row. Column order is
// free and extra columns are ignored. Quoted fields follow RFC 4180.
std::vector<ComparisonRecord> parse_comparisons_csv(std::istream& in);

void write_comparisons_csv(std::ostream& out, std::span<const ComparisonRecord> records);

// `item,score,rank` plus `lower,upper` when intervals are given.
void write_scores_csv(std::ostream& out, std::span<const RankedScore> ranked,
                      const BootstrapSummary* intervals = nullptr);

// Shortest round-trip text of `value`, always with a decimal point or an
// exponent (2.0, 2.509025136024378, 1e-05), like Python's repr.
std::string format_score(double value);

std::string csv_escape(const std::string& field);

}  // namespace pairank
