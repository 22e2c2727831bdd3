#include "pairank/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace pairank {

namespace {

struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Returns false at end of input. Blank lines are skipped.
  bool next(Row& row) {
    while (true) {
      row.fields.clear();
      row.line = line_;
      if (in_.peek() == std::char_traits<char>::eof()) return false;
      std::string field;
      bool quoted = false;
      bool any = false;
      while (true) {
        const int c = in_.get();
        if (c == std::char_traits<char>::eof()) {
          if (quoted) throw ParseError(ErrorKind::kMalformedRow, row.line, "unterminated quote");
          break;
        }
        any = true;
        if (quoted) {
          if (c == '"') {
            if (in_.peek() == '"') {
              in_.get();
              field.push_back('"');
            } else {
              quoted = false;
            }
          } else {
            if (c == '\n') ++line_;
            field.push_back(static_cast<char>(c));
          }
          continue;
        }
        if (c == '"') {
          quoted = true;
        } else if (c == ',') {
          row.fields.push_back(std::move(field));
          field.clear();
        } else if (c == '\n') {
          ++line_;
          break;
        } else if (c != '\r') {
          field.push_back(static_cast<char>(c));
        }
      }
      row.fields.push_back(std::move(field));
      if (!any) return false;
      if (row.fields.size() == 1 && trim(row.fields[0]).empty()) continue;
      return true;
    }
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool needs_quotes(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos ||
         (!field.empty() && (std::isspace(static_cast<unsigned char>(field.front())) ||
                             std::isspace(static_cast<unsigned char>(field.back()))));
}

}  // namespace

std::vector<ComparisonRecord> parse_comparisons_csv(std::istream& in) {
  // Skip a UTF-8 byte order mark.
  if (in.peek() == 0xEF) {
    char bom[3];
    in.read(bom, 3);
  }
  CsvReader reader(in);
  Row row;
  if (!reader.next(row)) {
    throw ParseError(ErrorKind::kMissingColumn, 1, "missing header row (left,right,winner)");
  }
  std::unordered_map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < row.fields.size(); ++i) {
    columns.emplace(lower(CsvReader::trim(row.fields[i])), i);
  }
  auto column = [&](const char* name) -> std::size_t {
    auto it = columns.find(name);
    if (it == columns.end()) {
      throw ParseError(ErrorKind::kMissingColumn, row.line,
                       std::string("missing required column '") + name + "'");
    }
    return it->second;
  };
  const auto left = column("left");
  const auto right = column("right");
  const auto winner = column("winner");
  const auto weight_it = columns.find("weight");
  const std::optional<std::size_t> weight =
      weight_it == columns.end() ? std::nullopt : std::optional(weight_it->second);
  const auto needed = std::max({left, right, winner, weight.value_or(0)}) + 1;

  std::vector<ComparisonRecord> records;
  while (reader.next(row)) {
    if (row.fields.size() < needed) {
      throw ParseError(ErrorKind::kMalformedRow, row.line,
                       "expected at least " + std::to_string(needed) + " fields, got " +
                           std::to_string(row.fields.size()));
    }
    ComparisonRecord record;
    record.left = row.fields[left];
    record.right = row.fields[right];
    try {
      record.winner = parse_winner(CsvReader::trim(row.fields[winner]));
    } catch (const Error& e) {
      throw ParseError(e.kind(), row.line, e.what());
    }
    if (weight) {
      const auto text = CsvReader::trim(row.fields[*weight]);
      if (!text.empty()) {
        double value = 0.0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || end != text.data() + text.size()) {
          throw ParseError(ErrorKind::kIllegalWeight, row.line,
                           "weight '" + std::string(text) + "' is not a number");
        }
        try {
          validate_weight(value);
        } catch (const Error& e) {
          throw ParseError(e.kind(), row.line, e.what());
        }
        record.weight = value;
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::string csv_escape(const std::string& field) {
  if (!needs_quotes(field)) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_comparisons_csv(std::ostream& out, std::span<const ComparisonRecord> records) {
  out << "left,right,winner,weight\n";
  for (const auto& r : records) {
    out << csv_escape(r.left) << ',' << csv_escape(r.right) << ',' << winner_label(r.winner)
        << ',' << format_score(r.weight) << '\n';
  }
}

void write_scores_csv(std::ostream& out, std::span<const RankedScore> ranked,
                      const BootstrapSummary* intervals) {
  out << "item,score,rank";
  if (intervals) out << ",lower,upper";
  out << '\n';
  std::unordered_map<std::string, const BootstrapInterval*> by_item;
  if (intervals) {
    for (const auto& ci : intervals->items) by_item.emplace(ci.item, &ci);
  }
  for (const auto& row : ranked) {
    out << csv_escape(row.item) << ',' << format_score(row.score) << ',' << row.rank;
    if (intervals) {
      const auto* ci = by_item.at(row.item);
      out << ',' << format_score(ci->lower) << ',' << format_score(ci->upper);
    }
    out << '\n';
  }
}

std::string format_score(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return std::signbit(value) ? "-0.0" : "0.0";

  // Shortest digits in scientific form, e.g. "2.509025136024378e+00".
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  std::string sci(buf, end);
  const auto e_pos = sci.find('e');
  const int exponent = std::stoi(sci.substr(e_pos + 1));
  std::string mantissa = sci.substr(0, e_pos);
  const bool negative = mantissa.front() == '-';
  if (negative) mantissa.erase(0, 1);
  std::string digits;
  for (char c : mantissa) {
    if (c != '.') digits.push_back(c);
  }

  std::string out = negative ? "-" : "";
  if (exponent >= -4 && exponent < 16) {
    const int point = exponent + 1;  // digits before the decimal point
    if (point <= 0) {
      out += "0." + std::string(static_cast<std::size_t>(-point), '0') + digits;
    } else if (static_cast<std::size_t>(point) >= digits.size()) {
      out += digits + std::string(static_cast<std::size_t>(point) - digits.size(), '0') + ".0";
    } else {
      out += digits.substr(0, static_cast<std::size_t>(point)) + "." +
             digits.substr(static_cast<std::size_t>(point));
    }
    return out;
  }
  out += digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  char exp_buf[16];
  std::snprintf(exp_buf, sizeof exp_buf, "e%c%02d", exponent < 0 ? '-' : '+', std::abs(exponent));
  return out + exp_buf;
}

}  // namespace pairank
