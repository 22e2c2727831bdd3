#include "pairank/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace pairank {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMismatchedLengths: return "mismatched_lengths";
    case ErrorKind::kIllegalWeight: return "illegal_weight";
    case ErrorKind::kUnknownItem: return "unknown_item";
    case ErrorKind::kUnknownWinner: return "unknown_winner";
    case ErrorKind::kInvalidParameter: return "invalid_parameter";
    case ErrorKind::kNonPositiveScore: return "non_positive_score";
    case ErrorKind::kEmptyInput: return "empty_input";
    case ErrorKind::kMissingColumn: return "missing_column";
    case ErrorKind::kMalformedRow: return "malformed_row";
  }
  return "unknown";
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return std::ranges::equal(a, b, [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) ==
           std::tolower(static_cast<unsigned char>(y));
  });
}

}  // namespace

Winner parse_winner(std::string_view label) {
  if (iequals(label, "left")) return Winner::kLeft;
  if (iequals(label, "right")) return Winner::kRight;
  if (iequals(label, "tie") || iequals(label, "draw")) return Winner::kDraw;
  throw Error(ErrorKind::kUnknownWinner,
              "unknown winner label '" + std::string(label) +
                  "' (expected left, right, tie or draw)");
}

std::string_view winner_label(Winner winner) {
  switch (winner) {
    case Winner::kLeft: return "left";
    case Winner::kRight: return "right";
    case Winner::kDraw: return "tie";
  }
  return "tie";
}

ItemId Index::insert(std::string_view name) {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  if (names_.size() >= std::numeric_limits<ItemId>::max()) {
    throw Error(ErrorKind::kInvalidParameter, "too many distinct items");
  }
  const auto id = static_cast<ItemId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

Index Index::build(std::span<const ComparisonRecord> records) {
  Index index;
  for (const auto& record : records) {
    index.insert(record.left);
    index.insert(record.right);
  }
  return index;
}

Index Index::build(std::span<const ComparisonRecord> records,
                   std::vector<IndexedRecord>& indexed) {
  Index index;
  indexed.clear();
  indexed.reserve(records.size());
  for (const auto& record : records) {
    validate_weight(record.weight);
    const ItemId left = index.insert(record.left);
    const ItemId right = index.insert(record.right);
    indexed.push_back({left, right, record.winner, record.weight});
  }
  return index;
}

Index Index::from_names(std::vector<std::string> names) {
  Index index;
  index.names_.reserve(names.size());
  for (auto& name : names) {
    if (index.ids_.contains(name)) {
      throw Error(ErrorKind::kInvalidParameter, "duplicate item '" + name + "' in index");
    }
    index.insert(name);
  }
  return index;
}

std::optional<ItemId> Index::find(std::string_view name) const {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  return std::nullopt;
}

ItemId Index::id(std::string_view name) const {
  if (auto found = find(name)) return *found;
  throw Error(ErrorKind::kUnknownItem, "unknown item '" + std::string(name) + "'");
}

void validate_weight(double weight) {
  if (!std::isfinite(weight) || weight < 0.0) {
    throw Error(ErrorKind::kIllegalWeight,
                "illegal weight " + std::to_string(weight) + " (must be finite and >= 0)");
  }
}

std::vector<ComparisonRecord> validate_batch(std::span<const std::string> lefts,
                                             std::span<const std::string> rights,
                                             std::span<const Winner> winners,
                                             std::optional<std::span<const double>> weights) {
  const auto n = lefts.size();
  if (rights.size() != n || winners.size() != n || (weights && weights->size() != n)) {
    throw Error(ErrorKind::kMismatchedLengths,
                "mismatched lengths: lefts=" + std::to_string(lefts.size()) +
                    " rights=" + std::to_string(rights.size()) +
                    " winners=" + std::to_string(winners.size()) +
                    (weights ? " weights=" + std::to_string(weights->size()) : ""));
  }
  std::vector<ComparisonRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double weight = weights ? (*weights)[i] : 1.0;
    validate_weight(weight);
    records.push_back({lefts[i], rights[i], winners[i], weight});
  }
  return records;
}

std::vector<IndexedRecord> index_records(std::span<const ComparisonRecord> records,
                                         const Index& index) {
  std::vector<IndexedRecord> out;
  out.reserve(records.size());
  for (const auto& record : records) {
    validate_weight(record.weight);
    out.push_back({index.id(record.left), index.id(record.right), record.winner, record.weight});
  }
  return out;
}

}  // namespace pairank
