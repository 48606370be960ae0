#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "heartcbr/case.hpp"

namespace heartcbr {

using CaseId = std::uint64_t;

/// I/O, format and structural errors from the dataset readers and writers.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solved cases in insertion order. Ids are assigned on insertion and never
/// reused; every stored case carries a target.
class CaseBase {
 public:
  struct Entry {
    CaseId id;
    Case value;

    bool operator==(const Entry&) const = default;
  };

  CaseBase() = default;

  /// Rebuilds a base from persisted entries; ids must be strictly increasing.
  static CaseBase from_entries(std::vector<Entry> entries);

  CaseId add(const Case& c);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::span<const Entry> entries() const noexcept { return entries_; }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  CaseId next_id() const noexcept { return next_id_; }

  std::vector<Case> cases() const;

  bool operator==(const CaseBase&) const = default;

 private:
  std::vector<Entry> entries_;
  CaseId next_id_ = 0;
};

struct ParsedDataset {
  std::vector<Case> cases;
  std::vector<std::string> warnings;  // prefixed with the row they came from
};

/// Reads a headed CSV. Header names are matched case-insensitively with the
/// {sex, gender} and {trestbps, resttbps} aliases; the target column is
/// optional. Errors cite the 1-based data row.
ParsedDataset parse_csv(std::istream& in, ValidationMode mode = ValidationMode::Lenient);
ParsedDataset parse_csv_file(const std::filesystem::path& path,
                             ValidationMode mode = ValidationMode::Lenient);

/// Writes cases under the canonical 14-column header (target left blank for
/// unsolved cases).
void write_csv(std::ostream& out, std::span<const Case> cases);
void write_csv_file(const std::filesystem::path& path, std::span<const Case> cases);

struct SplitResult {
  CaseBase train;
  std::vector<Case> test;
};

/// First floor(n * train_fraction) cases train, the rest test; file order kept.
std::size_t train_count(std::size_t n, double train_fraction);
SplitResult split_sequential(std::span<const Case> cases, double train_fraction = 0.6);

/// Case-base persistence: canonical CSV prefixed by a case_id column.
void write_case_base(std::ostream& out, const CaseBase& cb);
CaseBase read_case_base(std::istream& in);
void write_case_base_file(const std::filesystem::path& path, const CaseBase& cb);
CaseBase read_case_base_file(const std::filesystem::path& path);

}  // namespace heartcbr
