#include "heartcbr/dataset.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>

#include "text_util.hpp"

namespace heartcbr {

namespace {

struct Header {
  std::vector<std::string> names;  // canonical, by column
  bool has_target = false;
};

Header read_header(std::string_view line, bool with_case_id) {
  Header h;
  std::map<std::string, int> seen;
  auto fields = detail::split_fields(line);
  std::size_t first = 0;
  if (with_case_id) {
    if (fields.empty() || detail::to_lower(fields[0]) != "case_id") {
      throw DataError("case base header must start with case_id");
    }
    first = 1;
  }
  for (std::size_t i = first; i < fields.size(); ++i) {
    const auto name = canonical_field_name(fields[i]);
    if (!name) throw DataError("unknown header column \"" + fields[i] + "\"");
    if (seen[*name]++ > 0) throw DataError("duplicate header column \"" + *name + "\"");
    if (*name == kTargetName) h.has_target = true;
    h.names.push_back(*name);
  }
  for (auto attr : kAttributeNames) {
    if (!seen.count(std::string(attr))) {
      throw DataError("missing header column \"" + std::string(attr) + "\"");
    }
  }
  return h;
}

std::string row_prefix(std::size_t row) { return "row " + std::to_string(row) + ": "; }

std::map<std::string, std::string> row_fields(const Header& h, const std::vector<std::string>& fields,
                                              std::size_t first, std::size_t row) {
  if (fields.size() - first != h.names.size()) {
    throw DataError(row_prefix(row) + "expected " + std::to_string(h.names.size() + first) +
                    " fields, found " + std::to_string(fields.size()));
  }
  std::map<std::string, std::string> raw;
  for (std::size_t i = 0; i < h.names.size(); ++i) {
    // An empty target marks an unsolved case.
    if (h.names[i] == kTargetName && fields[first + i].empty()) continue;
    raw.emplace(h.names[i], fields[first + i]);
  }
  return raw;
}

void write_row(std::ostream& out, const Case& c) {
  for (int i = 0; i < kFeatureCount; ++i) {
    const auto a = static_cast<Attribute>(i);
    if (i > 0) out << ',';
    if (a == Attribute::StDepression) {
      out << detail::format_decimal(c.oldpeak);
    } else {
      out << static_cast<long long>(attribute_value(c, a));
    }
  }
  out << ',';
  if (c.target) out << *c.target;
  out << '\n';
}

void write_header(std::ostream& out) {
  for (auto name : kAttributeNames) out << name << ',';
  out << kTargetName << '\n';
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace

CaseBase CaseBase::from_entries(std::vector<Entry> entries) {
  CaseBase cb;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].value.target) {
      throw DataError("case " + std::to_string(entries[i].id) + " has no target");
    }
    if (i > 0 && entries[i].id <= entries[i - 1].id) {
      throw DataError("case ids must be strictly increasing (id " + std::to_string(entries[i].id) +
                      " after " + std::to_string(entries[i - 1].id) + ")");
    }
  }
  cb.next_id_ = entries.empty() ? 0 : entries.back().id + 1;
  cb.entries_ = std::move(entries);
  return cb;
}

CaseId CaseBase::add(const Case& c) {
  if (!c.target) throw DataError("a stored case must have a target");
  const CaseId id = next_id_++;
  entries_.push_back({id, c});
  return id;
}

std::vector<Case> CaseBase::cases() const {
  std::vector<Case> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.value);
  return out;
}

ParsedDataset parse_csv(std::istream& in, ValidationMode mode) {
  std::string line;
  std::optional<Header> header;
  ParsedDataset result;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const auto text = detail::clean_line(line, !header.has_value());
    if (detail::trim(text).empty()) continue;
    if (!header) {
      header = read_header(text, false);
      continue;
    }
    ++row;
    try {
      auto validated = validate_case(row_fields(*header, detail::split_fields(text), 0, row), mode);
      for (auto& w : validated.warnings) result.warnings.push_back(row_prefix(row) + w);
      result.cases.push_back(validated.value);
    } catch (const ValidationError& e) {
      throw DataError(row_prefix(row) + e.what());
    }
  }
  if (!header) throw DataError("empty file: no header row");
  return result;
}

ParsedDataset parse_csv_file(const std::filesystem::path& path, ValidationMode mode) {
  auto in = open_input(path);
  return parse_csv(in, mode);
}

void write_csv(std::ostream& out, std::span<const Case> cases) {
  write_header(out);
  for (const auto& c : cases) write_row(out, c);
}

void write_csv_file(const std::filesystem::path& path, std::span<const Case> cases) {
  auto out = open_output(path);
  write_csv(out, cases);
  finish(out, path);
}

std::size_t train_count(std::size_t n, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw DataError("train fraction must lie in (0, 1)");
  }
  // The small bias keeps products such as 1025 * 0.6 from landing one ulp
  // under an exact integer.
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction + 1e-9));
}

SplitResult split_sequential(std::span<const Case> cases, double train_fraction) {
  if (cases.empty()) throw DataError("cannot split an empty dataset");
  const std::size_t n_train = train_count(cases.size(), train_fraction);
  if (n_train == 0 || n_train >= cases.size()) {
    throw DataError("degenerate split: " + std::to_string(n_train) + " train / " +
                    std::to_string(cases.size() - n_train) + " test");
  }
  SplitResult split;
  for (std::size_t i = 0; i < n_train; ++i) split.train.add(cases[i]);
  split.test.assign(cases.begin() + static_cast<std::ptrdiff_t>(n_train), cases.end());
  return split;
}

void write_case_base(std::ostream& out, const CaseBase& cb) {
  out << "case_id,";
  write_header(out);
  for (const auto& e : cb.entries()) {
    out << e.id << ',';
    write_row(out, e.value);
  }
}

CaseBase read_case_base(std::istream& in) {
  std::string line;
  std::optional<Header> header;
  std::vector<CaseBase::Entry> entries;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const auto text = detail::clean_line(line, !header.has_value());
    if (detail::trim(text).empty()) continue;
    if (!header) {
      header = read_header(text, true);
      if (!header->has_target) throw DataError("case base file has no target column");
      continue;
    }
    ++row;
    const auto fields = detail::split_fields(text);
    const auto id = detail::parse_integer(fields.front());
    if (!id || *id < 0) throw DataError(row_prefix(row) + "bad case_id \"" + fields.front() + "\"");
    try {
      auto validated = validate_case(row_fields(*header, fields, 1, row), ValidationMode::Lenient);
      entries.push_back({static_cast<CaseId>(*id), validated.value});
    } catch (const ValidationError& e) {
      throw DataError(row_prefix(row) + e.what());
    }
  }
  if (!header) throw DataError("malformed case base: no header row");
  return CaseBase::from_entries(std::move(entries));
}

void write_case_base_file(const std::filesystem::path& path, const CaseBase& cb) {
  auto out = open_output(path);
  write_case_base(out, cb);
  finish(out, path);
}

CaseBase read_case_base_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_case_base(in);
}

}  // namespace heartcbr
