#include "heartcbr/mlp.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "heartcbr/dataset.hpp"
#include "text_util.hpp"

namespace heartcbr::nn {

using nlohmann::json;

namespace {

json to_rows(const Mlp::Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mlp::Matrix from_rows(const json& rows, Eigen::Index r, Eigen::Index c, const char* what) {
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(r)) {
    throw DataError(std::string("model file: ") + what + " has wrong row count");
  }
  Mlp::Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(c)) {
      throw DataError(std::string("model file: ") + what + " has wrong column count");
    }
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

}  // namespace

void write_model(std::ostream& out, const Mlp& model) {
  json doc{{"layer_sizes", {model.inputs(), model.hidden(), model.outputs()}},
           {"bias", "last column of each weight matrix"},
           {"learning_rate", model.learning_rate()},
           {"seed", model.seed()},
           {"hidden_weights", to_rows(model.hidden_weights())},
           {"output_weights", to_rows(model.output_weights())}};
  out << doc.dump(2) << '\n';
}

Mlp read_model(std::istream& in) {
  try {
    json doc;
    in >> doc;
    const auto sizes = doc.at("layer_sizes").get<std::vector<int>>();
    if (sizes.size() != 3) throw DataError("model file: layer_sizes needs 3 entries");
    return Mlp(from_rows(doc.at("hidden_weights"), sizes[1], sizes[0] + 1, "hidden_weights"),
               from_rows(doc.at("output_weights"), sizes[2], sizes[1] + 1, "output_weights"),
               doc.at("learning_rate").get<double>(), doc.at("seed").get<std::uint64_t>());
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid model file: ") + e.what());
  }
}

void write_model_file(const std::filesystem::path& path, const Mlp& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write_model(out, model);
  if (!out.flush()) throw DataError("write failed for " + path.string());
}

Mlp read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_model(in);
}

void write_training_log(std::ostream& out, std::span<const double> epoch_mse) {
  out << "epoch,mse\n";
  for (std::size_t i = 0; i < epoch_mse.size(); ++i) {
    out << i + 1 << ',' << detail::format_real(epoch_mse[i]) << '\n';
  }
}

std::vector<double> read_training_log(std::istream& in) {
  std::string line;
  std::vector<double> mse;
  bool header = true;
  while (std::getline(in, line)) {
    const auto text = detail::clean_line(line, header);
    if (detail::trim(text).empty()) continue;
    const auto f = detail::split_fields(text);
    if (header) {
      if (f != std::vector<std::string>{"epoch", "mse"}) throw DataError("training log: bad header");
      header = false;
      continue;
    }
    const auto epoch = f.size() == 2 ? detail::parse_integer(f[0]) : std::nullopt;
    const auto value = f.size() == 2 ? detail::parse_real(f[1]) : std::nullopt;
    if (!epoch || !value || *epoch != static_cast<long long>(mse.size()) + 1) {
      throw DataError("training log: bad row " + std::to_string(mse.size() + 1));
    }
    mse.push_back(*value);
  }
  if (header) throw DataError("training log: empty file");
  return mse;
}

}  // namespace heartcbr::nn
