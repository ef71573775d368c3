#include "gdscap/channel_io.hpp"

#include "json.hpp"

#include <sstream>

namespace gdscap {

namespace {

using nlohmann::ordered_json;

ComplexMatrix matrix_from_json(const ordered_json& jm, int rows, int cols, const std::string& ctx) {
  if (!jm.is_array() || static_cast<int>(jm.size()) != rows)
    throw channel_error(ctx + ": expected " + std::to_string(rows) + " rows");
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = jm.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw channel_error(ctx + ": expected " + std::to_string(cols) + " columns in row " +
                          std::to_string(i));
    for (int j = 0; j < cols; ++j) {
      const auto& entry = row.at(j);
      if (!entry.is_array() || entry.size() != 2 || !entry.at(0).is_number() ||
          !entry.at(1).is_number())
        throw channel_error(ctx + ": entry (" + std::to_string(i) + "," + std::to_string(j) +
                            ") must be a [re, im] pair");
      m(i, j) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

ordered_json matrix_to_json(const ComplexMatrix& m) {
  ordered_json jm = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(ordered_json::array({m(i, j).real(), m(i, j).imag()}));
    jm.push_back(std::move(row));
  }
  return jm;
}

KrausChannel channel_from_json(const ordered_json& j) {
  if (!j.is_object()) throw channel_error("channel JSON: expected an object");
  for (const char* key : {"name", "dim_in", "dim_out", "kraus"})
    if (!j.contains(key)) throw channel_error(std::string("channel JSON: missing field '") + key + "'");
  if (!j.at("dim_in").is_number_integer() || !j.at("dim_out").is_number_integer())
    throw channel_error("channel JSON: dim_in/dim_out must be integers");
  const int dim_in = j.at("dim_in").get<int>();
  const int dim_out = j.at("dim_out").get<int>();
  if (dim_in <= 0 || dim_out <= 0) throw channel_error("channel JSON: dimensions must be positive");
  const std::string name = j.at("name").get<std::string>();
  if (!j.at("kraus").is_array() || j.at("kraus").empty())
    throw channel_error("channel JSON: kraus must be a nonempty array");
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < j.at("kraus").size(); ++k)
    kraus.push_back(matrix_from_json(j.at("kraus").at(k), dim_out, dim_in,
                                     name + " kraus[" + std::to_string(k) + "]"));
  return make_channel(name, std::move(kraus));  // validates CPTP
}

ordered_json channel_to_json(const KrausChannel& ch) {
  ordered_json j;
  j["name"] = ch.name;
  j["dim_in"] = ch.dim_in;
  j["dim_out"] = ch.dim_out;
  j["kraus"] = ordered_json::array();
  for (const auto& e : ch.kraus) j["kraus"].push_back(matrix_to_json(e));
  return j;
}

ordered_json parse(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw channel_error("invalid JSON input");
  return j;
}

}  // namespace

KrausChannel channel_from_json_text(const std::string& text) {
  return channel_from_json(parse(text));
}

std::string channel_to_json_text(const KrausChannel& ch, int indent) {
  return channel_to_json(ch).dump(indent) + "\n";
}

bool json_text_is_gds(const std::string& text) {
  ordered_json j = parse(text);
  return j.is_object() && j.contains("subchannels");
}

GdsChannel gds_from_json_text(const std::string& text, bool pad_kraus) {
  ordered_json j = parse(text);
  if (!j.is_object() || !j.contains("subchannels") || !j.at("subchannels").is_array() ||
      j.at("subchannels").empty())
    throw channel_error("direct-sum JSON: missing nonempty 'subchannels' array");
  std::string name = j.contains("name") ? j.at("name").get<std::string>() : "gds";
  std::vector<KrausChannel> subs;
  int max_kraus = 0;
  for (const auto& js : j.at("subchannels")) {
    subs.push_back(channel_from_json(js));
    max_kraus = std::max(max_kraus, subs.back().kraus_count());
  }
  if (pad_kraus)
    for (auto& sub : subs)
      if (sub.kraus_count() < max_kraus) sub = zero_pad(sub, max_kraus);
  return build_gds(std::move(subs), std::move(name));
}

std::string gds_to_json_text(const GdsChannel& g, int indent) {
  ordered_json j;
  j["name"] = g.assembled.name;
  j["subchannels"] = ordered_json::array();
  for (const auto& sub : g.subchannels) j["subchannels"].push_back(channel_to_json(sub));
  return j.dump(indent) + "\n";
}

}  // namespace gdscap
