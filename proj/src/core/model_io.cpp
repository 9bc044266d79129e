#include "core/model_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace spdml {

namespace {

using nlohmann::json;  // plain json keeps object keys sorted: stable output

constexpr int kFormatVersion = 1;

}  // namespace

std::string serialize_model(const SpdMlModel& model) {
  json doc;
  doc["format"] = "spdml-model";
  doc["version"] = kFormatVersion;
  doc["n"] = model.w.ambient_dim();
  doc["m"] = model.w.subspace_dim();
  doc["metric"] = metric_name(model.metric);
  doc["nu_w"] = model.nu_w;
  doc["nu_b"] = model.nu_b;
  doc["seed"] = model.seed;
  doc["optimizer"] = {
      {"iterations", model.summary.iterations},
      {"initial_cost", model.summary.initial_cost},
      {"final_cost", model.summary.final_cost},
      {"final_grad_norm", model.summary.final_grad_norm},
      {"stop_reason", stop_reason_name(model.summary.reason)},
  };
  json rows = json::array();
  for (Eigen::Index i = 0; i < model.w.ambient_dim(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < model.w.subspace_dim(); ++j)
      row.push_back(model.w.matrix()(i, j));
    rows.push_back(std::move(row));
  }
  doc["projection"] = std::move(rows);
  return doc.dump(2) + "\n";
}

SpdMlModel parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("model is not valid JSON: ") +
                                      e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "spdml-model")
      throw Error(ErrorCode::Parse, "not a model file (wrong format tag)");
    if (doc.at("version").get<int>() != kFormatVersion)
      throw Error(ErrorCode::Parse, "unsupported model version");
    const auto n = doc.at("n").get<Eigen::Index>();
    const auto m = doc.at("m").get<Eigen::Index>();
    if (n < 1 || m < 1 || m > n)
      throw Error(ErrorCode::Parse, "model dimensions out of range");

    const auto& rows = doc.at("projection");
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
      throw Error(ErrorCode::Parse, "projection row count does not match n");
    Eigen::MatrixXd w(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = rows[i];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m)
        throw Error(ErrorCode::Parse, "projection column count does not match m");
      for (Eigen::Index j = 0; j < m; ++j) w(i, j) = row[j].get<double>();
    }

    SpdMlModel model{Projection::make(w),
                     metric_from_name(doc.at("metric").get<std::string>()),
                     doc.at("nu_w").get<int>(),
                     doc.at("nu_b").get<int>(),
                     doc.at("seed").get<std::uint64_t>(),
                     {}};
    const auto& opt = doc.at("optimizer");
    model.summary.iterations = opt.at("iterations").get<int>();
    model.summary.initial_cost = opt.at("initial_cost").get<double>();
    model.summary.final_cost = opt.at("final_cost").get<double>();
    model.summary.final_grad_norm = opt.at("final_grad_norm").get<double>();
    model.summary.reason =
        stop_reason_from_name(opt.at("stop_reason").get<std::string>());
    if (model.nu_w < 0 || model.nu_b < 0)
      throw Error(ErrorCode::Parse, "neighbour counts out of range");
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse,
                std::string("model file is missing fields: ") + e.what());
  }
}

void save_model(const SpdMlModel& model, const std::string& path) {
  const std::string text = serialize_model(model);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorCode::Io, "cannot open '" + tmp + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::Io, "cannot move model into place at '" + path + "'");
  }
}

SpdMlModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

}  // namespace spdml
