#include "textio.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cli {

namespace {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");

  std::string header;
  std::getline(in, header);
  std::istringstream head(header);
  char hash = 0;
  Matrix m;
  if (!(head >> hash >> m.rows >> m.cols) || hash != '#' || m.rows < 1 ||
      m.cols < 1)
    throw DataError("'" + path.string() +
                    "': expected a '# rows cols' header line");

  m.values.resize(static_cast<size_t>(m.rows) * m.cols);
  for (double& value : m.values)
    if (!(in >> value))
      throw DataError("'" + path.string() + "': expected " +
                      std::to_string(m.values.size()) + " numeric entries");
  double extra;
  if (in >> extra)
    throw DataError("'" + path.string() + "': trailing data after " +
                    std::to_string(m.values.size()) + " entries");
  return m;
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& m) {
  std::ostringstream out;
  out << "# " << m.rows << " " << m.cols << "\n";
  char buffer[40];
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      std::snprintf(buffer, sizeof buffer, "%.17g", m.at(r, c));
      out << buffer << (c + 1 == m.cols ? "" : " ");
    }
    out << "\n";
  }
  atomic_write_text(path, out.str());
}

void atomic_write_text(const std::filesystem::path& path,
                       const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open '" + tmp.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw DataError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot move '" + tmp.string() + "' into place");
  }
}

Manifest read_manifest(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "spdml-manifest")
      throw DataError("'" + path.string() + "' is not a manifest");
    Manifest manifest;
    manifest.version = doc.at("version").get<int>();
    if (manifest.version != 1)
      throw DataError("'" + path.string() + "': unsupported manifest version " +
                      std::to_string(manifest.version));
    manifest.kind = doc.at("kind").get<std::string>();
    if (manifest.kind != "spd" && manifest.kind != "features")
      throw DataError("manifest kind must be 'spd' or 'features'");
    manifest.dim =
        doc.at(manifest.kind == "spd" ? "n" : "n_features").get<int>();
    if (manifest.dim < 1)
      throw DataError("'" + path.string() + "': declared size must be positive");
    const auto base = path.has_parent_path()
                          ? path.parent_path()
                          : std::filesystem::path(".");
    for (const auto& sample : doc.at("samples")) {
      ManifestEntry entry;
      const std::filesystem::path rel =
          sample.at("path").get<std::string>();
      entry.path = rel.is_absolute() ? rel : base / rel;
      entry.label = sample.at("label").get<int>();
      if (entry.label < 1)
        throw DataError("'" + path.string() + "': labels must be positive, '" +
                        rel.generic_string() + "' has label " +
                        std::to_string(entry.label));
      manifest.samples.push_back(std::move(entry));
    }
    if (manifest.samples.empty())
      throw DataError("manifest '" + path.string() + "' lists no samples");
    return manifest;
  } catch (const json::exception& e) {
    throw DataError("manifest '" + path.string() +
                    "' is missing fields: " + e.what());
  }
}

void write_manifest(const std::filesystem::path& path, const std::string& kind,
                    int dim, const std::vector<ManifestEntry>& samples) {
  const auto base =
      path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  json doc;
  doc["format"] = "spdml-manifest";
  doc["version"] = 1;
  doc["kind"] = kind;
  doc[kind == "spd" ? "n" : "n_features"] = dim;
  json list = json::array();
  for (const auto& sample : samples) {
    const auto rel = sample.path.lexically_proximate(base);
    list.push_back({{"path", rel.generic_string()}, {"label", sample.label}});
  }
  doc["samples"] = std::move(list);
  atomic_write_text(path, doc.dump(2) + "\n");
}

}  // namespace cli
