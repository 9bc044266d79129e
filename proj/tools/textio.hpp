// File formats used by the command line tool: whitespace matrix files with a
// "# rows cols" header line, JSON manifests listing samples, and atomic
// writes for everything it produces.
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// Data-level failure (unreadable file, malformed content, bad manifest).
// The main dispatcher turns these into the data-error exit code.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major

  double at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
};

Matrix read_matrix_file(const std::filesystem::path& path);

// %.17g entries, so doubles survive a write/read round trip exactly.
void write_matrix_file(const std::filesystem::path& path, const Matrix& m);

// Write text via a sibling temp file and rename into place.
void atomic_write_text(const std::filesystem::path& path,
                       const std::string& text);

struct ManifestEntry {
  std::filesystem::path path;  // resolved against the manifest directory
  int label = 0;
};

struct Manifest {
  int version = 1;
  std::string kind;  // "spd" or "features"
  // Declared sample size: matrix dimension for spd manifests ("n"), feature
  // count per observation for feature manifests ("n_features"). Every listed
  // file must match it.
  int dim = 0;
  std::vector<ManifestEntry> samples;
};

Manifest read_manifest(const std::filesystem::path& path);

// Paths are stored relative to the manifest's directory when possible.
void write_manifest(const std::filesystem::path& path, const std::string& kind,
                    int dim, const std::vector<ManifestEntry>& samples);

}  // namespace cli
