#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "core/model_io.hpp"
#include "core/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace spdml;
namespace fs = std::filesystem;

namespace {

SpdMlModel sample_model(std::uint64_t seed) {
  Rng rng(seed);
  SpdMlModel model{testutil::random_projection(rng, 5, 2),
                   Metric::Stein,
                   3,
                   1,
                   971,
                   {}};
  model.summary.iterations = 17;
  model.summary.initial_cost = 12.5;
  model.summary.final_cost = -3.25;
  model.summary.final_grad_norm = 4.5e-7;
  model.summary.reason = StopReason::CostTolerance;
  return model;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("spdml_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_SUITE("model_io") {

TEST_CASE("serialisation round trips every field bit for bit") {
  const SpdMlModel model = sample_model(101);
  const SpdMlModel back = parse_model(serialize_model(model));
  CHECK(back.metric == model.metric);
  CHECK(back.nu_w == model.nu_w);
  CHECK(back.nu_b == model.nu_b);
  CHECK(back.seed == model.seed);
  CHECK(back.summary.iterations == model.summary.iterations);
  CHECK(back.summary.initial_cost == model.summary.initial_cost);
  CHECK(back.summary.final_cost == model.summary.final_cost);
  CHECK(back.summary.final_grad_norm == model.summary.final_grad_norm);
  CHECK(back.summary.reason == model.summary.reason);
  REQUIRE(back.w.ambient_dim() == model.w.ambient_dim());
  REQUIRE(back.w.subspace_dim() == model.w.subspace_dim());
  CHECK((back.w.matrix() - model.w.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("serialisation is deterministic") {
  const SpdMlModel model = sample_model(103);
  const std::string once = serialize_model(model);
  const std::string twice = serialize_model(parse_model(once));
  CHECK(once == twice);
  CHECK(once.find("\"format\": \"spdml-model\"") != std::string::npos);
}

TEST_CASE("file round trip is byte identical") {
  TempDir tmp;
  const fs::path path = tmp.path / "model.json";
  const SpdMlModel model = sample_model(105);
  save_model(model, path.string());
  const std::string first = slurp(path);
  const SpdMlModel loaded = load_model(path.string());
  CHECK((loaded.w.matrix() - model.w.matrix()).cwiseAbs().maxCoeff() == 0.0);
  const fs::path rewrite = tmp.path / "model2.json";
  save_model(loaded, rewrite.string());
  CHECK(slurp(rewrite) == first);
  // No leftover temporary next to the model.
  CHECK_FALSE(fs::exists(path.string() + ".tmp"));
}

TEST_CASE("parse rejects malformed input") {
  for (const char* bad : {
           "",
           "not json at all",
           "{\"format\": \"something-else\", \"version\": 1}",
           "{\"format\": \"spdml-model\", \"version\": 99}",
           "{\"format\": \"spdml-model\", \"version\": 1}",
       }) {
    try {
      parse_model(bad);
      FAIL("expected Parse for: ", bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
    }
  }
}

TEST_CASE("parse rejects a projection that is not orthonormal") {
  std::string text = serialize_model(sample_model(107));
  // Corrupt one projection entry badly enough to break orthonormality.
  const auto pos = text.find("\"projection\"");
  REQUIRE(pos != std::string::npos);
  const auto digit = text.find("0.", pos);
  REQUIRE(digit != std::string::npos);
  text.replace(digit, 2, "9.");
  CHECK_THROWS_AS(parse_model(text), Error);
}

TEST_CASE("missing files and unwritable paths surface as Io") {
  try {
    load_model("/nonexistent/model.json");
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
  try {
    save_model(sample_model(109), "/nonexistent/dir/model.json");
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

}  // TEST_SUITE
