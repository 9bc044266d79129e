#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core/checks.hpp"
#include "doctest.h"

using namespace spdml;

namespace {

bool has_check(const std::vector<CheckResult>& results,
               const std::string& name) {
  return std::any_of(results.begin(), results.end(),
                     [&](const CheckResult& r) { return r.name == name; });
}

}  // namespace

TEST_SUITE("checks") {

TEST_CASE("the verification battery passes on random data") {
  for (const std::uint64_t seed : {std::uint64_t{7}, std::uint64_t{42}}) {
    const auto results = run_verification_suite(seed);
    REQUIRE(results.size() == 17);
    for (const CheckResult& r : results) {
      INFO("check ", r.name, " measured ", r.measured, " threshold ",
           r.threshold);
      CHECK(r.pass);
      CHECK(r.pass == (r.measured <= r.threshold));
      CHECK(std::isfinite(r.measured));
    }
  }
}

TEST_CASE("every invariant family is represented") {
  const auto results = run_verification_suite(3);
  for (const char* name :
       {"airm_affine_invariance", "stein_affine_invariance",
        "metric_symmetry", "self_distance_zero", "metric_ratio_limit",
        "metric_length_scale_vs_2.8284271", "logdet_grad_vs_fd",
        "airm_pair_jacobian_vs_fd", "stein_pair_jacobian_vs_fd",
        "airm_cost_jacobian_vs_fd", "stein_cost_jacobian_vs_fd",
        "geodesic_orthonormality", "geodesic_composition",
        "transport_isometry", "cost_rotation_invariance", "rcm_factorisation",
        "optimizer_monotone_cost"}) {
    INFO("missing check ", name);
    CHECK(has_check(results, name));
  }
}

TEST_CASE("the battery is deterministic in the seed") {
  const auto first = run_verification_suite(11);
  const auto second = run_verification_suite(11);
  REQUIRE(first.size() == second.size());
  for (std::size_t k = 0; k < first.size(); ++k) {
    CHECK(first[k].name == second[k].name);
    CHECK(first[k].measured == second[k].measured);
    CHECK(first[k].threshold == second[k].threshold);
    CHECK(first[k].pass == second[k].pass);
  }
}

}  // TEST_SUITE
