#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dtrcv/data.hpp"
#include "dtrcv/rng.hpp"
#include "dtrcv/sim.hpp"
#include "dtrcv/stats.hpp"
#include "dtrcv/surrogate.hpp"

#include "test_util.hpp"

using namespace dtrcv;
using testutil::make_stage;

namespace {

Pairing match_standardized(const StageDataset& ds) {
  return match_opposite_arm(ds, standardize(ds).second);
}

}  // namespace

TEST_CASE("two rows on opposite arms pair with each other") {
  Eigen::MatrixXd x(2, 1);
  x << 0, 100;
  Eigen::VectorXd y(2);
  y << 1, 2;
  const Pairing p = match_standardized(make_stage(x, {"v"}, {0, 1}, y));
  CHECK(p.partner[0] == 1);
  CHECK(p.partner[1] == 0);
}

TEST_CASE("the nearer opposite-arm row wins") {
  Eigen::MatrixXd x(3, 2);
  x << 0, 0, 1, 0, 3, 0;
  Eigen::VectorXd y(3);
  y << 5, 6, 7;
  const Pairing p = match_standardized(make_stage(x, {"u", "v"}, {1, 0, 0}, y));
  CHECK(p.partner[0] == 1);
  CHECK(p.partner[1] == 0);
  CHECK(p.partner[2] == 0);
}

TEST_CASE("exact distance ties go to the lowest index") {
  Eigen::MatrixXd x(3, 1);
  x << 0, -1, 1;
  Eigen::VectorXd y(3);
  y << 5, 6, 7;
  const StageDataset ds = make_stage(x, {"v"}, {1, 0, 0}, y);
  // matching on the raw coordinates keeps the tie exact
  StandardizationStats identity;
  identity.mean = Eigen::VectorXd::Zero(1);
  identity.sd = Eigen::VectorXd::Ones(1);
  const Pairing p = match_opposite_arm(ds, identity);
  CHECK(p.distance[1] == p.distance[2]);
  CHECK(p.partner[0] == 1);
}

TEST_CASE("surrogate labels from the worked pairs") {
  Eigen::MatrixXd x(2, 1);
  x << 0, 0;
  Eigen::VectorXd y(2);
  y << 3, 1;
  const StageDataset ds = make_stage(x, {"v"}, {1, 0}, y);
  const Pairing p = match_standardized(ds);
  const Eigen::VectorXd labels = build_surrogates(ds, p);
  // treated 3 against control 1 reads as +2 from either side
  CHECK(labels(0) == doctest::Approx(2.0));
  CHECK(labels(1) == doctest::Approx(2.0));

  Eigen::VectorXd flat(2);
  flat << 4, 4;
  const StageDataset even = make_stage(x, {"v"}, {1, 0}, flat);
  const Eigen::VectorXd zero = build_surrogates(even, match_standardized(even));
  CHECK(zero(0) == 0.0);
  CHECK(zero(1) == 0.0);
}

TEST_CASE("mutual pairs always agree on the label") {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const StageDataset ds = testutil::random_stage(
        30, 2, rng, [](int a, const Eigen::RowVectorXd& x) { return a * x(0); });
    const Pairing p = match_standardized(ds);
    const Eigen::VectorXd labels = build_surrogates(ds, p);
    for (int i = 0; i < ds.n(); ++i) {
      const int j = p.partner[i];
      if (p.partner[j] == i) CHECK(labels(i) == labels(j));
    }
  }
}

TEST_CASE("matching does not depend on row order") {
  Rng rng(12);
  for (int rep = 0; rep < 50; ++rep) {
    const StageDataset ds = testutil::random_stage(
        24, 2, rng, [](int a, const Eigen::RowVectorXd& x) { return a + x(1); });
    const Pairing p = match_standardized(ds);
    const Eigen::VectorXd labels = build_surrogates(ds, p);

    std::vector<int> perm(ds.n());
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    const StageDataset shuffled = subset(ds, perm);
    const Eigen::VectorXd shuffled_labels =
        build_surrogates(shuffled, match_standardized(shuffled));
    for (int pos = 0; pos < ds.n(); ++pos) {
      CHECK(shuffled_labels(pos) == doctest::Approx(labels(perm[pos])).epsilon(1e-12));
    }
  }
}

TEST_CASE("partners are opposite-arm nearest neighbours under the recorded scale") {
  Rng rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const StageDataset ds = testutil::random_stage(
        20, 3, rng, [](int, const Eigen::RowVectorXd&) { return 0.0; });
    const auto [std_ds, stats] = standardize(ds);
    const Pairing p = match_opposite_arm(ds, stats);
    for (int i = 0; i < ds.n(); ++i) {
      const int j = p.partner[i];
      REQUIRE(j >= 0);
      REQUIRE(j < ds.n());
      CHECK(ds.action[j] == 1 - ds.action[i]);
      double best = std::numeric_limits<double>::infinity();
      int best_idx = -1;
      for (int k = 0; k < ds.n(); ++k) {
        if (ds.action[k] == ds.action[i]) continue;
        const double d = (std_ds.features.row(i) - std_ds.features.row(k)).norm();
        if (d < best) {
          best = d;
          best_idx = k;
        }
      }
      CHECK(j == best_idx);
      CHECK(p.distance[i] == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("matched labels track the local treatment effect on average") {
  const ScenarioParams sc = scenario_by_label("e");
  Rng rng(14);
  const int reps = 500;
  std::vector<double> gaps;
  gaps.reserve(reps);
  for (int rep = 0; rep < reps; ++rep) {
    const SingleStageDraw draw = gen_single_stage(1000, sc, rng);
    const StageDataset& ds = draw.data;
    const Eigen::VectorXd labels = build_surrogates(ds, match_standardized(ds));
    gaps.push_back(labels.mean() - draw.tau.mean());
  }
  const double m = mean(gaps);
  const double se = std::sqrt(sample_variance(gaps) / reps);
  CHECK(std::abs(m) < 3.0 * se + 1e-12);
}
