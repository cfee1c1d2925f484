#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dtrcv/rng.hpp"
#include "dtrcv/stats.hpp"
#include "dtrcv/variance.hpp"

#include "test_util.hpp"

using namespace dtrcv;
using testutil::random_stage;

namespace {

StageDataset effect_data(int n, Rng& rng) {
  return random_stage(n, 2, rng, [](int a, const Eigen::RowVectorXd& x) {
    return 0.5 * x(1) + a * (1.0 + x(0));
  });
}

LossSpec pair_loss() {
  return difference_loss(make_candidate(linear_spec({"x1"})),
                         make_candidate(tree_spec({"x1", "x2"})));
}

Candidate zero_candidate() {
  Candidate c;
  c.name = "zero";
  c.fit = [](const StageDataset&, std::uint64_t) {
    LinearContrastFit fit;
    fit.psi = Eigen::VectorXd::Zero(1);
    return FittedContrast{fit};
  };
  return c;
}

}  // namespace

TEST_CASE("halving statistics are deterministic and mode-sensitive") {
  Rng rng(61);
  const StageDataset ds = effect_data(160, rng);
  SplitPlan plan;
  plan.j_splits = 6;
  plan.seed = 31;
  const LossSpec loss = single_loss(zero_candidate());
  const HalfSplitStats a = half_and_half(ds, plan, loss, 4, HalfMode::same_q);
  const HalfSplitStats b = half_and_half(ds, plan, loss, 4, HalfMode::same_q);
  CHECK(a.s_cv_bar_sq == b.s_cv_bar_sq);
  CHECK(a.s0_bar_sq == b.s0_bar_sq);
  CHECK(a.s0u_bar_sq == b.s0u_bar_sq);
  CHECK(a.b_reps == 4);
  CHECK(a.mode == HalfMode::same_q);
  CHECK(a.s_cv_bar_sq > 0.0);

  const HalfSplitStats doubled = half_and_half(ds, plan, loss, 4, HalfMode::double_q);
  CHECK(doubled.mode == HalfMode::double_q);
  CHECK(doubled.s0_bar_sq != a.s0_bar_sq);
}

TEST_CASE("halving a constant-label dataset shows no dispersion") {
  Rng rng(62);
  StageDataset ds = effect_data(120, rng);
  ds.response.setConstant(3.0);  // every surrogate label is exactly zero
  SplitPlan plan;
  plan.j_splits = 5;
  const HalfSplitStats stats =
      half_and_half(ds, plan, single_loss(zero_candidate()), 3, HalfMode::same_q);
  CHECK(stats.s_cv_bar_sq == 0.0);
  CHECK(stats.s0_bar_sq == 0.0);
}

TEST_CASE("the half-sample correlation from pinned dispersion ratios") {
  HalfSplitStats stats;
  stats.s0_bar_sq = 1.0;
  SUBCASE("ratio 1/J recovers exactly zero") {
    stats.s_cv_bar_sq = 1.0 / 100.0;
    CHECK(rho_half(stats, 100) == 0.0);
  }
  SUBCASE("ratio 0.07 at J=100") {
    stats.s_cv_bar_sq = 0.07;
    CHECK(rho_half(stats, 100) == doctest::Approx(0.0566038).epsilon(1e-5));
  }
  SUBCASE("vanishing baseline dispersion is an error") {
    stats.s0_bar_sq = 0.0;
    stats.s_cv_bar_sq = 0.1;
    try {
      rho_half(stats, 100);
      FAIL("expected a dispersion error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::degenerate_dispersion);
    }
  }
}

TEST_CASE("the inflation factor never deflates") {
  CHECK(inflation_factor(1.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(inflation_factor(4.0, 1.0, 1.0, 1.0) == doctest::Approx(2.0));
  CHECK(inflation_factor(0.5, 1.0, 1.0, 1.0) == 1.0);  // clipped from 0.25
  try {
    inflation_factor(1.0, 1.0, 0.0, 1.0);
    FAIL("expected a dispersion error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_dispersion);
  }
  try {
    inflation_factor(1.0, 1.0, 1.0, 0.0);
    FAIL("expected a dispersion error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_dispersion);
  }
}

TEST_CASE("variance from a split correlation") {
  CHECK(variance_from_rho(1.0, 0.0, 100) == doctest::Approx(0.01));
  CHECK(variance_from_rho(1.0, 0.2, 100) == doctest::Approx(0.26));
  CHECK(variance_from_rho(1.0, -0.3, 100) == variance_from_rho(1.0, 0.0, 100));
  CHECK(std::isfinite(variance_from_rho(1.0, 2.0, 100)));

  // J -> infinity leaves only the correlated part
  const double tail = variance_from_rho(2.0, 0.25, 1000000000);
  CHECK(tail == doctest::Approx(2.0 * 0.25 / 0.75).epsilon(1e-6));

  Rng rng(63);
  for (int i = 0; i < 10000; ++i) {
    const double lo = rng.uniform01() * 0.98;
    const double hi = lo + rng.uniform01() * (0.99 - lo);
    const double s = 0.1;
    CHECK(variance_from_rho(s, hi, 50) >= variance_from_rho(s, lo, 50));
  }
}

TEST_CASE("selection p-values") {
  const PValue mid = selection_pvalue(0.0, 1.0);
  CHECK(mid.value == doctest::Approx(0.5));
  CHECK_FALSE(mid.degenerate);

  const double crit = 1.6448536269514722;
  CHECK(selection_pvalue(crit * 2.0, 4.0).value == doctest::Approx(0.05).epsilon(1e-9));

  const PValue pos = selection_pvalue(2.0, 0.0);
  CHECK(pos.value == 0.0);
  CHECK(pos.degenerate);
  const PValue neg = selection_pvalue(-2.0, 0.0);
  CHECK(neg.value == 1.0);
  CHECK(neg.degenerate);
  const PValue flat = selection_pvalue(0.0, 0.0);
  CHECK(flat.value == 0.5);
  CHECK(flat.degenerate);

  const PValue worked = selection_pvalue(-2.007, 1.5076 * 1.5076);
  CHECK(worked.value == doctest::Approx(0.9086).epsilon(2e-3));
}

TEST_CASE("the variance pipeline assembles a consistent catalog") {
  Rng rng(64);
  const StageDataset ds = effect_data(150, rng);
  SplitPlan plan;
  plan.j_splits = 8;
  plan.seed = 41;
  const LossSpec loss = pair_loss();
  const VariancePipeline pipe = run_variance_pipeline(ds, plan, loss, 6, true);

  for (const char* key :
       {"proposed_half", "proposed_adj", "rho0", "rhoq", "half_naive", "matched_n2"}) {
    INFO(key);
    CHECK(pipe.rho.catalog.count(key) == 1);
  }
  CHECK(pipe.rho.catalog.at("proposed_adj") >= pipe.rho.catalog.at("proposed_half") - 1e-15);
  CHECK(pipe.rho.rho_adj == doctest::Approx(pipe.rho.inflation * pipe.rho.rho_half));
  CHECK(pipe.rho.catalog.at("rho0") ==
        doctest::Approx(variance_from_rho(pipe.cv.s_r_sq, 0.0, plan.j_splits)));
  CHECK(pipe.rho.catalog.at("rhoq") ==
        doctest::Approx(variance_from_rho(pipe.cv.s_r_sq, plan.q, plan.j_splits)));
  CHECK(pipe.rho.catalog.at("half_naive") == doctest::Approx(pipe.same_q.s_cv_bar_sq));
  REQUIRE(pipe.double_q.has_value());
  CHECK(pipe.rho.catalog.at("matched_n2") == doctest::Approx(pipe.double_q->s_cv_bar_sq));

  // the embedded cross-validation is the standalone one
  const CvReport direct = run_mccv(ds, plan, loss);
  CHECK(pipe.cv.r_cv == direct.r_cv);
  CHECK(pipe.cv.s_r_sq == direct.s_r_sq);

  const VariancePipeline lean = run_variance_pipeline(ds, plan, loss, 6, false);
  CHECK_FALSE(lean.double_q.has_value());
  CHECK(lean.rho.catalog.count("matched_n2") == 0);

  // the summary entry point reports the same adjusted variance
  const AdjustedVariance adj = adjusted_variance(ds, plan, loss, 6, direct);
  CHECK(adj.variance == doctest::Approx(pipe.rho.catalog.at("proposed_adj")));
  CHECK(adj.rho_half == doctest::Approx(pipe.rho.rho_half));
  CHECK(adj.rho_adj == doctest::Approx(pipe.rho.rho_adj));
  CHECK_FALSE(adj.degenerate);
}

TEST_CASE("identical candidates degrade to a flagged zero variance") {
  Rng rng(65);
  const StageDataset ds = effect_data(120, rng);
  SplitPlan plan;
  plan.j_splits = 6;
  const LossSpec loss = difference_loss(zero_candidate(), zero_candidate());
  const CvReport cv = run_mccv(ds, plan, loss);
  const AdjustedVariance adj = adjusted_variance(ds, plan, loss, 4, cv);
  CHECK(adj.degenerate);
  CHECK(adj.variance == 0.0);
}

TEST_CASE("the component formula collapses correctly at the corners") {
  CHECK(rho_from_components(1.0, 0.0, 0.0, 100, 20) == doctest::Approx(0.2));
  CHECK(rho_from_components(1.0, 0.0, 0.0, 1000, 200) == doctest::Approx(0.2));
  CHECK(rho_from_components(0.0, 0.0, 0.0, 100, 20) == 0.0);
}

TEST_CASE("the measured split correlation matches the component formula") {
  Rng seed_rng(66);
  auto gen = [](Rng& rng) {
    return random_stage(80, 1, rng, [](int a, const Eigen::RowVectorXd& x) {
      return x(0) + a * (0.5 + x(0));
    });
  };
  SplitPlan plan;
  plan.j_splits = 6;
  plan.seed = 51;
  const LossSpec loss = single_loss(make_candidate(linear_spec({"x1"})));
  const RhoDecomposition d = rho_decomposition_oracle(gen, plan, loss, 300);
  CHECK(d.datasets == 300);
  CHECK(d.rho1 > d.rho3);
  CHECK(std::abs(d.rho_mc - d.rho_formula) < 0.1);
  CHECK(d.rho_formula ==
        doctest::Approx(rho_from_components(d.rho1, d.rho2, d.rho3, 80, 16)));
}

TEST_CASE("the decomposition refuses starved pairings") {
  auto gen = [](Rng& rng) {
    return random_stage(40, 1, rng, [](int, const Eigen::RowVectorXd&) { return 0.0; });
  };
  SplitPlan plan;
  plan.j_splits = 6;
  const LossSpec loss = single_loss(zero_candidate());
  try {
    rho_decomposition_oracle(gen, plan, loss, 1);
    FAIL("expected an insufficiency error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::insufficient_reps);
  }
}
