#include "dtrcv/variance.hpp"

#include <algorithm>
#include <cmath>

#include "dtrcv/parallel.hpp"
#include "dtrcv/stats.hpp"

namespace dtrcv {

namespace {

constexpr std::uint64_t kHalfTag = 0x48414c46ULL;
constexpr std::uint64_t kOracleGenTag = 0x4f47454eULL;
constexpr std::uint64_t kOracleCvTag = 0x4f524356ULL;
constexpr double kRhoCap = 1.0 - 1e-6;

// Arm-stratified halving of a dataset; odd arm counts give the first half the
// extra row.
std::pair<std::vector<int>, std::vector<int>> halve_stratified(const StageDataset& ds,
                                                               Rng& rng) {
  std::vector<int> first, second;
  for (int a = 0; a < 2; ++a) {
    std::vector<int> pool = ds.arm(a);
    rng.shuffle(pool);
    const std::size_t take = (pool.size() + 1) / 2;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      (k < take ? first : second).push_back(pool[k]);
    }
  }
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {std::move(first), std::move(second)};
}

}  // namespace

HalfSplitStats half_and_half(const StageDataset& ds, const SplitPlan& plan,
                             const LossSpec& loss, int b_reps, HalfMode mode) {
  validate_stage_dataset(ds);
  require(b_reps >= 1, ErrorKind::config, "need at least one halving");
  const double q_inner = mode == HalfMode::double_q ? 2.0 * plan.q : plan.q;
  require(q_inner > 0.0 && q_inner < 1.0, ErrorKind::degenerate_interval,
          "inner validation proportion must lie strictly inside (0,1)");
  const auto mode_tag = static_cast<std::uint64_t>(mode == HalfMode::double_q ? 2 : 1);

  std::vector<double> s_cv(static_cast<std::size_t>(b_reps));
  std::vector<double> s0(static_cast<std::size_t>(b_reps));
  std::vector<double> s0u(static_cast<std::size_t>(b_reps));
  parallel_for(b_reps, plan.threads, [&](int b) {
    Rng rng(derive_seed(plan.seed, kHalfTag, mode_tag, static_cast<std::uint64_t>(b)));
    const auto halves = halve_stratified(ds, rng);
    CvReport reports[2];
    for (int h = 0; h < 2; ++h) {
      SplitPlan inner = plan;
      inner.q = q_inner;
      inner.seed = derive_seed(plan.seed, kHalfTag, mode_tag, static_cast<std::uint64_t>(b),
                               static_cast<std::uint64_t>(h + 1));
      inner.threads = 1;
      reports[h] = run_mccv(subset(ds, h == 0 ? halves.first : halves.second), inner, loss);
    }
    s_cv[static_cast<std::size_t>(b)] = two_point_variance(reports[0].r_cv, reports[1].r_cv);
    s0[static_cast<std::size_t>(b)] = 0.5 * (reports[0].s_r_sq + reports[1].s_r_sq);
    s0u[static_cast<std::size_t>(b)] = 0.5 * (reports[0].s_u_sq + reports[1].s_u_sq);
  });

  HalfSplitStats stats;
  stats.s_cv_bar_sq = mean(s_cv);
  stats.s0_bar_sq = mean(s0);
  stats.s0u_bar_sq = mean(s0u);
  stats.b_reps = b_reps;
  stats.mode = mode;
  return stats;
}

double rho_half(const HalfSplitStats& stats, int j_splits) {
  require(j_splits >= 2, ErrorKind::config, "split correlation needs at least two splits");
  require(stats.s0_bar_sq > 0.0, ErrorKind::degenerate_dispersion,
          "half-sample risk dispersion is zero");
  const double ratio = stats.s_cv_bar_sq / stats.s0_bar_sq;
  return 1.0 - 1.0 / (ratio + 1.0 - 1.0 / static_cast<double>(j_splits));
}

double inflation_factor(double s0_bar_sq, double s_u_sq, double s_r_sq, double s0u_bar_sq) {
  require(s_r_sq > 0.0, ErrorKind::degenerate_dispersion,
          "across-split risk variance is zero");
  require(s0u_bar_sq > 0.0, ErrorKind::degenerate_dispersion,
          "half-sample loss dispersion is zero");
  return std::max(1.0, (s0_bar_sq * s_u_sq) / (2.0 * s_r_sq * s0u_bar_sq));
}

double variance_from_rho(double s_r_sq, double rho, int j_splits) {
  require(j_splits >= 1, ErrorKind::config, "need at least one split");
  require(s_r_sq >= 0.0, ErrorKind::degenerate_dispersion, "negative risk variance");
  const double rho_f = std::min(std::max(rho, 0.0), kRhoCap);
  return s_r_sq * (1.0 / static_cast<double>(j_splits) + rho_f / (1.0 - rho_f));
}

PValue selection_pvalue(double r_cv, double variance) {
  PValue p;
  if (variance <= 0.0) {
    p.degenerate = true;
    p.value = r_cv > 0.0 ? 0.0 : (r_cv < 0.0 ? 1.0 : 0.5);
    return p;
  }
  p.value = 1.0 - norm_cdf(r_cv / std::sqrt(variance));
  return p;
}

AdjustedVariance adjusted_variance(const StageDataset& ds, const SplitPlan& plan,
                                   const LossSpec& loss, int b_reps, const CvReport& cv) {
  AdjustedVariance out;
  if (cv.s_r_sq <= 0.0) {
    out.degenerate = true;
    return out;
  }
  try {
    const HalfSplitStats half = half_and_half(ds, plan, loss, b_reps, HalfMode::same_q);
    out.rho_half = rho_half(half, plan.j_splits);
    out.inflation = inflation_factor(half.s0_bar_sq, cv.s_u_sq, cv.s_r_sq, half.s0u_bar_sq);
    out.rho_adj = out.inflation * out.rho_half;
    out.variance = variance_from_rho(cv.s_r_sq, out.rho_adj, plan.j_splits);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_dispersion) throw;
    out = AdjustedVariance{};
    out.degenerate = true;
  }
  return out;
}

VariancePipeline run_variance_pipeline(const StageDataset& ds, const SplitPlan& plan,
                                       const LossSpec& loss, int b_reps,
                                       bool include_matched_n2) {
  VariancePipeline out;
  out.cv = run_mccv(ds, plan, loss);
  out.same_q = half_and_half(ds, plan, loss, b_reps, HalfMode::same_q);
  if (include_matched_n2) {
    out.double_q = half_and_half(ds, plan, loss, b_reps, HalfMode::double_q);
  }

  RhoReport& rho = out.rho;
  rho.rho_half = rho_half(out.same_q, plan.j_splits);
  rho.inflation = inflation_factor(out.same_q.s0_bar_sq, out.cv.s_u_sq, out.cv.s_r_sq,
                                   out.same_q.s0u_bar_sq);
  rho.rho_adj = rho.inflation * rho.rho_half;
  rho.catalog["proposed_half"] = variance_from_rho(out.cv.s_r_sq, rho.rho_half, plan.j_splits);
  rho.catalog["proposed_adj"] = variance_from_rho(out.cv.s_r_sq, rho.rho_adj, plan.j_splits);
  rho.catalog["rho0"] = variance_from_rho(out.cv.s_r_sq, 0.0, plan.j_splits);
  rho.catalog["rhoq"] = variance_from_rho(out.cv.s_r_sq, plan.q, plan.j_splits);
  rho.catalog["half_naive"] = out.same_q.s_cv_bar_sq;
  if (out.double_q) {
    rho.catalog["matched_n2"] = out.double_q->s_cv_bar_sq;
  }
  return out;
}

double rho_from_components(double rho1, double rho2, double rho3, int n, int n2) {
  require(n >= 1 && n2 >= 1, ErrorKind::config, "sample sizes must be positive");
  const double nd = n;
  const double n2d = n2;
  const double numer = rho1 / nd + (nd - 1.0) / nd * rho3;
  const double denom = 1.0 / n2d + (n2d - 1.0) / n2d * rho2;
  require(denom > 0.0, ErrorKind::degenerate_dispersion,
          "within-split correlation drives the denominator to zero");
  return numer / denom;
}

namespace {

constexpr std::uint64_t kOracleFitTag = 0xF17F17ULL;

struct OraclePartial {
  MomentAccumulator u_moments, r_moments;
  PairAccumulator same_row, same_split, cross, risk_pairs;
  int n = 0;
  int n2 = 0;
};

}  // namespace

RhoDecomposition rho_decomposition_oracle(const std::function<StageDataset(Rng&)>& gen,
                                          const SplitPlan& plan, const LossSpec& loss,
                                          int reps) {
  require(reps >= 2, ErrorKind::insufficient_reps, "need at least two datasets");
  require(plan.j_splits >= 2, ErrorKind::config, "need at least two splits per dataset");

  std::vector<OraclePartial> partials(static_cast<std::size_t>(reps));
  parallel_for(reps, plan.threads, [&](int d) {
    OraclePartial& part = partials[static_cast<std::size_t>(d)];
    Rng gen_rng(derive_seed(plan.seed, kOracleGenTag, static_cast<std::uint64_t>(d)));
    const StageDataset ds = gen(gen_rng);
    SplitPlan local = plan;
    local.seed = derive_seed(plan.seed, kOracleCvTag, static_cast<std::uint64_t>(d));
    local.threads = 1;

    const int j_splits = plan.j_splits;
    std::vector<std::vector<int>> val_rows(static_cast<std::size_t>(j_splits));
    std::vector<std::vector<double>> losses(static_cast<std::size_t>(j_splits));
    std::vector<double> risks(static_cast<std::size_t>(j_splits));
    std::vector<double> sum_u(static_cast<std::size_t>(j_splits), 0.0);
    std::vector<double> sum_uu(static_cast<std::size_t>(j_splits), 0.0);

    for (int j = 0; j < j_splits; ++j) {
      const SplitIndices idx = stratified_split(ds, local, j);
      const SplitEval eval =
          risk_on_split(subset(ds, idx.train), subset(ds, idx.validation), loss,
                        derive_seed(local.seed, kOracleFitTag, static_cast<std::uint64_t>(j)));
      auto& u = losses[static_cast<std::size_t>(j)];
      u.assign(eval.losses.data(), eval.losses.data() + eval.losses.size());
      val_rows[static_cast<std::size_t>(j)] = idx.validation;
      risks[static_cast<std::size_t>(j)] = eval.risk;
      for (double v : u) {
        part.u_moments.add(v);
        sum_u[static_cast<std::size_t>(j)] += v;
        sum_uu[static_cast<std::size_t>(j)] += v * v;
      }
      part.r_moments.add(eval.risk);
      const auto m = static_cast<double>(u.size());
      part.same_split.add_bulk(m * (m - 1.0), (m - 1.0) * sum_u[static_cast<std::size_t>(j)],
                               (m - 1.0) * sum_u[static_cast<std::size_t>(j)],
                               (m - 1.0) * sum_uu[static_cast<std::size_t>(j)],
                               (m - 1.0) * sum_uu[static_cast<std::size_t>(j)],
                               sum_u[static_cast<std::size_t>(j)] * sum_u[static_cast<std::size_t>(j)] -
                                   sum_uu[static_cast<std::size_t>(j)]);
    }
    part.n = ds.n();
    part.n2 = static_cast<int>(val_rows[0].size());

    // Risk pairs across distinct splits of this dataset.
    double sum_r = 0.0, sum_rr = 0.0;
    for (double r : risks) {
      sum_r += r;
      sum_rr += r * r;
    }
    const auto jd = static_cast<double>(j_splits);
    part.risk_pairs.add_bulk(jd * (jd - 1.0), (jd - 1.0) * sum_r, (jd - 1.0) * sum_r,
                             (jd - 1.0) * sum_rr, (jd - 1.0) * sum_rr,
                             sum_r * sum_r - sum_rr);

    // Loss pairs across distinct splits: the rows shared by both validation
    // sets feed the same-row component and are subtracted from the cross one.
    for (int j = 0; j < j_splits; ++j) {
      for (int k = j + 1; k < j_splits; ++k) {
        const auto& rows_j = val_rows[static_cast<std::size_t>(j)];
        const auto& rows_k = val_rows[static_cast<std::size_t>(k)];
        const auto& u_j = losses[static_cast<std::size_t>(j)];
        const auto& u_k = losses[static_cast<std::size_t>(k)];
        double c_su = 0, c_sv = 0, c_suu = 0, c_svv = 0, c_suv = 0, c_n = 0;
        std::size_t a = 0, b = 0;
        while (a < rows_j.size() && b < rows_k.size()) {
          if (rows_j[a] < rows_k[b]) {
            ++a;
          } else if (rows_j[a] > rows_k[b]) {
            ++b;
          } else {
            const double u = u_j[a];
            const double v = u_k[b];
            part.same_row.add(u, v);
            part.same_row.add(v, u);
            c_n += 1.0;
            c_su += u;
            c_sv += v;
            c_suu += u * u;
            c_svv += v * v;
            c_suv += u * v;
            ++a;
            ++b;
          }
        }
        const auto mj = static_cast<double>(rows_j.size());
        const auto mk = static_cast<double>(rows_k.size());
        const double su = sum_u[static_cast<std::size_t>(j)] * mk - c_su;
        const double sv = sum_u[static_cast<std::size_t>(k)] * mj - c_sv;
        const double suu = sum_uu[static_cast<std::size_t>(j)] * mk - c_suu;
        const double svv = sum_uu[static_cast<std::size_t>(k)] * mj - c_svv;
        const double suv =
            sum_u[static_cast<std::size_t>(j)] * sum_u[static_cast<std::size_t>(k)] - c_suv;
        const double n_pairs = mj * mk - c_n;
        part.cross.add_bulk(n_pairs, su, sv, suu, svv, suv);
        part.cross.add_bulk(n_pairs, sv, su, svv, suu, suv);
      }
    }
  });

  OraclePartial total;
  for (const auto& part : partials) {
    total.u_moments.merge(part.u_moments);
    total.r_moments.merge(part.r_moments);
    total.same_row.merge(part.same_row);
    total.same_split.merge(part.same_split);
    total.cross.merge(part.cross);
    total.risk_pairs.merge(part.risk_pairs);
    total.n = part.n;
    total.n2 = part.n2;
  }
  require(total.same_row.count() >= 100.0 && total.same_split.count() >= 100.0 &&
              total.cross.count() >= 100.0 && total.risk_pairs.count() >= 100.0,
          ErrorKind::insufficient_reps, "too few pairs to estimate the correlations");

  const double mu_u = total.u_moments.mean();
  const double var_u = total.u_moments.variance_pop();
  require(var_u > 0.0, ErrorKind::degenerate_dispersion, "pooled loss variance is zero");
  const double mu_r = total.r_moments.mean();
  const double var_r = total.r_moments.variance_pop();
  require(var_r > 0.0, ErrorKind::degenerate_dispersion, "pooled risk variance is zero");

  RhoDecomposition out;
  out.rho1 = total.same_row.correlation_about(mu_u, var_u);
  out.rho2 = total.same_split.correlation_about(mu_u, var_u);
  out.rho3 = total.cross.correlation_about(mu_u, var_u);
  out.rho_mc = total.risk_pairs.correlation_about(mu_r, var_r);
  out.rho_formula = rho_from_components(out.rho1, out.rho2, out.rho3, total.n, total.n2);
  out.datasets = reps;
  return out;
}

}  // namespace dtrcv
