#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "dtrcv/mccv.hpp"
#include "dtrcv/rng.hpp"

namespace dtrcv {

// Repeated halving mode: rerun cross-validation on each half either with the
// original validation proportion (same_q) or with it doubled so validation
// sets keep their full-data size (double_q).
enum class HalfMode { same_q, double_q };

struct HalfSplitStats {
  double s_cv_bar_sq = 0.0;   // mean two-point variance of the half risks
  double s0_bar_sq = 0.0;     // mean across-split risk variance within halves
  double s0u_bar_sq = 0.0;    // mean within-split loss variance within halves
  int b_reps = 0;
  HalfMode mode = HalfMode::same_q;
};

// B arm-stratified halvings; each half is cross-validated with the plan's
// split count. Halving jobs may run concurrently (plan.threads); results are
// schedule-independent.
HalfSplitStats half_and_half(const StageDataset& ds, const SplitPlan& plan,
                             const LossSpec& loss, int b_reps, HalfMode mode);

// Split correlation recovered from the dispersion ratio of half-sample runs.
// Can be negative when the ratio is small; consumers floor it at zero.
double rho_half(const HalfSplitStats& stats, int j_splits);

// Enlarges the half-sample correlation to compensate for the dispersion lost
// by halving, never shrinking it: max(1, s0_bar_sq * s_u_sq / (2 * s_r_sq * s0u_bar_sq)).
double inflation_factor(double s0_bar_sq, double s_u_sq, double s_r_sq, double s0u_bar_sq);

// Var[cv risk] from the across-split variance and a split correlation:
// s_r_sq * (1/J + rho/(1-rho)), with rho floored at 0 and capped just below 1.
double variance_from_rho(double s_r_sq, double rho, int j_splits);

struct PValue {
  double value = 0.5;
  bool degenerate = false;  // variance was zero; value decided by the sign
};

// One-sided p-value for "the challenger is no better": 1 - Phi(r_cv / sd).
PValue selection_pvalue(double r_cv, double variance);

struct RhoReport {
  double rho_half = 0.0;
  double inflation = 1.0;
  double rho_adj = 0.0;  // inflation * rho_half, stored unclamped
  std::map<std::string, double> catalog;
};

// The adjusted-correlation variance of a finished cross-validation run, with
// the degenerate fallback: a vanishing dispersion anywhere in the chain gives
// variance 0 and a flag instead of an error.
struct AdjustedVariance {
  double rho_half = 0.0;
  double inflation = 1.0;
  double rho_adj = 0.0;
  double variance = 0.0;
  bool degenerate = false;
};

AdjustedVariance adjusted_variance(const StageDataset& ds, const SplitPlan& plan,
                                   const LossSpec& loss, int b_reps, const CvReport& cv);

struct VariancePipeline {
  CvReport cv;
  HalfSplitStats same_q;
  std::optional<HalfSplitStats> double_q;
  RhoReport rho;
};

// Full-data cross-validation plus the halving machinery, assembled into the
// catalog of variance estimates: proposed_half, proposed_adj, rho0, rhoq,
// half_naive, and (when requested) matched_n2.
VariancePipeline run_variance_pipeline(const StageDataset& ds, const SplitPlan& plan,
                                       const LossSpec& loss, int b_reps,
                                       bool include_matched_n2);

struct RhoDecomposition {
  double rho_mc = 0.0;       // direct correlation of risks across split pairs
  double rho1 = 0.0;         // same row, different splits
  double rho2 = 0.0;         // different rows, same split
  double rho3 = 0.0;         // different rows, different splits
  double rho_formula = 0.0;  // combination of the three components
  int datasets = 0;
};

// The closed-form combination of the loss correlations:
// ((1/n) rho1 + ((n-1)/n) rho3) / ((1/n2) + ((n2-1)/n2) rho2).
double rho_from_components(double rho1, double rho2, double rho3, int n, int n2);

// Brute-force check that the closed form reproduces the directly measured
// split correlation: draws `reps` datasets from `gen`, cross-validates each,
// and pools per-row losses across splits and datasets. Lives here so studies
// can audit the formula on any generator; tests freeze its agreement bands.
RhoDecomposition rho_decomposition_oracle(const std::function<StageDataset(Rng&)>& gen,
                                          const SplitPlan& plan, const LossSpec& loss,
                                          int reps);

}  // namespace dtrcv
