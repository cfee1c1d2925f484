#include "dtrcv/surrogate.hpp"

#include <cmath>
#include <limits>

namespace dtrcv {

Pairing match_opposite_arm(const StageDataset& ds, const StandardizationStats& stats) {
  const StageDataset std_ds = apply_standardization(ds, stats);
  const int n = std_ds.n();
  const std::vector<int> treated = std_ds.arm(1);
  const std::vector<int> control = std_ds.arm(0);
  require(!treated.empty() && !control.empty(), ErrorKind::empty_arm,
          "matching needs both arms present");

  Pairing out;
  out.partner.assign(static_cast<std::size_t>(n), -1);
  out.distance.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto& pool = ds.action[static_cast<std::size_t>(i)] == 1 ? control : treated;
    double best = std::numeric_limits<double>::infinity();
    int best_j = -1;
    for (int j : pool) {
      const double d2 = (std_ds.features.row(i) - std_ds.features.row(j)).squaredNorm();
      if (d2 < best) {  // ties keep the earlier (lower) index
        best = d2;
        best_j = j;
      }
    }
    out.partner[static_cast<std::size_t>(i)] = best_j;
    out.distance[static_cast<std::size_t>(i)] = std::sqrt(best);
  }
  return out;
}

Eigen::VectorXd build_surrogates(const StageDataset& ds, const Pairing& pairing) {
  require(static_cast<int>(pairing.partner.size()) == ds.n(), ErrorKind::length_mismatch,
          "pairing does not match dataset rows");
  Eigen::VectorXd out(ds.n());
  for (int i = 0; i < ds.n(); ++i) {
    const int j = pairing.partner[static_cast<std::size_t>(i)];
    require(j >= 0 && j < ds.n(), ErrorKind::internal, "pairing index out of range");
    const double sign = ds.action[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
    out[i] = sign * (ds.response[i] - ds.response[j]);
  }
  return out;
}

}  // namespace dtrcv
