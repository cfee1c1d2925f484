#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dtrcv/data.hpp"
#include "dtrcv/rng.hpp"

namespace dtrcv::testutil {

inline StageDataset make_stage(const Eigen::MatrixXd& features,
                               std::vector<std::string> names, std::vector<int> action,
                               const Eigen::VectorXd& response) {
  StageDataset ds;
  ds.features = features;
  ds.feature_names = std::move(names);
  ds.action = std::move(action);
  ds.response = response;
  ds.id.resize(static_cast<std::size_t>(features.rows()));
  for (int i = 0; i < features.rows(); ++i) ds.id[static_cast<std::size_t>(i)] = i;
  return ds;
}

// n rows, d standard-normal features, coin-flip arms (both guaranteed
// nonempty), response y = effect(a, x) + noise_sd * N(0,1).
template <class Effect>
StageDataset random_stage(int n, int d, Rng& rng, const Effect& effect,
                          double noise_sd = 1.0) {
  Eigen::MatrixXd x(n, d);
  std::vector<int> a(static_cast<std::size_t>(n));
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
    a[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
  }
  a[0] = 0;
  a[1] = 1;
  for (int i = 0; i < n; ++i) {
    y(i) = effect(a[static_cast<std::size_t>(i)], Eigen::RowVectorXd(x.row(i))) +
           noise_sd * rng.normal();
  }
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
  return make_stage(x, names, a, y);
}

}  // namespace dtrcv::testutil
