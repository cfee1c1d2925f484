#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dtrcv/data.hpp"

namespace dtrcv {

// partner[i] is the index (within the same dataset) of i's nearest neighbor
// in the opposite arm, distance[i] the matching distance. Partners may repeat.
struct Pairing {
  std::vector<int> partner;
  std::vector<double> distance;
};

// Nearest opposite-arm neighbor for every row, by Euclidean distance on
// features standardized with `stats`. Exact distance ties go to the lowest
// partner index. The dataset is typically a validation set standing on its
// own, with `stats` computed from it.
Pairing match_opposite_arm(const StageDataset& ds, const StandardizationStats& stats);

// Surrogate effect label: (2A_i - 1) * (Y_i - Y_partner(i)). The responses are
// used on their original scale.
Eigen::VectorXd build_surrogates(const StageDataset& ds, const Pairing& pairing);

}  // namespace dtrcv
