#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "dtrcv/estimators.hpp"
#include "dtrcv/rng.hpp"

namespace dtrcv {

int TreeContrastFit::leaf_count() const {
  int leaves = 0;
  for (const auto& node : nodes) {
    if (node.feature < 0) ++leaves;
  }
  return leaves;
}

int TreeContrastFit::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> level(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    if (node.feature < 0) {
      deepest = std::max(deepest, level[i]);
    } else {
      level[static_cast<std::size_t>(node.left)] = level[i] + 1;
      level[static_cast<std::size_t>(node.right)] = level[i] + 1;
    }
  }
  return deepest;
}

int TreeContrastFit::leaf_for(const Eigen::RowVectorXd& row) const {
  int cur = 0;
  while (nodes[static_cast<std::size_t>(cur)].feature >= 0) {
    const auto& node = nodes[static_cast<std::size_t>(cur)];
    const double v = row[split_cols[static_cast<std::size_t>(node.feature)]];
    cur = v <= node.threshold ? node.left : node.right;
  }
  return cur;
}

double TreeContrastFit::predict(const Eigen::RowVectorXd& row) const {
  return nodes[static_cast<std::size_t>(leaf_for(row))].value;
}

namespace {

constexpr double kPenaltyWeight = 1.0;  // weight of the honest variance penalty

struct ArmStats {
  double n[2] = {0, 0};
  double sum[2] = {0, 0};
  double ssq[2] = {0, 0};

  void add(int arm, double y) {
    n[arm] += 1.0;
    sum[arm] += y;
    ssq[arm] += y * y;
  }
  double total() const { return n[0] + n[1]; }
  double arm_mean(int arm) const { return n[arm] > 0 ? sum[arm] / n[arm] : 0.0; }
  // Sample variance within one arm; 0 below two observations.
  double arm_var(int arm) const {
    if (n[arm] < 2.0) return 0.0;
    const double v = (ssq[arm] - sum[arm] * sum[arm] / n[arm]) / (n[arm] - 1.0);
    return v > 0.0 ? v : 0.0;
  }
  static ArmStats diff(const ArmStats& whole, const ArmStats& part) {
    ArmStats out;
    for (int a = 0; a < 2; ++a) {
      out.n[a] = whole.n[a] - part.n[a];
      out.sum[a] = whole.sum[a] - part.sum[a];
      out.ssq[a] = whole.ssq[a] - part.ssq[a];
    }
    return out;
  }
};

enum class TreeTask { causal, regression };

// All per-fit state for one recursive-partitioning fit. Rows are local ids
// 0..m-1 into flat arrays; per-node membership is kept as per-feature sorted
// index segments so split search is a linear sweep and children inherit
// sortedness by stable partition.
struct Grower {
  TreeTask task = TreeTask::causal;
  bool honest = false;
  int min_leaf = 10;   // per arm (causal) or per leaf (regression)
  int max_depth = 5;
  double ratio_factor = 2.0;  // 1 + N_structure / N_estimation

  std::vector<std::vector<double>> feat;  // per split feature
  std::vector<double> y;
  std::vector<int> arm;

  struct Grown {
    std::vector<TreeNode> nodes;
    std::vector<double> r_leaf;     // structure risk of the node as a leaf
    std::vector<double> est_value;  // estimation-half value of the node as a leaf
    std::vector<ArmStats> est_stats;
  };

  double node_value(const ArmStats& s) const {
    if (task == TreeTask::regression) {
      const double n = s.total();
      return n > 0 ? (s.sum[0] + s.sum[1]) / n : 0.0;
    }
    return s.arm_mean(1) - s.arm_mean(0);
  }

  // Structure-sample score of a node as a leaf; bigger is better. Splits are
  // chosen to maximize the summed score of the children, which trades effect
  // heterogeneity against (for honest trees) within-leaf variance.
  double node_score(const ArmStats& s) const {
    if (task == TreeTask::regression) {
      const double n = s.total();
      if (n <= 0) return 0.0;
      const double m = (s.sum[0] + s.sum[1]) / n;
      return n * m * m;
    }
    const double tau = s.arm_mean(1) - s.arm_mean(0);
    double score = s.total() * tau * tau;
    if (honest) {
      const double n = s.total();
      const double p = s.n[1] / n;
      score -= kPenaltyWeight * ratio_factor * (s.arm_var(1) / p + s.arm_var(0) / (1.0 - p));
    }
    return score;
  }

  bool child_ok(const ArmStats& str_side, const ArmStats& est_side) const {
    if (task == TreeTask::regression) {
      return str_side.total() >= min_leaf && est_side.total() >= min_leaf;
    }
    return str_side.n[0] >= min_leaf && str_side.n[1] >= min_leaf &&
           est_side.n[0] >= min_leaf && est_side.n[1] >= min_leaf;
  }

  ArmStats stats_of(const std::vector<int>& rows) const {
    ArmStats s;
    for (int r : rows) s.add(arm[static_cast<std::size_t>(r)], y[static_cast<std::size_t>(r)]);
    return s;
  }

  std::vector<int> sorted_by_feature(const std::vector<int>& rows, int f) const {
    std::vector<int> out = rows;
    const auto& v = feat[static_cast<std::size_t>(f)];
    std::sort(out.begin(), out.end(), [&](int a, int b) {
      const double va = v[static_cast<std::size_t>(a)];
      const double vb = v[static_cast<std::size_t>(b)];
      return va < vb || (va == vb && a < b);
    });
    return out;
  }

  Grown grow(const std::vector<int>& structure_rows, const std::vector<int>& estimation_rows) {
    const int n_feat = static_cast<int>(feat.size());
    struct Pending {
      std::vector<std::vector<int>> str_sorted;  // per feature
      std::vector<std::vector<int>> est_sorted;
      int node = 0;
      int depth = 0;
    };

    Grown out;
    auto new_node = [&](const ArmStats& str_stats, const ArmStats& est_stats) {
      out.nodes.push_back(TreeNode{});
      out.r_leaf.push_back(-node_score(str_stats));
      out.est_value.push_back(node_value(est_stats));
      out.est_stats.push_back(est_stats);
      return static_cast<int>(out.nodes.size()) - 1;
    };

    Pending root;
    root.str_sorted.reserve(static_cast<std::size_t>(n_feat));
    root.est_sorted.reserve(static_cast<std::size_t>(n_feat));
    for (int f = 0; f < n_feat; ++f) {
      root.str_sorted.push_back(sorted_by_feature(structure_rows, f));
      root.est_sorted.push_back(sorted_by_feature(estimation_rows, f));
    }
    root.node = new_node(stats_of(structure_rows), stats_of(estimation_rows));

    std::vector<std::uint8_t> goes_left(y.size(), 0);
    std::vector<Pending> stack;
    stack.push_back(std::move(root));

    while (!stack.empty()) {
      Pending cur = std::move(stack.back());
      stack.pop_back();
      const std::vector<int>& str0 = cur.str_sorted[0];
      const std::vector<int>& est0 = cur.est_sorted[0];
      const ArmStats str_total = stats_of(str0);
      const ArmStats est_total = stats_of(est0);

      double best_score = -std::numeric_limits<double>::infinity();
      int best_f = -1;
      double best_t = 0.0;
      if (cur.depth < max_depth) {
        for (int f = 0; f < n_feat; ++f) {
          const auto& ids = cur.str_sorted[static_cast<std::size_t>(f)];
          const auto& est_ids = cur.est_sorted[static_cast<std::size_t>(f)];
          const auto& values = feat[static_cast<std::size_t>(f)];
          ArmStats left;
          ArmStats est_left;
          std::size_t est_ptr = 0;
          for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
            const int row = ids[k];
            left.add(arm[static_cast<std::size_t>(row)], y[static_cast<std::size_t>(row)]);
            const double v = values[static_cast<std::size_t>(row)];
            const double v_next = values[static_cast<std::size_t>(ids[k + 1])];
            if (v == v_next) continue;
            const double t = v + (v_next - v) / 2.0;
            if (!(t < v_next)) continue;  // adjacent floats
            while (est_ptr < est_ids.size() &&
                   values[static_cast<std::size_t>(est_ids[est_ptr])] <= t) {
              const int er = est_ids[est_ptr];
              est_left.add(arm[static_cast<std::size_t>(er)], y[static_cast<std::size_t>(er)]);
              ++est_ptr;
            }
            const ArmStats right = ArmStats::diff(str_total, left);
            const ArmStats est_right = ArmStats::diff(est_total, est_left);
            if (!child_ok(left, est_left) || !child_ok(right, est_right)) continue;
            const double score = node_score(left) + node_score(right);
            if (score > best_score) {
              best_score = score;
              best_f = f;
              best_t = t;
            }
          }
        }
      }

      const double parent_score = node_score(str_total);
      const bool do_split =
          best_f >= 0 && best_score > parent_score + 1e-12 * (1.0 + std::abs(parent_score));
      if (!do_split) continue;  // node stays a leaf

      const auto& split_values = feat[static_cast<std::size_t>(best_f)];
      for (int r : cur.str_sorted[0]) {
        goes_left[static_cast<std::size_t>(r)] =
            split_values[static_cast<std::size_t>(r)] <= best_t ? 1 : 0;
      }
      for (int r : cur.est_sorted[0]) {
        goes_left[static_cast<std::size_t>(r)] =
            split_values[static_cast<std::size_t>(r)] <= best_t ? 1 : 0;
      }

      Pending lchild, rchild;
      lchild.depth = rchild.depth = cur.depth + 1;
      lchild.str_sorted.resize(static_cast<std::size_t>(n_feat));
      lchild.est_sorted.resize(static_cast<std::size_t>(n_feat));
      rchild.str_sorted.resize(static_cast<std::size_t>(n_feat));
      rchild.est_sorted.resize(static_cast<std::size_t>(n_feat));
      for (int f = 0; f < n_feat; ++f) {
        for (int r : cur.str_sorted[static_cast<std::size_t>(f)]) {
          (goes_left[static_cast<std::size_t>(r)] ? lchild : rchild)
              .str_sorted[static_cast<std::size_t>(f)]
              .push_back(r);
        }
        for (int r : cur.est_sorted[static_cast<std::size_t>(f)]) {
          (goes_left[static_cast<std::size_t>(r)] ? lchild : rchild)
              .est_sorted[static_cast<std::size_t>(f)]
              .push_back(r);
        }
      }

      lchild.node = new_node(stats_of(lchild.str_sorted[0]), stats_of(lchild.est_sorted[0]));
      rchild.node = new_node(stats_of(rchild.str_sorted[0]), stats_of(rchild.est_sorted[0]));
      auto& parent = out.nodes[static_cast<std::size_t>(cur.node)];
      parent.feature = best_f;
      parent.threshold = best_t;
      parent.left = lchild.node;
      parent.right = rchild.node;
      stack.push_back(std::move(rchild));
      stack.push_back(std::move(lchild));
    }

    for (std::size_t i = 0; i < out.nodes.size(); ++i) {
      if (out.nodes[i].feature < 0) out.nodes[i].value = out.est_value[i];
    }
    return out;
  }
};

// Weakest-link state over a grown tree. Collapsing never changes per-node
// leaf risks, so the sequence is recomputed from the current shape directly.
struct PruneState {
  const Grower::Grown* tree;
  std::vector<std::uint8_t> collapsed;  // internal node forced into a leaf

  explicit PruneState(const Grower::Grown& t)
      : tree(&t), collapsed(t.nodes.size(), 0) {}

  bool is_leaf(int i) const {
    return tree->nodes[static_cast<std::size_t>(i)].feature < 0 ||
           collapsed[static_cast<std::size_t>(i)];
  }

  // Fills subtree risk and leaf counts for the current shape.
  void subtree_stats(std::vector<double>& risk, std::vector<int>& leaves) const {
    const auto& nodes = tree->nodes;
    risk.assign(nodes.size(), 0.0);
    leaves.assign(nodes.size(), 0);
    for (std::size_t i = nodes.size(); i-- > 0;) {  // children have larger ids
      if (is_leaf(static_cast<int>(i))) {
        risk[i] = tree->r_leaf[i];
        leaves[i] = 1;
      } else {
        const auto l = static_cast<std::size_t>(nodes[i].left);
        const auto r = static_cast<std::size_t>(nodes[i].right);
        risk[i] = risk[l] + risk[r];
        leaves[i] = leaves[l] + leaves[r];
      }
    }
  }

  // Collapses every weakest link with g <= alpha, recomputing between rounds.
  void prune_to(double alpha) {
    std::vector<double> risk;
    std::vector<int> leaves;
    for (;;) {
      subtree_stats(risk, leaves);
      double g_min = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < tree->nodes.size(); ++i) {
        if (is_leaf(static_cast<int>(i))) continue;
        const double g = (tree->r_leaf[i] - risk[i]) / (leaves[i] - 1);
        g_min = std::min(g_min, g);
      }
      if (!(g_min <= alpha)) return;
      for (std::size_t i = 0; i < tree->nodes.size(); ++i) {
        if (is_leaf(static_cast<int>(i))) continue;
        const double g = (tree->r_leaf[i] - risk[i]) / (leaves[i] - 1);
        if (g <= g_min + 1e-12 * (1.0 + std::abs(g_min))) collapsed[i] = 1;
      }
    }
  }

  // Critical alphas of the full weakest-link sequence, ascending.
  std::vector<double> critical_alphas() {
    std::vector<double> alphas;
    std::vector<double> risk;
    std::vector<int> leaves;
    for (;;) {
      subtree_stats(risk, leaves);
      double g_min = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < tree->nodes.size(); ++i) {
        if (is_leaf(static_cast<int>(i))) continue;
        const double g = (tree->r_leaf[i] - risk[i]) / (leaves[i] - 1);
        g_min = std::min(g_min, g);
      }
      if (!std::isfinite(g_min)) break;  // nothing internal left
      alphas.push_back(alphas.empty() ? g_min : std::max(g_min, alphas.back()));
      for (std::size_t i = 0; i < tree->nodes.size(); ++i) {
        if (is_leaf(static_cast<int>(i))) continue;
        const double g = (tree->r_leaf[i] - risk[i]) / (leaves[i] - 1);
        if (g <= g_min + 1e-12 * (1.0 + std::abs(g_min))) collapsed[i] = 1;
      }
    }
    return alphas;
  }

  // Materializes the pruned shape: collapsed branches become leaves valued by
  // their estimation-half statistics.
  std::vector<TreeNode> materialize() const {
    std::vector<TreeNode> out;
    std::vector<int> remap(tree->nodes.size(), -1);
    // Root-first copy keeping only reachable, non-collapsed structure.
    std::vector<int> order{0};
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int i = order[k];
      remap[static_cast<std::size_t>(i)] = static_cast<int>(out.size());
      TreeNode node = tree->nodes[static_cast<std::size_t>(i)];
      if (is_leaf(i)) {
        node.feature = -1;
        node.left = node.right = -1;
        node.value = tree->est_value[static_cast<std::size_t>(i)];
      } else {
        order.push_back(node.left);
        order.push_back(node.right);
      }
      out.push_back(node);
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (out[k].feature >= 0) {
        out[k].left = remap[static_cast<std::size_t>(out[k].left)];
        out[k].right = remap[static_cast<std::size_t>(out[k].right)];
      }
    }
    return out;
  }
};

// Held-out score of a pruned shape: for every leaf, the grow-sample effect is
// rewarded for agreeing with the held-out effect and charged for its own
// magnitude; lower is better.
double holdout_error(const std::vector<TreeNode>& nodes, const std::vector<int>& split_cols_local,
                     const Grower& grower, const std::vector<int>& fold_rows,
                     const std::vector<double>& leaf_value) {
  (void)split_cols_local;
  std::vector<ArmStats> by_leaf(nodes.size());
  for (int r : fold_rows) {
    int cur = 0;
    while (nodes[static_cast<std::size_t>(cur)].feature >= 0) {
      const auto& node = nodes[static_cast<std::size_t>(cur)];
      const double v =
          grower.feat[static_cast<std::size_t>(node.feature)][static_cast<std::size_t>(r)];
      cur = v <= node.threshold ? node.left : node.right;
    }
    by_leaf[static_cast<std::size_t>(cur)].add(grower.arm[static_cast<std::size_t>(r)],
                                               grower.y[static_cast<std::size_t>(r)]);
  }
  double err = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].feature >= 0) continue;
    const ArmStats& s = by_leaf[i];
    const double n_fold = s.total();
    if (n_fold <= 0) continue;
    const double fit = leaf_value[i];
    double agree = 0.0;
    if (grower.task == TreeTask::regression) {
      agree = (s.sum[0] + s.sum[1]) / n_fold;
    } else if (s.n[0] > 0 && s.n[1] > 0) {
      agree = s.arm_mean(1) - s.arm_mean(0);
    }
    err += n_fold * (fit * fit - 2.0 * fit * agree);
  }
  return err;
}

std::vector<double> leaf_values_of(const std::vector<TreeNode>& nodes) {
  std::vector<double> v(nodes.size(), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = nodes[i].value;
  return v;
}

// Arm-stratified halving: the first part receives round(fraction * arm size)
// of each shuffled arm.
void stratified_partition(const std::vector<int>& rows, const std::vector<int>& arm,
                          double fraction, Rng& rng, std::vector<int>& part_a,
                          std::vector<int>& part_b) {
  for (int a = 0; a < 2; ++a) {
    std::vector<int> pool;
    for (int r : rows) {
      if (arm[static_cast<std::size_t>(r)] == a) pool.push_back(r);
    }
    rng.shuffle(pool);
    const auto take = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(pool.size())));
    for (std::size_t k = 0; k < pool.size(); ++k) {
      (k < take ? part_a : part_b).push_back(pool[k]);
    }
  }
  std::sort(part_a.begin(), part_a.end());
  std::sort(part_b.begin(), part_b.end());
}

TreeContrastFit fit_partition_tree(const StageDataset& ds, const ModelSpec& spec,
                                   std::uint64_t seed, TreeTask task) {
  if (task == TreeTask::causal) validate_stage_dataset(ds);
  const TreeParams& params = spec.tree;
  require(params.min_leaf_per_arm >= 1, ErrorKind::config, "min_leaf_per_arm must be >= 1");
  require(params.max_depth >= 0, ErrorKind::config, "max_depth must be >= 0");
  const bool honest = params.honest && task == TreeTask::causal;

  Grower grower;
  grower.task = task;
  grower.honest = honest;
  grower.min_leaf = params.min_leaf_per_arm;
  grower.max_depth = params.max_depth;

  TreeContrastFit out;
  out.split_cols = resolve_columns(ds, spec.contrast_covariates, /*empty_means_all=*/true);
  require(!out.split_cols.empty(), ErrorKind::config, "tree needs at least one split feature");

  const int n = ds.n();
  grower.feat.resize(out.split_cols.size());
  for (std::size_t f = 0; f < out.split_cols.size(); ++f) {
    grower.feat[f].resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) grower.feat[f][static_cast<std::size_t>(i)] = ds.features(i, out.split_cols[f]);
  }
  grower.y.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grower.y[static_cast<std::size_t>(i)] = ds.response[i];
  grower.arm.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    grower.arm[static_cast<std::size_t>(i)] = task == TreeTask::causal
                                                  ? ds.action[static_cast<std::size_t>(i)]
                                                  : 0;
  }

  std::vector<int> all_rows(static_cast<std::size_t>(n));
  std::iota(all_rows.begin(), all_rows.end(), 0);

  std::vector<int> structure_rows;
  std::vector<int> estimation_rows;
  if (honest) {
    Rng half_rng(derive_seed(seed, 0x7e57ULL, 1ULL));
    stratified_partition(all_rows, grower.arm, params.honest_fraction, half_rng,
                         structure_rows, estimation_rows);
    // Both halves must support the per-arm leaf minimum at the root.
    ArmStats str_stats = grower.stats_of(structure_rows);
    ArmStats est_stats = grower.stats_of(estimation_rows);
    for (int a = 0; a < 2; ++a) {
      require(str_stats.n[a] >= params.min_leaf_per_arm &&
                  est_stats.n[a] >= params.min_leaf_per_arm,
              ErrorKind::root_too_small,
              "honest tree: an arm cannot fill both halves at the root");
    }
    grower.ratio_factor =
        1.0 + static_cast<double>(structure_rows.size()) / static_cast<double>(estimation_rows.size());
    out.structure_rows = structure_rows;
    out.estimation_rows = estimation_rows;
  } else {
    structure_rows = all_rows;
    estimation_rows = all_rows;
    ArmStats stats = grower.stats_of(all_rows);
    if (task == TreeTask::causal) {
      require(stats.n[0] >= params.min_leaf_per_arm && stats.n[1] >= params.min_leaf_per_arm,
              ErrorKind::root_too_small, "tree: an arm is below the per-arm leaf minimum");
    } else {
      require(stats.total() >= params.min_leaf_per_arm, ErrorKind::root_too_small,
              "tree: sample below the leaf minimum");
    }
    grower.ratio_factor = 2.0;
  }

  Grower::Grown grown = grower.grow(structure_rows, estimation_rows);

  if (honest && params.prune && grown.nodes.size() > 1) {
    PruneState sequence(grown);
    const std::vector<double> criticals = sequence.critical_alphas();
    std::vector<double> candidates{0.0};
    for (std::size_t k = 0; k + 1 < criticals.size(); ++k) {
      candidates.push_back(std::sqrt(criticals[k] * criticals[k + 1]));
    }
    if (!criticals.empty()) candidates.push_back(criticals.back() * 2.0);

    // Arm-stratified folds over the structure half.
    const int folds = std::max(2, params.cv_folds_for_pruning);
    Rng fold_rng(derive_seed(seed, 0x7e57ULL, 2ULL));
    std::vector<int> fold_of(static_cast<std::size_t>(n), -1);
    for (int a = 0; a < 2; ++a) {
      std::vector<int> pool;
      for (int r : structure_rows) {
        if (grower.arm[static_cast<std::size_t>(r)] == a) pool.push_back(r);
      }
      fold_rng.shuffle(pool);
      for (std::size_t k = 0; k < pool.size(); ++k) {
        fold_of[static_cast<std::size_t>(pool[k])] = static_cast<int>(k % static_cast<std::size_t>(folds));
      }
    }

    std::vector<double> cv_err(candidates.size(), 0.0);
    for (int f = 0; f < folds; ++f) {
      std::vector<int> grow_rows;
      std::vector<int> fold_rows;
      for (int r : structure_rows) {
        (fold_of[static_cast<std::size_t>(r)] == f ? fold_rows : grow_rows).push_back(r);
      }
      if (fold_rows.empty() || grow_rows.empty()) continue;
      Grower::Grown fold_tree = grower.grow(grow_rows, grow_rows);
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        PruneState state(fold_tree);
        state.prune_to(candidates[c]);
        const std::vector<TreeNode> shape = state.materialize();
        cv_err[c] += holdout_error(shape, out.split_cols, grower, fold_rows,
                                   leaf_values_of(shape));
      }
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
      if (cv_err[c] <= cv_err[best]) best = c;  // ties favor the smaller tree
    }
    PruneState final_state(grown);
    final_state.prune_to(candidates[best]);
    out.nodes = final_state.materialize();
  } else {
    PruneState identity(grown);
    out.nodes = identity.materialize();
  }
  return out;
}

}  // namespace

TreeContrastFit fit_causal_tree(const StageDataset& ds, const ModelSpec& spec,
                                std::uint64_t seed) {
  return fit_partition_tree(ds, spec, seed, TreeTask::causal);
}

TreeContrastFit fit_regression_tree(const StageDataset& ds, const ModelSpec& spec,
                                    std::uint64_t seed) {
  return fit_partition_tree(ds, spec, seed, TreeTask::regression);
}

}  // namespace dtrcv
