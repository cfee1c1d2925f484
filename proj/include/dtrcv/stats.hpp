#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace dtrcv {

// Standard normal CDF.
inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Standard normal quantile, p in (0,1).
double norm_quantile(double p);

inline double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

double mean(const std::vector<double>& x);
// Sample variance with the n-1 divisor; 0 when fewer than two values.
double sample_variance(const std::vector<double>& x);
// Sample variance of a two-point sample: (a-b)^2 / 2.
inline double two_point_variance(double a, double b) {
  const double d = a - b;
  return 0.5 * d * d;
}

// Running first/second moments with deterministic sequential merges.
struct MomentAccumulator {
  double n = 0, s = 0, ss = 0;
  void add(double x) {
    n += 1.0;
    s += x;
    ss += x * x;
  }
  void merge(const MomentAccumulator& o) {
    n += o.n;
    s += o.s;
    ss += o.ss;
  }
  double mean() const { return n > 0 ? s / n : 0.0; }
  double variance_pop() const {
    if (n <= 0) return 0.0;
    const double m = mean();
    const double v = ss / n - m * m;
    return v > 0.0 ? v : 0.0;
  }
};

// Streaming accumulator for pooled means/covariances of paired observations.
// Used by the brute-force correlation decompositions, where pairs are far too
// numerous to store; whole blocks of pairs enter through their closed-form
// sums.
class PairAccumulator {
 public:
  void add(double u, double v) { add_bulk(1.0, u, v, u * u, v * v, u * v); }
  void add_bulk(double n_pairs, double su, double sv, double suu, double svv, double suv) {
    n_ += n_pairs;
    su_ += su;
    sv_ += sv;
    suu_ += suu;
    svv_ += svv;
    suv_ += suv;
  }
  void merge(const PairAccumulator& o) {
    add_bulk(o.n_, o.su_, o.sv_, o.suu_, o.svv_, o.suv_);
  }
  double count() const { return n_; }
  // Covariance of the pairs around externally supplied moments, so that every
  // component of a decomposition can share one marginal location and scale.
  double covariance_about(double mu, double var) const;
  double correlation_about(double mu, double var) const;

 private:
  double n_ = 0, su_ = 0, sv_ = 0, suu_ = 0, svv_ = 0, suv_ = 0;
};

// %.*g formatting that never depends on locale; used by all report writers.
std::string format_g(double x, int precision = 10);

}  // namespace dtrcv
