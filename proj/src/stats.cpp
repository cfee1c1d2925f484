#include "dtrcv/stats.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cstdio>

#include "dtrcv/common.hpp"

namespace dtrcv {

double norm_quantile(double p) {
  require(p > 0.0 && p < 1.0, ErrorKind::degenerate_interval,
          "norm_quantile: p must lie strictly inside (0,1)");
  static const boost::math::normal_distribution<double> std_normal;
  return boost::math::quantile(std_normal, p);
}

double mean(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) {
    const double d = v - m;
    ss += d * d;
  }
  return ss / static_cast<double>(n - 1);
}

double PairAccumulator::covariance_about(double mu, double var) const {
  (void)var;
  if (n_ <= 0.0) return 0.0;
  return suv_ / n_ - mu * (su_ + sv_) / n_ + mu * mu;
}

double PairAccumulator::correlation_about(double mu, double var) const {
  if (n_ <= 0.0 || var <= 0.0) return 0.0;
  return covariance_about(mu, var) / var;
}

std::string format_g(double x, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
  return std::string(buf);
}

}  // namespace dtrcv
