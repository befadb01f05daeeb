#pragma once

#include <Eigen/Dense>

#include <random>

namespace testing_support {

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int p, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXd a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = g(rng);
  return 0.5 * (a + a.transpose());
}

inline Eigen::VectorXd sorted_desc(Eigen::VectorXd v) {
  std::sort(v.data(), v.data() + v.size(), [](double x, double y) { return x > y; });
  return v;
}

}  // namespace testing_support
