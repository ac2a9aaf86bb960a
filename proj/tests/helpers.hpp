#pragma once

#include <initializer_list>

#include "noisy_mds/linalg.hpp"

namespace testing_helpers {

inline noisy_mds::Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  noisy_mds::Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace testing_helpers
