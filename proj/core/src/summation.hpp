#ifndef JCINFO_SRC_SUMMATION_HPP
#define JCINFO_SRC_SUMMATION_HPP

#include <cmath>

namespace jcinfo::detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace jcinfo::detail

#endif  // JCINFO_SRC_SUMMATION_HPP
