#pragma once

// Derivative-free minimizers used by the searches. The objectives involved
// (norms of moduli, meets) are continuous but not smooth, so nothing here
// relies on gradients.

#include <functional>
#include <vector>

namespace spr::opt {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search on [lo, hi]; stops when the bracket is below `tol`.
ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double tol = 1e-12, int max_iter = 200);

struct NelderMeadOptions {
  double initial_step = 0.1;
  double x_tolerance = 1e-10;
  double f_tolerance = 1e-13;
  int max_evaluations = 2000;
  int restarts = 1;  // rebuild the simplex around the incumbent this many extra times
};

struct VectorMinimum {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

VectorMinimum nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace spr::opt
