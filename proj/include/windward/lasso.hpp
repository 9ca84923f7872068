#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "windward/error.hpp"

// From-scratch univariate LASSO regression: one wind component in, one
// speed component out. Training minimizes
//
//   (1/2n) * sum_i (y_i - b0 - b1 * x_i)^2 + lambda * |b1|
//
// by coordinate descent on standardized x with soft-thresholding; the
// intercept is never penalized. The 1/(2n) normalization makes lambda
// values comparable across dataset sizes.

namespace windward {

struct Dataset1D {
  std::vector<double> xs;
  std::vector<double> ys;
};

/// Throws InvalidInputError unless lengths match, n >= 2, values finite.
void validate_dataset(const Dataset1D& data);

/// Pearson correlation coefficient. Throws UndefinedStatError when either
/// series has zero variance.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

/// A fitted model. Standardization is internal: slope/intercept are already
/// expressed in the original x units, so prediction is plain affine.
struct LassoModel {
  double intercept = 0.0;
  double slope = 0.0;
  double lambda = 0.0;
  double x_mean = 0.0;  // training standardization stats, kept for the
  double x_std = 0.0;   // record and for save/load round-trips
};

/// Coordinate-descent fit at a fixed lambda. Converges when the slope
/// changes by < 1e-10 between sweeps; throws ConvergenceError (carrying the
/// last iterate in its message) after 10,000 sweeps.
LassoModel fit_lasso(const Dataset1D& data, double lambda);

/// intercept + slope * x.
double predict(const LassoModel& model, double x);

/// 1 - SS_res / SS_tot. Throws UndefinedStatError when SS_tot is zero.
double r2_score(const LassoModel& model, const Dataset1D& data);

/// Pick lambda by k-fold cross-validation over a log-spaced grid descending
/// from the full-shrinkage threshold, then refit on all data. Folds are
/// assigned round-robin by index, so the selection is deterministic.
LassoModel fit_lasso_cv(const Dataset1D& data, std::size_t folds = 5,
                        std::size_t grid_size = 20);

/// Robust variant: fit, drop the top `trim_fraction` of samples by absolute
/// residual, refit once on the rest.
LassoModel fit_lasso_trimmed(const Dataset1D& data, double lambda,
                             double trim_fraction = 0.01);

/// Model persistence as a small versioned text block; numbers round-trip
/// exactly.
void save_model(const LassoModel& model, std::ostream& out);
LassoModel load_model(std::istream& in);

}  // namespace windward
