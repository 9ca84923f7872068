#include "windward/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "windward/detail/text.hpp"

namespace windward {

namespace {

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

// Population standard deviation; the paired "(1/n) sum x_std^2 = 1" identity
// is what makes the coordinate-descent denominator exactly 1.
double population_std(const std::vector<double>& v, double m) {
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

void validate_dataset(const Dataset1D& data) {
  if (data.xs.size() != data.ys.size()) {
    throw InvalidInputError("xs and ys lengths differ");
  }
  if (data.xs.size() < 2) {
    throw InvalidInputError("need at least 2 samples");
  }
  for (std::size_t i = 0; i < data.xs.size(); ++i) {
    if (!std::isfinite(data.xs[i]) || !std::isfinite(data.ys[i])) {
      throw InvalidInputError("non-finite sample at index " +
                              std::to_string(i));
    }
  }
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  validate_dataset(Dataset1D{xs, ys});
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedStatError("correlation undefined under zero variance");
  }
  return sxy / std::sqrt(sxx * syy);
}

LassoModel fit_lasso(const Dataset1D& data, double lambda) {
  validate_dataset(data);
  if (!(lambda >= 0.0)) throw InvalidInputError("lambda must be >= 0");
  const std::size_t n = data.xs.size();
  const double x_mean = mean(data.xs);
  const double x_std = population_std(data.xs, x_mean);
  const double y_mean = mean(data.ys);

  LassoModel model;
  model.lambda = lambda;
  model.x_mean = x_mean;
  model.x_std = x_std;
  if (x_std == 0.0) {
    // Constant regressor carries no signal; the penalized optimum is the
    // mean-only model.
    model.intercept = y_mean;
    model.slope = 0.0;
    return model;
  }

  std::vector<double> xs_std(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs_std[i] = (data.xs[i] - x_mean) / x_std;
  }

  // Coordinate descent. With standardized x the intercept update is the
  // plain y mean and the slope denominator (1/n) sum x^2 is 1.
  double b0 = y_mean;
  double b1 = 0.0;
  const std::size_t max_sweeps = 10000;
  bool converged = false;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z += xs_std[i] * (data.ys[i] - b0);
    }
    z /= static_cast<double>(n);
    const double b1_new = soft_threshold(z, lambda);
    double partial = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      partial += data.ys[i] - b1_new * xs_std[i];
    }
    const double b0_new = partial / static_cast<double>(n);
    const bool settled = std::abs(b1_new - b1) < 1e-10;
    b0 = b0_new;
    b1 = b1_new;
    if (settled) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("lasso did not converge; last slope " +
                           detail::format_double(b1 / x_std));
  }

  model.slope = b1 / x_std;
  model.intercept = b0 - model.slope * x_mean;
  return model;
}

double predict(const LassoModel& model, double x) {
  if (!std::isfinite(x)) throw InvalidInputError("x must be finite");
  return model.intercept + model.slope * x;
}

double r2_score(const LassoModel& model, const Dataset1D& data) {
  validate_dataset(data);
  const double y_mean = mean(data.ys);
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < data.xs.size(); ++i) {
    const double r = data.ys[i] - predict(model, data.xs[i]);
    const double d = data.ys[i] - y_mean;
    ss_res += r * r;
    ss_tot += d * d;
  }
  if (ss_tot == 0.0) {
    throw UndefinedStatError("r2 undefined when all ys are equal");
  }
  return 1.0 - ss_res / ss_tot;
}

LassoModel fit_lasso_cv(const Dataset1D& data, std::size_t folds,
                        std::size_t grid_size) {
  validate_dataset(data);
  if (folds < 2 || grid_size < 1) {
    throw InvalidInputError("need folds >= 2 and a non-empty grid");
  }
  const std::size_t n = data.xs.size();
  folds = std::min(folds, n);

  // Full-shrinkage threshold: the smallest lambda with slope 0 on all data.
  const double x_mean = mean(data.xs);
  const double x_std = population_std(data.xs, x_mean);
  const double y_mean = mean(data.ys);
  double z = 0.0;
  if (x_std > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      z += ((data.xs[i] - x_mean) / x_std) * (data.ys[i] - y_mean);
    }
    z = std::abs(z) / static_cast<double>(n);
  }
  const double lambda_max = (z > 0.0) ? z : 1.0;

  std::vector<double> grid(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double frac = (grid_size == 1)
                            ? 0.0
                            : static_cast<double>(g) /
                                  static_cast<double>(grid_size - 1);
    grid[g] = lambda_max * std::pow(1e-3, frac);  // lambda_max down 3 decades
  }

  double best_lambda = grid.front();
  double best_err = std::numeric_limits<double>::infinity();
  for (double lambda : grid) {
    double err = 0.0;
    std::size_t held = 0;
    for (std::size_t fold = 0; fold < folds; ++fold) {
      Dataset1D train;
      Dataset1D test;
      for (std::size_t i = 0; i < n; ++i) {
        if (i % folds == fold) {
          test.xs.push_back(data.xs[i]);
          test.ys.push_back(data.ys[i]);
        } else {
          train.xs.push_back(data.xs[i]);
          train.ys.push_back(data.ys[i]);
        }
      }
      if (train.xs.size() < 2 || test.xs.empty()) continue;
      const LassoModel m = fit_lasso(train, lambda);
      for (std::size_t i = 0; i < test.xs.size(); ++i) {
        const double r = test.ys[i] - predict(m, test.xs[i]);
        err += r * r;
        ++held;
      }
    }
    if (held == 0) continue;
    err /= static_cast<double>(held);
    // Strict < keeps the earlier (more regularized) lambda on ties.
    if (err < best_err) {
      best_err = err;
      best_lambda = lambda;
    }
  }
  return fit_lasso(data, best_lambda);
}

LassoModel fit_lasso_trimmed(const Dataset1D& data, double lambda,
                             double trim_fraction) {
  if (trim_fraction < 0.0 || trim_fraction >= 1.0) {
    throw InvalidInputError("trim fraction must be in [0, 1)");
  }
  const LassoModel first = fit_lasso(data, lambda);
  const std::size_t n = data.xs.size();
  const std::size_t drop =
      static_cast<std::size_t>(static_cast<double>(n) * trim_fraction);
  if (drop == 0 || n - drop < 2) return first;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     const double ra =
                         std::abs(data.ys[a] - predict(first, data.xs[a]));
                     const double rb =
                         std::abs(data.ys[b] - predict(first, data.xs[b]));
                     return ra < rb;
                   });
  Dataset1D kept;
  kept.xs.reserve(n - drop);
  kept.ys.reserve(n - drop);
  for (std::size_t i = 0; i < n - drop; ++i) {
    kept.xs.push_back(data.xs[order[i]]);
    kept.ys.push_back(data.ys[order[i]]);
  }
  return fit_lasso(kept, lambda);
}

void save_model(const LassoModel& model, std::ostream& out) {
  out << "# windward-lasso v1\n";
  out << "intercept=" << detail::format_double(model.intercept) << '\n';
  out << "slope=" << detail::format_double(model.slope) << '\n';
  out << "lambda=" << detail::format_double(model.lambda) << '\n';
  out << "x_mean=" << detail::format_double(model.x_mean) << '\n';
  out << "x_std=" << detail::format_double(model.x_std) << '\n';
  if (!out) throw IoError("failed to write model");
}

LassoModel load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      detail::trim(line) != "# windward-lasso v1") {
    throw FormatError("unsupported model version");
  }
  LassoModel model;
  bool seen[5] = {false, false, false, false, false};
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw FormatError("bad model line: " + t);
    const std::string key = t.substr(0, eq);
    double value = 0.0;
    try {
      value = detail::parse_double(t.substr(eq + 1));
    } catch (const Error&) {
      throw FormatError("bad number in model line: " + t);
    }
    if (key == "intercept") { model.intercept = value; seen[0] = true; }
    else if (key == "slope") { model.slope = value; seen[1] = true; }
    else if (key == "lambda") { model.lambda = value; seen[2] = true; }
    else if (key == "x_mean") { model.x_mean = value; seen[3] = true; }
    else if (key == "x_std") { model.x_std = value; seen[4] = true; }
    else throw FormatError("unknown model key: " + key);
  }
  for (bool s : seen) {
    if (!s) throw FormatError("model file is missing a field");
  }
  return model;
}

}  // namespace windward
