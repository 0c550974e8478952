#include "dirtyregion/search.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dirtyregion {

namespace {

const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

double checked(const Objective1d& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v))
    throw NonFiniteObjectiveError("objective is not finite at x = " + std::to_string(x));
  return v;
}

bool passes(double m) { return std::isfinite(m) && m >= 0.0; }

// Golden-section maximisation on [a, b]; returns the best point visited.
Maximum1d golden_section(const Objective1d& f, double a, double b, double tol) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = checked(f, c);
  double fd = checked(f, d);
  Maximum1d best = fc >= fd ? Maximum1d{c, fc} : Maximum1d{d, fd};
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = checked(f, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = checked(f, d);
    }
    if (fc > best.value || (fc == best.value && c < best.x)) best = {c, fc};
    if (fd > best.value) best = {d, fd};
  }
  const double mid = 0.5 * (a + b);
  const double fm = checked(f, mid);
  if (fm > best.value) best = {mid, fm};
  return best;
}

}  // namespace

std::vector<double> linspace(Interval range, std::size_t n) {
  if (range.hi <= range.lo || n < 2) return {range.lo};
  std::vector<double> xs(n);
  const double step = (range.hi - range.lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) xs[i] = range.lo + step * static_cast<double>(i);
  xs.back() = range.hi;
  return xs;
}

Maximum1d maximize_1d(const Objective1d& objective, Interval range, double tol, std::size_t grid) {
  if (!(tol > 0.0)) throw std::invalid_argument("maximize_1d: tol must be positive");
  const auto xs = linspace(range, grid);
  std::size_t best_i = 0;
  double best_v = checked(objective, xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double v = checked(objective, xs[i]);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  Maximum1d best{xs[best_i], best_v};
  if (xs.size() < 2) return best;

  const double a = xs[best_i == 0 ? 0 : best_i - 1];
  const double b = xs[std::min(best_i + 1, xs.size() - 1)];
  const auto refined = golden_section(objective, a, b, tol);
  if (refined.value > best.value) best = refined;
  return best;
}

Maximum2d maximize_2d(const Objective2d& objective, Interval xs_range, Interval ys_range,
                      double tol, std::size_t grid_x, std::size_t grid_y, int rounds) {
  const auto xs = linspace(xs_range, grid_x);
  const auto ys = linspace(ys_range, grid_y);
  Maximum2d best{xs[0], ys[0], -INFINITY};
  for (double x : xs) {
    for (double y : ys) {
      const double v = objective(x, y);
      if (!std::isfinite(v))
        throw NonFiniteObjectiveError("objective is not finite at (" + std::to_string(x) + ", " +
                                      std::to_string(y) + ")");
      if (v > best.value) best = {x, y, v};
    }
  }
  for (int r = 0; r < rounds; ++r) {
    const double before = best.value;
    const auto mx = maximize_1d([&](double x) { return objective(x, best.y); }, xs_range, tol);
    if (mx.value > best.value) {
      best.x = mx.x;
      best.value = mx.value;
    }
    const auto my = maximize_1d([&](double y) { return objective(best.x, y); }, ys_range, tol);
    if (my.value > best.value) {
      best.y = my.x;
      best.value = my.value;
    }
    if (best.value - before <= tol * 1e-3) break;
  }
  return best;
}

double bisect_boundary(const Objective1d& margin, double lo, double hi, double resolution) {
  const bool lo_pass = passes(margin(lo));
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (passes(margin(mid)) == lo_pass)
      lo = mid;
    else
      hi = mid;
  }
  return lo_pass ? lo : hi;
}

std::vector<Interval> satisfied_intervals(const Objective1d& margin, Interval range,
                                          std::size_t grid, double resolution) {
  const auto xs = linspace(range, grid);
  std::vector<bool> ok(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ok[i] = passes(margin(xs[i]));

  std::vector<Interval> out;
  std::size_t i = 0;
  while (i < xs.size()) {
    if (!ok[i]) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i + 1 < xs.size() && ok[i + 1]) ++i;
    const std::size_t stop = i;
    Interval iv{xs[start], xs[stop]};
    if (start > 0) iv.lo = bisect_boundary(margin, xs[start - 1], xs[start], resolution);
    if (stop + 1 < xs.size()) iv.hi = bisect_boundary(margin, xs[stop], xs[stop + 1], resolution);
    out.push_back(iv);
    ++i;
  }
  return out;
}

}  // namespace dirtyregion
