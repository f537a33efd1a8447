#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "subplanck/errors.hpp"

namespace subplanck {

/// Closed interval sampled at `count` equally spaced nodes.
struct Axis {
  double min = 0.0;
  double max = 0.0;
  int count = 0;

  double step() const { return count > 1 ? (max - min) / (count - 1) : 0.0; }
  double at(int i) const { return i == count - 1 ? max : min + i * step(); }
};

/// Rectangular grid over the (x, p) plane.
struct Grid2D {
  Axis x;
  Axis p;

  std::size_t size() const { return static_cast<std::size_t>(x.count) * static_cast<std::size_t>(p.count); }

  void validate() const {
    for (const Axis* a : {&x, &p}) {
      if (a->count < 2 || !std::isfinite(a->min) || !std::isfinite(a->max) || !(a->max > a->min))
        throw ConfigError("degenerate grid axis: need count >= 2 and finite min < max");
    }
  }

  static Grid2D square(double half_width, int count) { return {{-half_width, half_width, count}, {-half_width, half_width, count}}; }
};

enum class Normalization { raw, max };

inline std::string to_string(Normalization n) { return n == Normalization::max ? "max" : "raw"; }

/// Real field sampled on a grid. Values are row-major with p as the row
/// index: value(ix, ip) = values[ip * nx + ix].
struct Field {
  Grid2D grid;
  std::vector<double> values;
  std::string group;
  std::string state;
  std::string scale;
  Normalization normalization = Normalization::raw;

  double& at(int ix, int ip) { return values[static_cast<std::size_t>(ip) * grid.x.count + ix]; }
  double at(int ix, int ip) const { return values[static_cast<std::size_t>(ip) * grid.x.count + ix]; }

  double max() const { return *std::max_element(values.begin(), values.end()); }
  double min() const { return *std::min_element(values.begin(), values.end()); }

  /// Bilinear interpolation; (x, p) must lie inside the grid.
  double interpolate(double x, double p) const {
    auto locate = [](const Axis& a, double v, int& i, double& t) {
      const double s = (v - a.min) / a.step();
      i = std::clamp(static_cast<int>(std::floor(s)), 0, a.count - 2);
      t = s - i;
    };
    int ix, ip;
    double tx, tp;
    locate(grid.x, x, ix, tx);
    locate(grid.p, p, ip, tp);
    return (1 - tx) * (1 - tp) * at(ix, ip) + tx * (1 - tp) * at(ix + 1, ip) + (1 - tx) * tp * at(ix, ip + 1) +
           tx * tp * at(ix + 1, ip + 1);
  }

  void normalize_to_max() {
    const double m = max();
    if (!(m > 0.0)) throw NumericError("cannot normalise to a non-positive maximum");
    for (double& v : values) v /= m;
    normalization = Normalization::max;
  }

  void check_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) throw NumericError("field contains non-finite values");
  }
};

/// Evaluates f(x, p) on every node. Rows are split across worker threads;
/// each node is written by exactly one worker, so the result is independent
/// of the thread count.
template <class F>
std::vector<double> sample_grid(const Grid2D& grid, F&& f, unsigned threads = 0) {
  grid.validate();
  std::vector<double> out(grid.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.p.count));

  auto work = [&](int row_begin, int row_end) {
    for (int ip = row_begin; ip < row_end; ++ip) {
      const double p = grid.p.at(ip);
      for (int ix = 0; ix < grid.x.count; ++ix)
        out[static_cast<std::size_t>(ip) * grid.x.count + ix] = f(grid.x.at(ix), p);
    }
  };

  if (threads <= 1) {
    work(0, grid.p.count);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const int rows = grid.p.count;
  for (unsigned t = 0; t < threads; ++t) {
    const int b = static_cast<int>(static_cast<long long>(rows) * t / threads);
    const int e = static_cast<int>(static_cast<long long>(rows) * (t + 1) / threads);
    pool.emplace_back([&, b, e, t] {
      try {
        work(b, e);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return out;
}

/// Trapezoid-rule integral of a field over its grid.
inline double integrate(const Field& f) {
  const auto& g = f.grid;
  double acc = 0.0;
  for (int ip = 0; ip < g.p.count; ++ip) {
    const double wp = (ip == 0 || ip == g.p.count - 1) ? 0.5 : 1.0;
    for (int ix = 0; ix < g.x.count; ++ix) {
      const double wx = (ix == 0 || ix == g.x.count - 1) ? 0.5 : 1.0;
      acc += wp * wx * f.at(ix, ip);
    }
  }
  return acc * g.x.step() * g.p.step();
}

}  // namespace subplanck
