#include "awd/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace awd {

namespace {

constexpr double kGolden = 0.3819660112501051;  // 2 - golden ratio
constexpr double kRelTol = 3e-16;
constexpr double kAbsTol = 1e-18;
constexpr int kLineMaxIters = 200;

class CountedObjective {
 public:
  CountedObjective(const Objective& fn, long long& evals)
      : fn_(fn), evals_(evals) {}

  double operator()(std::span<const double> x) const {
    ++evals_;
    return fn_(x);
  }

 private:
  const Objective& fn_;
  long long& evals_;
};

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void clamp_into(const Box& box, std::vector<double>& x) {
  for (std::size_t i = 0; i < box.dims(); ++i) {
    x[i] = std::min(std::max(x[i], box.lo[i]), box.hi[i]);
  }
}

// Interval of step sizes t keeping x + t*dir inside the box.  Capped so a
// near-zero direction component cannot blow the search range up; candidate
// points get clamped into the box regardless.
bool step_interval(const Box& box, const std::vector<double>& x,
                   const std::vector<double>& dir, double& t_lo,
                   double& t_hi) {
  constexpr double kCap = 1e15;
  t_lo = -kCap;
  t_hi = kCap;
  bool moves = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (dir[i] == 0.0) continue;
    moves = true;
    double a = (box.lo[i] - x[i]) / dir[i];
    double b = (box.hi[i] - x[i]) / dir[i];
    if (a > b) std::swap(a, b);
    if (std::isfinite(a)) t_lo = std::max(t_lo, a);
    if (std::isfinite(b)) t_hi = std::min(t_hi, b);
  }
  return moves && t_hi > t_lo;
}

struct LineResult {
  double t = 0.0;
  double value = 0.0;
};

// Bounded line minimization over [t_lo, t_hi]: golden-section with parabolic
// interpolation where the fit is trustworthy.
LineResult line_minimize(const std::function<double(double)>& g, double t_lo,
                         double t_hi, double f_at_zero) {
  double a = t_lo;
  double b = t_hi;
  double x = a + kGolden * (b - a);
  double w = x;
  double v = x;
  double fx = g(x);
  double fw = fx;
  double fv = fx;
  double delta = 0.0;
  double e = 0.0;

  for (int iter = 0; iter < kLineMaxIters && fx != 0.0; ++iter) {
    double m = 0.5 * (a + b);
    double tol1 = kRelTol * std::fabs(x) + kAbsTol;
    double tol2 = 2.0 * tol1;
    if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) break;

    bool parabolic = false;
    if (std::fabs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      double e_prev = e;
      e = delta;
      if (std::fabs(p) < std::fabs(0.5 * q * e_prev) && p > q * (a - x) &&
          p < q * (b - x)) {
        delta = p / q;
        double u = x + delta;
        if (u - a < tol2 || b - u < tol2) {
          delta = x < m ? tol1 : -tol1;
        }
        parabolic = true;
      }
    }
    if (!parabolic) {
      e = (x < m ? b : a) - x;
      delta = kGolden * e;
    }
    double u = std::fabs(delta) >= tol1 ? x + delta
                                        : x + (delta > 0.0 ? tol1 : -tol1);
    double fu = g(u);
    if (fu <= fx) {
      if (u < x) {
        b = x;
      } else {
        a = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }

  if (t_lo <= 0.0 && 0.0 <= t_hi && f_at_zero <= fx) {
    return LineResult{0.0, f_at_zero};  // never accept a worse point
  }
  return LineResult{x, fx};
}

class PowellRunner {
 public:
  PowellRunner(const CountedObjective& f, const Box& box,
               const OptimizerConfig& cfg)
      : f_(f), box_(box), cfg_(cfg) {}

  MinimizationResult run(std::span<const double> x0) {
    std::vector<double> p(x0.begin(), x0.end());
    clamp_into(box_, p);
    double fp = f_(p);

    // Alternate smooth sweeps with the unit-grid walk: a lattice step that
    // escapes a flat cell usually lands mid-slope, so the line searches get
    // another pass before the last-bits polish.
    for (int outer = 0; outer < 3 && fp != 0.0; ++outer) {
      fp = sweeps(p, fp);
      if (fp == 0.0) break;
      double before = fp;
      fp = lattice_descent(p, fp);
      if (fp == before) break;
    }
    if (fp != 0.0) fp = bit_descent(p, fp);

    MinimizationResult out;
    out.best_x = std::move(p);
    out.best_value = fp;
    out.reason = fp == 0.0 ? StopReason::FoundZero : StopReason::Stalled;
    return out;
  }

 private:
  const CountedObjective& f_;
  const Box& box_;
  const OptimizerConfig& cfg_;

  double sweeps(std::vector<double>& p, double fp) {
    std::size_t n = p.size();
    std::vector<std::vector<double>> dirs(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) dirs[i][i] = 1.0;

    for (int sweep = 0; sweep < cfg_.powell_max_iters && fp != 0.0; ++sweep) {
      std::vector<double> p0 = p;
      double fp0 = fp;
      double biggest_drop = 0.0;
      std::size_t biggest_i = 0;
      for (std::size_t i = 0; i < n && fp != 0.0; ++i) {
        double before = fp;
        fp = line_step(p, dirs[i], fp);
        if (before - fp > biggest_drop) {
          biggest_drop = before - fp;
          biggest_i = i;
        }
      }
      if (fp == 0.0) break;
      if (fp0 - fp <= cfg_.powell_tol) break;

      // Direction-set update: replace the direction of largest decrease with
      // the overall displacement when an extrapolated probe supports it.
      std::vector<double> probe(n);
      std::vector<double> disp(n);
      bool nonzero = false;
      for (std::size_t i = 0; i < n; ++i) {
        disp[i] = p[i] - p0[i];
        probe[i] = p[i] + disp[i];
        if (disp[i] != 0.0) nonzero = true;
      }
      if (!nonzero) continue;
      clamp_into(box_, probe);
      double fe = f_(probe);
      if (fe == 0.0) {
        p = probe;
        fp = 0.0;
        break;
      }
      if (fe < fp0) {
        double a = fp0 - fp - biggest_drop;
        double t = 2.0 * (fp0 - 2.0 * fp + fe) * a * a -
                   biggest_drop * (fp0 - fe) * (fp0 - fe);
        if (t < 0.0) {
          fp = line_step(p, disp, fp);
          dirs[biggest_i] = dirs[n - 1];
          dirs[n - 1] = disp;
        }
      }
    }
    return fp;
  }

  double line_step(std::vector<double>& p, const std::vector<double>& dir,
                   double fp) {
    double t_lo = 0.0;
    double t_hi = 0.0;
    if (!step_interval(box_, p, dir, t_lo, t_hi)) return fp;
    auto g = [&](double t) {
      std::vector<double> q(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] + t * dir[i];
      clamp_into(box_, q);
      return f_(q);
    };
    LineResult r = line_minimize(g, t_lo, t_hi, fp);
    // The whole-interval bracket explores well but can converge into a
    // different basin than the one the current point sits in; when it fails
    // to improve, re-bracket tightly around t = 0 to polish the local basin.
    for (double zoom : {1e-3, 1e-9}) {
      if (r.value < fp) break;
      double w = (t_hi - t_lo) * zoom;
      LineResult z =
          line_minimize(g, std::max(t_lo, -w), std::min(t_hi, w), fp);
      if (z.value < r.value) r = z;
    }
    if (r.value < fp) {
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += r.t * dir[i];
      clamp_into(box_, p);
      return r.value;
    }
    return fp;
  }

  // Unit-grid refinement: objectives over integer inputs (or floor/ceil
  // expressions) are piecewise flat on unit cells, and the line search's
  // bracket can collapse inside a flat cell adjacent to the one holding the
  // minimum.  A coordinate walk in whole-unit strides, doubling on success
  // and halving on failure, crosses flat cells that ulp-level steps cannot.
  double lattice_descent(std::vector<double>& p, double fp) {
    bool improved = true;
    for (int round = 0; round < 4 && improved && fp != 0.0; ++round) {
      improved = false;
      for (std::size_t i = 0; i < p.size() && fp != 0.0; ++i) {
        for (double dir : {1.0, -1.0}) {
          double stride = 1.0;
          int budget = 200;
          while (stride >= 1.0 && budget-- > 0 && fp != 0.0) {
            std::vector<double> q = p;
            q[i] = p[i] + dir * stride;
            clamp_into(box_, q);
            if (q[i] == p[i]) break;
            double fq = f_(q);
            if (fq < fp) {
              p = std::move(q);
              fp = fq;
              improved = true;
              stride = std::min(stride * 2.0, 0x1p60);
            } else {
              stride *= 0.5;
            }
          }
        }
      }
    }
    return fp;
  }

  // Last-bits refinement: line searches stop within a few representable
  // values of a minimum; walking coordinates by whole representable steps
  // closes the final gap, which matters when the zero set is a handful of
  // adjacent doubles.  The per-direction budget keeps a long gentle slope
  // from turning the walk into an ulp-by-ulp crawl.
  double bit_descent(std::vector<double>& p, double fp) {
    bool improved = true;
    for (int round = 0; round < 4 && improved && fp != 0.0; ++round) {
      improved = false;
      for (std::size_t i = 0; i < p.size() && fp != 0.0; ++i) {
        for (double toward :
             {std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity()}) {
          int stride = 0;
          int budget = 200;
          while (stride < 64 && budget-- > 0 && fp != 0.0) {
            std::vector<double> q = p;
            for (int k = 0; k <= stride; ++k) {
              q[i] = std::nextafter(q[i], toward);
            }
            clamp_into(box_, q);
            if (q[i] == p[i]) break;
            double fq = f_(q);
            if (fq < fp) {
              p = std::move(q);
              fp = fq;
              improved = true;
              stride = 0;
            } else {
              ++stride;
            }
          }
        }
      }
    }
    return fp;
  }
};

}  // namespace

MinimizationResult powell_minimize(const Objective& objective,
                                   std::span<const double> x0, const Box& box,
                                   const OptimizerConfig& cfg) {
  long long evals = 0;
  CountedObjective f(objective, evals);
  MinimizationResult out = PowellRunner(f, box, cfg).run(x0);
  double confirmed = f(out.best_x);
  out.best_value = confirmed;
  out.reason =
      confirmed == 0.0 ? StopReason::FoundZero : StopReason::Stalled;
  out.evaluations = evals;
  return out;
}

MinimizationResult basinhopping(const Objective& objective, const Box& box,
                                const OptimizerConfig& cfg) {
  long long evals = 0;
  CountedObjective f(objective, evals);
  std::size_t n = box.dims();
  std::mt19937_64 rng(cfg.rng_seed);

  std::vector<double> best_x(n, 0.0);
  double best = std::numeric_limits<double>::infinity();
  bool have_best = false;

  auto note = [&](const std::vector<double>& x, double value) {
    if (!have_best || value < best) {
      best_x = x;
      best = value;
      have_best = true;
    }
  };

  // Deterministic probe of the all-zero point (clamped into the box): zero
  // sets that collapse to a single value such as +-0.0 are invisible to
  // uniform sampling, yet show up in practice.  Skipped when the caller
  // pins the start point.
  if (!cfg.start.has_value()) {
    std::vector<double> anchor(n, 0.0);
    clamp_into(box, anchor);
    note(anchor, f(anchor));
  }

  PowellRunner local(f, box, cfg);
  int runs = std::max(1, cfg.restarts);
  for (int run = 0; run < runs && best != 0.0; ++run) {
    std::vector<double> current(n);
    if (run == 0 && cfg.start.has_value()) {
      current = *cfg.start;
      current.resize(n, 0.0);
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        current[i] = box.lo[i] + uniform01(rng) * (box.hi[i] - box.lo[i]);
      }
    }
    clamp_into(box, current);

    MinimizationResult seed = local.run(current);
    current = seed.best_x;
    double f_current = seed.best_value;
    note(current, f_current);

    for (int hop = 0; hop < cfg.hops && best != 0.0; ++hop) {
      std::vector<double> candidate(n);
      for (std::size_t i = 0; i < n; ++i) {
        double width = box.hi[i] - box.lo[i];
        double delta = (2.0 * uniform01(rng) - 1.0) * cfg.step_scale * width;
        double v = current[i] + delta;
        // Reflect off the box faces instead of piling mass on them.
        while (v < box.lo[i] || v > box.hi[i]) {
          if (width == 0.0) {
            v = box.lo[i];
            break;
          }
          if (v < box.lo[i]) v = box.lo[i] + (box.lo[i] - v);
          if (v > box.hi[i]) v = box.hi[i] - (v - box.hi[i]);
        }
        candidate[i] = v;
      }
      MinimizationResult hop_result = local.run(candidate);
      note(hop_result.best_x, hop_result.best_value);
      double delta_f = hop_result.best_value - f_current;
      if (delta_f <= 0.0 ||
          uniform01(rng) < std::exp(-delta_f / cfg.temperature)) {
        current = hop_result.best_x;
        f_current = hop_result.best_value;
      }
    }
  }

  MinimizationResult out;
  out.best_x = std::move(best_x);
  double confirmed = f(out.best_x);
  out.best_value = confirmed;
  out.evaluations = evals;
  out.reason = confirmed == 0.0 ? StopReason::FoundZero : StopReason::HopBudget;
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index) {
  std::uint64_t z = base;
  z += 0x9E3779B97F4A7C15ull * (stream * 0x632BE59BD9B4E019ull + index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace awd
