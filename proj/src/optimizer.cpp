#include "branchsat/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace branchsat {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGold = 1.618034;
constexpr double kGlimit = 100.0;
constexpr double kTiny = 1e-20;
constexpr double kCGold = 0.3819660;
constexpr double kZeps = 1e-20;
// Bracketing expands geometrically; this many expansions is enough to
// walk a search coordinate from unit scale to the top of double range.
constexpr int kBracketMax = 2000;
constexpr int kBrentMax = 100;

double sign(double a, double b) { return b >= 0.0 ? std::fabs(a) : -std::fabs(a); }

/// 1-D function along a ray, with NaN mapped to +inf so the bracketing
/// and section logic can order every value.
class Ray {
 public:
  Ray(const ObjectiveFn& f, const std::vector<double>& origin,
      const std::vector<double>& dir, std::uint64_t& evals)
      : f_(f), origin_(origin), dir_(dir), evals_(evals) {}

  double operator()(double t) const {
    std::vector<double> x(origin_.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = origin_[i] + t * dir_[i];
    evals_++;
    double v = f_(x);
    return std::isnan(v) ? kInf : v;
  }

  std::vector<double> at(double t) const {
    std::vector<double> x(origin_.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = origin_[i] + t * dir_[i];
    return x;
  }

 private:
  const ObjectiveFn& f_;
  const std::vector<double>& origin_;
  const std::vector<double>& dir_;
  std::uint64_t& evals_;
};

struct Bracket {
  double a, b, c;
  double fa, fb, fc;
};

Bracket bracket_minimum(const Ray& g, double ax, double bx) {
  double fa = g(ax), fb = g(bx);
  if (fb > fa) {
    std::swap(ax, bx);
    std::swap(fa, fb);
  }
  double cx = bx + kGold * (bx - ax);
  double fc = g(cx);
  // Equal values do not end the expansion: piecewise-constant
  // objectives have flat treads on the way downhill. Only a strict
  // rise (or a zero, which cannot be beaten) brackets the minimum.
  for (int it = 0; (fb > fc || (fb == fc && fb != 0.0)) && it < kBracketMax;
       ++it) {
    if (!std::isfinite(bx) && !std::isfinite(cx)) break;
    double r = (bx - ax) * (fb - fc);
    double q = (bx - cx) * (fb - fa);
    double u = bx - ((bx - cx) * q - (bx - ax) * r) /
                       (2.0 * sign(std::max(std::fabs(q - r), kTiny), q - r));
    double ulim = bx + kGlimit * (cx - bx);
    double fu;
    if (!std::isfinite(u)) u = cx + kGold * (cx - bx);
    if ((bx - u) * (u - cx) > 0.0) {
      fu = g(u);
      if (fu < fc) {
        ax = bx; fa = fb; bx = u; fb = fu;
        break;
      }
      if (fu > fb) {
        cx = u; fc = fu;
        break;
      }
      u = cx + kGold * (cx - bx);
      fu = g(u);
    } else if ((cx - u) * (u - ulim) > 0.0) {
      fu = g(u);
      if (fu < fc) {
        double next = u + kGold * (u - cx);
        bx = cx; cx = u; u = next;
        fb = fc; fc = fu; fu = g(u);
      }
    } else if ((u - ulim) * (ulim - cx) >= 0.0) {
      u = ulim;
      fu = g(u);
    } else {
      u = cx + kGold * (cx - bx);
      fu = g(u);
    }
    ax = bx; bx = cx; cx = u;
    fa = fb; fb = fc; fc = fu;
  }
  return {ax, bx, cx, fa, fb, fc};
}

struct LineMin {
  double t;
  double f;
};

LineMin brent_minimize(const Ray& g, const Bracket& br, double tol) {
  double a = std::min(br.a, br.c);
  double b = std::max(br.a, br.c);
  double x = br.b, w = br.b, v = br.b;
  double fx = br.fb, fw = br.fb, fv = br.fb;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < kBrentMax; ++it) {
    double xm = 0.5 * (a + b);
    double tol1 = tol * std::fabs(x) + kZeps;
    double tol2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) break;
    if (!std::isfinite(xm)) break;
    bool golden = true;
    if (std::fabs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      double etemp = e;
      e = d;
      if (!(std::fabs(p) >= std::fabs(0.5 * q * etemp) || p <= q * (a - x) ||
            p >= q * (b - x)) &&
          std::isfinite(p) && std::isfinite(q) && q != 0.0) {
        d = p / q;
        double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = sign(tol1, xm - x);
        golden = false;
      }
    }
    if (golden) {
      e = x >= xm ? a - x : b - x;
      d = kCGold * e;
    }
    double u = std::fabs(d) >= tol1 ? x + d : x + sign(tol1, d);
    double fu = g(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; w = x; x = u;
      fv = fw; fw = fx; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; w = u; fv = fw; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx};
}

/// Minimizes along `dir` from `p`, updating both in place.
double line_minimize(const ObjectiveFn& f, std::vector<double>& p,
                     std::vector<double>& dir, double coord_tol,
                     std::uint64_t& evals) {
  bool all_zero = std::all_of(dir.begin(), dir.end(),
                              [](double d) { return d == 0.0; });
  if (all_zero) {
    Ray g(f, p, dir, evals);
    return g(0.0);
  }
  Ray g(f, p, dir, evals);
  // The objective can be piecewise constant (bit-level predicates
  // quantize it), so a unit step may sit on a plateau. Grow the probe
  // geometrically in both directions until the value moves.
  double f0 = g(0.0);
  double bx = 1.0;
  double fb = g(bx);
  for (double m = 1.0; fb == f0 && std::isfinite(m);) {
    double fm = g(-m);
    if (fm != f0) {
      bx = -m;
      fb = fm;
      break;
    }
    // Fine steps first, then long-range jumps out to the top of the
    // double range so branches guarded by huge magnitudes stay in play.
    m *= m < 1e18 ? 8.0 : 1e30;
    bx = m;
    fb = g(bx);
  }
  if (fb == f0) return f0;
  Bracket br = bracket_minimum(g, 0.0, bx);
  LineMin lm = brent_minimize(g, br, coord_tol);
  // Fall back to the best bracket endpoint if the section search lost
  // to a plateau.
  double bt = lm.t, bf = lm.f;
  if (br.fb < bf) { bt = br.b; bf = br.fb; }
  if (br.fc < bf) { bt = br.c; bf = br.fc; }
  if (br.fa < bf) { bt = br.a; bf = br.fa; }
  p = g.at(bt);
  if (bt != 0.0 && std::isfinite(bt))
    for (auto& d : dir) d *= bt;
  return bf;
}

}  // namespace

MinimizeResult local_minimize(const ObjectiveFn& f, std::vector<double> x0,
                              const LocalMinConfig& cfg) {
  for (double v : x0)
    if (!std::isfinite(v))
      throw std::invalid_argument("non-finite starting point");
  const std::size_t n = x0.size();
  MinimizeResult res;
  std::vector<std::vector<double>> dirs(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) dirs[i][i] = 1.0;

  std::vector<double> p = x0;
  std::uint64_t evals = 0;
  double fret = f(p);
  evals++;
  if (std::isnan(fret)) fret = kInf;
  std::vector<double> pt = p;

  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double fp = fret;
    std::size_t ibig = 0;
    double del = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double fptt = fret;
      fret = line_minimize(f, p, dirs[i], cfg.coord_tol, evals);
      if (fptt - fret > del) {
        del = fptt - fret;
        ibig = i;
      }
    }
    if (fret == 0.0) break;
    if (fp - fret <= cfg.value_tol) break;
    // Direction replacement: try the extrapolated point and, when the
    // standard test passes, swap in the overall sweep direction.
    std::vector<double> ptt(n), xit(n);
    bool finite_dir = true;
    for (std::size_t i = 0; i < n; ++i) {
      ptt[i] = 2.0 * p[i] - pt[i];
      xit[i] = p[i] - pt[i];
      if (!std::isfinite(xit[i])) finite_dir = false;
    }
    pt = p;
    if (!finite_dir) continue;
    double fptt = f(ptt);
    evals++;
    if (std::isnan(fptt)) fptt = kInf;
    if (fptt < fp) {
      double a = fp - fret - del;
      double t = 2.0 * (fp - 2.0 * fret + fptt) * a * a -
                 del * (fp - fptt) * (fp - fptt);
      if (std::isfinite(t) && t < 0.0) {
        fret = line_minimize(f, p, xit, cfg.coord_tol, evals);
        dirs[ibig] = dirs[n - 1];
        dirs[n - 1] = xit;
      }
    }
  }
  res.x_star = p;
  res.f_star = fret;
  res.evaluations = evals;
  return res;
}

std::vector<double> propose_perturbation(const std::vector<double>& x,
                                         double step_size,
                                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-step_size, step_size);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + u(rng);
  return out;
}

MinimizeResult mcmc_minimize(const ObjectiveFn& f, std::vector<double> x0,
                             const McmcConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  MinimizeResult res = local_minimize(f, std::move(x0), cfg.local);
  std::vector<double> xl = res.x_star;
  double fl = res.f_star;
  MinimizeResult best = res;

  for (int k = 0; k < cfg.n_iter; ++k) {
    if (best.f_star == 0.0) {
      best.early_stopped = true;
      break;
    }
    std::vector<double> x = propose_perturbation(xl, cfg.step_size, rng);
    for (auto& v : x)
      if (!std::isfinite(v)) v = 0.0;
    MinimizeResult trial = local_minimize(f, std::move(x), cfg.local);
    best.evaluations += trial.evaluations;
    bool accept = trial.f_star < fl;
    if (!accept) {
      double m = unit(rng);
      accept = m < std::exp((fl - trial.f_star) / cfg.temperature);
    }
    if (accept) {
      xl = trial.x_star;
      fl = trial.f_star;
      best.accepted_moves++;
    }
    if (trial.f_star < best.f_star) {
      best.x_star = trial.x_star;
      best.f_star = trial.f_star;
    }
  }
  if (best.f_star == 0.0) best.early_stopped = true;
  if (cfg.literal_last_sample) {
    best.x_star = xl;
    best.f_star = fl;
  }
  return best;
}

}  // namespace branchsat
