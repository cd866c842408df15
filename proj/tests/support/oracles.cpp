#include "support/oracles.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace oracle {

using synthcat::CategoricalDataset;
using synthcat::Schema;
using synthcat::Variable;

std::vector<BruteMatch> brute_match(const CategoricalDataset& original,
                                    const CategoricalDataset& synthetic,
                                    const std::vector<int>& known_vars,
                                    int sensitive_var) {
  std::size_t n = original.n;
  std::vector<BruteMatch> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    long long c = 0;
    for (std::size_t j = 0; j < n; ++j) {
      bool keys_equal = true;
      for (int v : known_vars) {
        if (original.cell(j, static_cast<std::size_t>(v)) !=
            original.cell(i, static_cast<std::size_t>(v))) {
          keys_equal = false;
          break;
        }
      }
      if (keys_equal && synthetic.cell(j, static_cast<std::size_t>(sensitive_var)) ==
                            original.cell(i, static_cast<std::size_t>(sensitive_var))) {
        c += 1;
      }
    }
    BruteMatch& rec = out[i];
    rec.c = c;
    rec.T = synthetic.cell(i, static_cast<std::size_t>(sensitive_var)) ==
                    original.cell(i, static_cast<std::size_t>(sensitive_var))
                ? 1
                : 0;
    rec.K = (c == 1 && rec.T == 1) ? 1 : 0;
    rec.F = (c == 1 && rec.T == 0) ? 1 : 0;
  }
  return out;
}

double brute_expected_risk(const std::vector<BruteMatch>& stats) {
  double total = 0.0;
  for (const BruteMatch& rec : stats) {
    if (rec.c > 0) total += static_cast<double>(rec.T) / static_cast<double>(rec.c);
  }
  return total;
}

double brute_true_match_rate(const std::vector<BruteMatch>& stats) {
  long long k = 0;
  for (const BruteMatch& rec : stats) k += rec.K;
  return static_cast<double>(k) / static_cast<double>(stats.size());
}

double brute_false_match_rate(const std::vector<BruteMatch>& stats) {
  long long f = 0, s = 0;
  for (const BruteMatch& rec : stats) {
    f += rec.F;
    if (rec.c == 1) s += 1;
  }
  if (s == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(f) / static_cast<double>(s);
}

long long brute_unique_count(const std::vector<BruteMatch>& stats) {
  long long s = 0;
  for (const BruteMatch& rec : stats) {
    if (rec.c == 1) s += 1;
  }
  return s;
}

long long brute_attribute_count(const CategoricalDataset& original,
                                const CategoricalDataset& synthetic) {
  std::size_t sens = static_cast<std::size_t>(original.schema.sensitive_index());
  long long count = 0;
  for (std::size_t i = 0; i < original.n; ++i) {
    if (original.cell(i, sens) == synthetic.cell(i, sens)) count += 1;
  }
  return count;
}

Frac frac_add(Frac a, Frac b) {
  Frac out;
  out.num = a.num * b.den + b.num * a.den;
  out.den = a.den * b.den;
  long long g = std::gcd(out.num < 0 ? -out.num : out.num, out.den);
  if (g > 1) {
    out.num /= g;
    out.den /= g;
  }
  return out;
}

Frac brute_expected_risk_exact(const std::vector<BruteMatch>& stats) {
  Frac total{0, 1};
  for (const BruteMatch& rec : stats) {
    if (rec.c > 0 && rec.T == 1) total = frac_add(total, Frac{1, rec.c});
  }
  return total;
}

std::map<std::vector<int>, long long> count_combos(const CategoricalDataset& data,
                                                   const std::vector<int>& vars) {
  std::map<std::vector<int>, long long> counts;
  std::vector<int> combo(vars.size());
  for (std::size_t i = 0; i < data.n; ++i) {
    for (std::size_t a = 0; a < vars.size(); ++a) {
      combo[a] = data.cell(i, static_cast<std::size_t>(vars[a]));
    }
    counts[combo] += 1;
  }
  return counts;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(double (*f)(double, const void*), const void* ctx, double a,
                     double fa, double b, double fb, double m, double fm,
                     double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm, ctx), frm = f(rm, ctx);
  double left = simpson(a, fa, m, fm, flm);
  double right = simpson(m, fm, b, fb, frm);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_step(f, ctx, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         adaptive_step(f, ctx, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

struct MomentCtx {
  double count = 0.0;
  double tau = 0.0;
  double m = 0.0;
  double offset = 0.0;  // log density at the mode, subtracted for stability
  int power = 0;        // 0: mass, 1: x, 2: x^2
  bool exp_weight = false;
};

double moment_integrand(double x, const void* raw) {
  const MomentCtx& ctx = *static_cast<const MomentCtx*>(raw);
  double log_f =
      ctx.count * x - std::exp(x) - 0.5 * ctx.tau * (x - ctx.m) * (x - ctx.m) - ctx.offset;
  double f = std::exp(log_f);
  if (ctx.exp_weight) f *= std::exp(x);
  if (ctx.power == 1) f *= x;
  if (ctx.power == 2) f *= x * x;
  return f;
}

}  // namespace

double integrate(double (*f)(double, const void*), const void* ctx, double a,
                 double b, double tol) {
  double m = 0.5 * (a + b);
  double fa = f(a, ctx), fb = f(b, ctx), fm = f(m, ctx);
  double whole = simpson(a, fa, b, fb, fm);
  return adaptive_step(f, ctx, a, fa, b, fb, m, fm, whole, tol, 60);
}

LogLambdaMoments log_lambda_moments(double count, double tau, double m) {
  // Mode of c*x - e^x - tau/2 (x-m)^2 by Newton, then integrate a wide
  // interval around it; the tails die doubly exponentially on the right and
  // like a Gaussian on the left.
  double x = std::log(count > 0.5 ? count : 0.5);
  for (int it = 0; it < 200; ++it) {
    double g = count - std::exp(x) - tau * (x - m);
    double h = -std::exp(x) - tau;
    double step = g / h;
    x -= step;
    if (std::fabs(step) < 1e-14) break;
  }
  double curvature = std::exp(x) + tau;
  double sd = 1.0 / std::sqrt(curvature);
  double lo = x - 14.0 * sd - 6.0;
  double hi = x + 14.0 * sd + 6.0;

  MomentCtx ctx;
  ctx.count = count;
  ctx.tau = tau;
  ctx.m = m;
  ctx.offset = count * x - std::exp(x) - 0.5 * tau * (x - m) * (x - m);

  double tol = 1e-13;
  ctx.power = 0;
  ctx.exp_weight = false;
  double mass = integrate(moment_integrand, &ctx, lo, hi, tol);
  if (!(mass > 0.0)) throw std::runtime_error("log_lambda_moments: zero mass");
  ctx.power = 1;
  double first = integrate(moment_integrand, &ctx, lo, hi, tol);
  ctx.power = 2;
  double second = integrate(moment_integrand, &ctx, lo, hi, tol);
  ctx.power = 0;
  ctx.exp_weight = true;
  double lambda_mass = integrate(moment_integrand, &ctx, lo, hi, tol);

  LogLambdaMoments out;
  out.mean_x = first / mass;
  out.var_x = second / mass - out.mean_x * out.mean_x;
  out.mean_lambda = lambda_mass / mass;
  return out;
}

double chi_square_stat(const std::vector<long long>& counts,
                       const std::vector<double>& probs, long long total) {
  if (counts.size() != probs.size()) {
    throw std::runtime_error("chi_square_stat: length mismatch");
  }
  double stat = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    double expected = probs[k] * static_cast<double>(total);
    if (expected <= 0.0) throw std::runtime_error("chi_square_stat: zero expected cell");
    double diff = static_cast<double>(counts[k]) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

Schema make_schema(const std::vector<std::pair<std::string, int>>& keys,
                   const std::string& sensitive_name, int G) {
  Schema schema;
  for (const auto& [name, levels] : keys) {
    Variable v;
    v.name = name;
    v.levels = levels;
    v.role = synthcat::Role::key;
    schema.variables.push_back(v);
  }
  Variable s;
  s.name = sensitive_name;
  s.levels = G;
  s.role = synthcat::Role::sensitive;
  schema.variables.push_back(s);
  schema.validate();
  return schema;
}

CategoricalDataset make_dataset(const Schema& schema,
                                const std::vector<std::vector<int>>& rows) {
  CategoricalDataset data;
  data.schema = schema;
  data.n = rows.size();
  data.cells.reserve(rows.size() * schema.variables.size());
  for (const std::vector<int>& row : rows) {
    if (row.size() != schema.variables.size()) {
      throw std::runtime_error("make_dataset: row width mismatch");
    }
    for (int v : row) data.cells.push_back(v);
  }
  data.validate();
  return data;
}

}  // namespace oracle
