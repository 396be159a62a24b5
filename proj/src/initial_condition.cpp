#include "cascade/initial_condition.hpp"

#include <cmath>
#include <numbers>

namespace cascade {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double eval_spherical_expr(const Expression& expr, std::span<const double> v) {
  const int n = static_cast<int>(v.size());
  double r = norm(v);
  double theta = 0.0, phi = 0.0;
  if (n == 2) {
    theta = std::atan2(v[1], v[0]);
  } else if (n == 3) {
    theta = r > 0.0 ? std::acos(std::clamp(v[2] / r, -1.0, 1.0)) : 0.0;
    phi = std::atan2(v[1], v[0]);
  } else if (n >= 4) {
    theta = r > 0.0 ? std::acos(std::clamp(v[0] / r, -1.0, 1.0)) : 0.0;
  }
  const double vars[3] = {r, theta, phi};
  return expr.eval(std::span<const double>(vars, 3));
}

double eval_cartesian_expr(const Expression& expr, std::span<const double> v) {
  double vars[3] = {0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < v.size() && i < 3; ++i) vars[i] = v[i];
  return expr.eval(std::span<const double>(vars, 3));
}

}  // namespace

double log_normal_radial_density(const LogNormalRadial& d, double r, int n) {
  if (r <= 0.0) return 0.0;
  const double z = (std::log(r) - d.mu) / d.sigma;
  return std::exp(-0.5 * z * z) /
         (sphere_area(n) * d.sigma * std::sqrt(2.0 * std::numbers::pi) * std::pow(r, n));
}

double log_normal_radial_moment(const LogNormalRadial& d, double p) {
  return std::exp(p * d.mu + 0.5 * p * p * d.sigma * d.sigma);
}

double InitialCondition::operator()(std::span<const double> v) const {
  const int n = static_cast<int>(v.size());
  const double r = norm(v);
  return std::visit(
      [&](const auto& ic) -> double {
        using T = std::decay_t<decltype(ic)>;
        if constexpr (std::is_same_v<T, RadialPower>) {
          return std::pow(r, ic.p);
        } else if constexpr (std::is_same_v<T, HarmonicMonomial>) {
          if (r == 0.0) return ic.p > 0.0 ? 0.0 : std::nan("");
          std::vector<double> dir(v.size());
          for (std::size_t i = 0; i < v.size(); ++i) dir[i] = v[i] / r;
          return std::pow(r, ic.p) * eval_mode(make_mode(ic.l, ic.k, n), dir);
        } else if constexpr (std::is_same_v<T, HarmonicSeries>) {
          double acc = 0.0;
          std::vector<double> dir(v.size());
          if (r > 0.0)
            for (std::size_t i = 0; i < v.size(); ++i) dir[i] = v[i] / r;
          for (const auto& term : ic.modes) {
            double g = term.radial.eval(r);
            if (r == 0.0) {
              if (term.l == 0)
                acc += g / std::sqrt(sphere_area(n));
              else if (g != 0.0)
                return std::nan("");
              continue;
            }
            acc += g * eval_mode(make_mode(term.l, term.k, n), dir);
          }
          return acc;
        } else if constexpr (std::is_same_v<T, LogNormalRadial>) {
          return log_normal_radial_density(ic, r, n);
        } else {
          return ic.coords == CoordsKind::cartesian ? eval_cartesian_expr(ic.expr, v)
                                                    : eval_spherical_expr(ic.expr, v);
        }
      },
      storage_);
}

double InitialCondition::p_max() const {
  return std::visit(
      [](const auto& ic) -> double {
        using T = std::decay_t<decltype(ic)>;
        if constexpr (std::is_same_v<T, RadialPower>)
          return std::abs(ic.p);
        else if constexpr (std::is_same_v<T, HarmonicMonomial>)
          return std::abs(ic.p);
        else if constexpr (std::is_same_v<T, HarmonicSeries>)
          return ic.p_max;
        else if constexpr (std::is_same_v<T, LogNormalRadial>)
          return 0.0;
        else
          return ic.p_max;
      },
      storage_);
}

bool InitialCondition::radial() const {
  return std::visit(
      [](const auto& ic) -> bool {
        using T = std::decay_t<decltype(ic)>;
        if constexpr (std::is_same_v<T, RadialPower> || std::is_same_v<T, LogNormalRadial>)
          return true;
        else if constexpr (std::is_same_v<T, HarmonicMonomial>)
          return ic.l == 0;
        else if constexpr (std::is_same_v<T, HarmonicSeries>) {
          for (const auto& m : ic.modes)
            if (m.l != 0) return false;
          return true;
        } else
          return false;  // expressions are treated as general
      },
      storage_);
}

bool InitialCondition::has_exact_modes() const {
  return !std::holds_alternative<GeneralExpression>(storage_);
}

std::vector<ExpansionTerm> InitialCondition::exact_modes(int n) const {
  std::vector<ExpansionTerm> terms;
  std::visit(
      [&](const auto& ic) {
        using T = std::decay_t<decltype(ic)>;
        if constexpr (std::is_same_v<T, RadialPower>) {
          const double scale = std::sqrt(sphere_area(n));
          const double p = ic.p;
          terms.push_back({make_mode(0, 1, n), [p, scale](double r) { return scale * std::pow(r, p); }});
        } else if constexpr (std::is_same_v<T, HarmonicMonomial>) {
          const double p = ic.p;
          terms.push_back({make_mode(ic.l, ic.k, n), [p](double r) { return std::pow(r, p); }});
        } else if constexpr (std::is_same_v<T, HarmonicSeries>) {
          for (const auto& m : ic.modes) {
            Expression radial = m.radial;
            terms.push_back({make_mode(m.l, m.k, n), [radial](double r) { return radial.eval(r); }});
          }
        } else if constexpr (std::is_same_v<T, LogNormalRadial>) {
          const double scale = std::sqrt(sphere_area(n));
          const LogNormalRadial d = ic;
          terms.push_back({make_mode(0, 1, n),
                           [d, scale, n](double r) { return scale * log_normal_radial_density(d, r, n); }});
        } else {
          throw NumericError("general-expression data has no exact harmonic decomposition");
        }
      },
      storage_);
  return terms;
}

void InitialCondition::validate_for(int n, Variant variant) const {
  if (n < 1) throw ConfigError("dimension must be >= 1");
  std::visit(
      [&](const auto& ic) {
        using T = std::decay_t<decltype(ic)>;
        if constexpr (std::is_same_v<T, HarmonicMonomial>) {
          if (n < 2) throw ConfigError("harmonic data requires n >= 2");
          make_mode(ic.l, ic.k, n);  // validates k range
          if (n >= 4 && ic.k != 1)
            throw ConfigError("n >= 4 supports zonal data only (k = 1)");
        } else if constexpr (std::is_same_v<T, HarmonicSeries>) {
          if (n < 2) throw ConfigError("harmonic data requires n >= 2");
          for (const auto& m : ic.modes) {
            make_mode(m.l, m.k, n);
            if (n >= 4 && m.k != 1)
              throw ConfigError("n >= 4 supports zonal data only (k = 1)");
            if (m.radial.num_variables() != 1)
              throw ConfigError("series radial expressions must have the single variable v");
          }
          for (std::size_t i = 0; i < ic.modes.size(); ++i)
            for (std::size_t j = i + 1; j < ic.modes.size(); ++j)
              if (ic.modes[i].l == ic.modes[j].l && ic.modes[i].k == ic.modes[j].k)
                throw ConfigError("harmonic series contains a duplicate (l, k) mode");
        } else if constexpr (std::is_same_v<T, LogNormalRadial>) {
          if (!(ic.sigma > 0.0)) throw ConfigError("log-normal sigma must be positive");
        } else if constexpr (std::is_same_v<T, GeneralExpression>) {
          if (n > 3) {
            if (ic.coords != CoordsKind::spherical)
              throw ConfigError("expression data with n >= 4 must be zonal (spherical, theta only)");
          }
        }
      },
      storage_);

  if (variant == Variant::isotropic && n == 1) {
    // n = 1 isotropic is only defined for even data.
    if (const auto* ge = as_expression()) {
      for (double x : {0.3, 0.9, 1.7, 2.4}) {
        const double plus[1] = {x}, minus[1] = {-x};
        double fp = ge->coords == CoordsKind::cartesian ? eval_cartesian_expr(ge->expr, plus)
                                                        : eval_spherical_expr(ge->expr, plus);
        double fm = ge->coords == CoordsKind::cartesian ? eval_cartesian_expr(ge->expr, minus)
                                                        : eval_spherical_expr(ge->expr, minus);
        if (std::abs(fp - fm) > 1e-12 * (1.0 + std::abs(fp)))
          throw ConfigError("n = 1 isotropic problems require even initial data");
      }
    } else if (!radial()) {
      throw ConfigError("n = 1 isotropic problems require radial (even) initial data");
    }
  }
}

}  // namespace cascade
