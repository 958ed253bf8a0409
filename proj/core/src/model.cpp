#include "sfavg/model.hpp"

#include <cmath>
#include <sstream>

#include "sfavg/quadrature.hpp"

namespace sfavg {

namespace {

SpectralField pad_modes(const SpectralField& x, int m) {
  SpectralField r(m);
  for (int k = 0; k < x.basis_size(); ++k) r[k] = x[k];
  return r;
}

SpectralField truncate_modes(const SpectralField& x, int n) {
  SpectralField r(n);
  for (int k = 0; k < n; ++k) r[k] = x[k];
  return r;
}

SpectralField nemytskii(const PointwiseMap& map, const char* which, bool dealias,
                        const SpectralField& x, const SpectralField& y) {
  const int n = x.basis_size();
  if (y.basis_size() != n)
    throw std::invalid_argument("nemytskii: x and y basis sizes differ");
  const int m = dealias ? (3 * n + 1) / 2 : n;
  const GridField gx = to_grid(dealias ? pad_modes(x, m) : x);
  const GridField gy = to_grid(dealias ? pad_modes(y, m) : y);
  GridField out(m);
  for (int j = 0; j < m; ++j) {
    const double xi = double(j + 1) / double(m + 1);
    const double v = map(xi, gx.values[std::size_t(j)], gy.values[std::size_t(j)]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << which << " returned a non-finite value at collocation point xi=" << xi
          << " (j=" << (j + 1) << ")";
      throw EvaluationError(msg.str());
    }
    out.values[std::size_t(j)] = v;
  }
  const SpectralField s = to_spectral(out);
  return dealias ? truncate_modes(s, n) : s;
}

}  // namespace

SpectralField nemytskii_f(const ModelSpec& m, const SpectralField& x,
                          const SpectralField& y) {
  return nemytskii(m.f, "f", m.dealias, x, y);
}

SpectralField nemytskii_g(const ModelSpec& m, const SpectralField& x,
                          const SpectralField& y) {
  return nemytskii(m.g, "g", m.dealias, x, y);
}

double potential_u(const ModelSpec& m, const SpectralField& x, const SpectralField& y,
                   int quad_points) {
  if (quad_points < 2) throw std::domain_error("potential_u: quad_points >= 2 required");
  const QuadratureRule rule = gauss_legendre01(quad_points);
  double u = 0.0;
  for (int q = 0; q < quad_points; ++q) {
    const double s = rule.nodes[std::size_t(q)];
    const SpectralField gsy = nemytskii_g(m, x, s * y);
    u += rule.weights[std::size_t(q)] * inner(gsy, y);
  }
  return u;
}

DissipativityReport check_dissipativity(const ModelSpec& m, const ScanBox& box,
                                        int resolution) {
  if (resolution < 2) throw std::domain_error("check_dissipativity: resolution >= 2");
  const double mu = m.op_b.smallest();

  auto axis = [resolution](double lo, double hi, int i) {
    return lo + (hi - lo) * double(i) / double(resolution - 1);
  };

  // Central finite differences in y over the scan grid.
  const double span = std::max(1e-6, box.y_hi - box.y_lo);
  const double h = 1e-4 * span;
  double lg = 0.0;
  for (int ix = 0; ix < resolution; ++ix) {
    for (int jx = 0; jx < resolution; ++jx) {
      for (int jy = 0; jy < resolution; ++jy) {
        const double xi = axis(box.xi_lo, box.xi_hi, ix);
        const double xv = axis(box.x_lo, box.x_hi, jx);
        const double yv = axis(box.y_lo, box.y_hi, jy);
        const double d = (m.g(xi, xv, yv + h) - m.g(xi, xv, yv - h)) / (2.0 * h);
        if (!std::isfinite(d))
          throw EvaluationError("check_dissipativity: non-finite dg/dy in the scan");
        lg = std::max(lg, std::abs(d));
      }
    }
  }

  DissipativityReport rep;
  rep.lg_empirical = lg;
  rep.lg_declared = m.g_y_sup;
  rep.declared_consistent = m.g_y_sup < 0.0 || m.g_y_sup >= lg * (1.0 - 1e-6);
  const double lg_eff = m.g_y_sup >= 0.0 ? m.g_y_sup : lg;
  rep.margin = mu - lg_eff;
  rep.strict = rep.margin > 0.0;

  // Weak constants over sampled spectral fields, c fixed at mu/2.
  rep.weak_c = mu / 2.0;
  const int n = 16;
  const int samples = std::max(8, resolution);
  double worst = 0.0;
  std::uint64_t state = 0x5eedf00d;
  auto next_unit = [&state]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return double(state >> 11) * 0x1p-53;
  };
  for (int s = 0; s < samples; ++s) {
    SpectralField xs(n), ys(n);
    for (int k = 0; k < n; ++k) {
      const double scale = 1.0 / double(k + 1);
      xs[k] = (2.0 * next_unit() - 1.0) * scale * (box.x_hi - box.x_lo) * 0.5;
      ys[k] = (2.0 * next_unit() - 1.0) * scale * (box.y_hi - box.y_lo) * 0.5;
    }
    const SpectralField gv = nemytskii_g(m, xs, ys);
    double by = 0.0;
    for (int k = 0; k < n; ++k) by -= m.op_b.eigenvalue(k + 1) * ys[k] * ys[k];
    const double lhs = by + inner(gv, ys);
    const double y2 = ys.norm() * ys.norm();
    worst = std::max(worst, lhs + rep.weak_c * y2);
  }
  rep.weak_C = std::max(0.0, worst);
  return rep;
}

ModelSpec make_linear_model(double kappa) {
  ModelSpec m;
  m.name = "linear";
  m.f = [](double, double, double y) { return y; };
  m.g = [kappa](double, double x, double y) { return -kappa * y + x; };
  m.g_y_sup = kappa;
  m.contraction_bonus = kappa;
  m.linear_in_y = true;
  m.kappa = kappa;
  m.forcing = [](double, double x) { return x; };
  return m;
}

ModelSpec make_tanh_model(double kappa) {
  ModelSpec m;
  m.name = "tanh";
  m.f = [](double, double, double y) { return std::tanh(y); };
  m.g = [kappa](double, double x, double y) { return -kappa * y + std::sin(x); };
  m.g_y_sup = kappa;
  m.contraction_bonus = kappa;
  m.linear_in_y = true;
  m.kappa = kappa;
  m.forcing = [](double, double x) { return std::sin(x); };
  return m;
}

ModelSpec make_zero_model() {
  ModelSpec m;
  m.name = "zero";
  m.f = [](double, double, double) { return 0.0; };
  m.g = [](double, double, double) { return 0.0; };
  m.g_y_sup = 0.0;
  m.contraction_bonus = 0.0;
  m.linear_in_y = true;
  m.kappa = 0.0;
  m.forcing = [](double, double) { return 0.0; };
  return m;
}

ModelSpec model_by_name(const std::string& name, double kappa) {
  if (name == "linear") return make_linear_model(kappa);
  if (name == "tanh") return make_tanh_model(kappa);
  if (name == "zero") return make_zero_model();
  throw std::invalid_argument("unknown model '" + name + "' (built-ins: linear, tanh, zero)");
}

}  // namespace sfavg
