#include "sfavg/spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sfavg {

double SpectralField::norm() const {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return std::sqrt(s);
}

bool SpectralField::all_finite() const {
  for (double c : coeffs)
    if (!std::isfinite(c)) return false;
  return true;
}

bool GridField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

namespace {
void require_same_size(int a, int b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": basis sizes differ");
}
}  // namespace

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  require_same_size(a.basis_size(), b.basis_size(), "operator+");
  SpectralField r = a;
  for (int k = 0; k < r.basis_size(); ++k) r[k] += b[k];
  return r;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  require_same_size(a.basis_size(), b.basis_size(), "operator-");
  SpectralField r = a;
  for (int k = 0; k < r.basis_size(); ++k) r[k] -= b[k];
  return r;
}

SpectralField operator*(double s, const SpectralField& a) {
  SpectralField r = a;
  for (double& c : r.coeffs) c *= s;
  return r;
}

double inner(const SpectralField& a, const SpectralField& b) {
  require_same_size(a.basis_size(), b.basis_size(), "inner");
  double s = 0.0;
  for (int k = 0; k < a.basis_size(); ++k) s += a[k] * b[k];
  return s;
}

std::vector<double> collocation_points(int n) {
  std::vector<double> xi(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) xi[static_cast<std::size_t>(j)] = double(j + 1) / double(n + 1);
  return xi;
}

OperatorSpec::OperatorSpec(std::function<double(int)> law, std::string name)
    : law_(std::move(law)), name_(std::move(name)) {
  lambda1_ = law_(1);
  if (!(lambda1_ > 0.0)) throw std::domain_error("OperatorSpec: lambda_1 must be positive");
}

OperatorSpec OperatorSpec::dirichlet_laplacian() {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return OperatorSpec([pi2](int k) { return pi2 * double(k) * double(k); },
                      "dirichlet_laplacian");
}

OperatorSpec OperatorSpec::from_law(std::function<double(int)> law, std::string name) {
  return OperatorSpec(std::move(law), std::move(name));
}

double OperatorSpec::eigenvalue(int k) const {
  if (k < 1) throw std::domain_error("eigenvalue: modes are 1-indexed, k >= 1 required");
  return law_(k);
}

double eigenvalue(const OperatorSpec& op, int k) { return op.eigenvalue(k); }

SpectralField apply_semigroup(const SpectralField& x, const OperatorSpec& op, double t) {
  if (t < 0.0) throw std::domain_error("apply_semigroup: t must be >= 0");
  SpectralField r = x;
  for (int k = 0; k < r.basis_size(); ++k) r[k] *= std::exp(-op.eigenvalue(k + 1) * t);
  return r;
}

double fractional_norm(const SpectralField& x, const OperatorSpec& op, double a) {
  if (a < 0.0 || a > 1.0) throw std::domain_error("fractional_norm: a must lie in [0,1]");
  double s = 0.0;
  for (int k = 0; k < x.basis_size(); ++k) {
    const double w = std::pow(op.eigenvalue(k + 1), 2.0 * a);
    s += w * x[k] * x[k];
  }
  return std::sqrt(s);
}

const std::vector<double>& sine_table(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<std::vector<double>>> cache;
  std::scoped_lock lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    auto tbl = std::make_unique<std::vector<double>>(std::size_t(n) * std::size_t(n));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        (*tbl)[std::size_t(j) * std::size_t(n) + std::size_t(k)] =
            std::sin(double(j + 1) * double(k + 1) * std::numbers::pi / double(n + 1));
    slot = std::move(tbl);
  }
  return *slot;
}

GridField to_grid(const SpectralField& x) {
  const int n = x.basis_size();
  const auto& s = sine_table(n);
  const double rt2 = std::numbers::sqrt2;
  GridField v(n);
  for (int j = 0; j < n; ++j) {
    const double* row = s.data() + std::size_t(j) * std::size_t(n);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += row[k] * x[k];
    v.values[std::size_t(j)] = rt2 * acc;
  }
  return v;
}

SpectralField to_spectral(const GridField& v) {
  const int n = v.grid_size();
  const auto& s = sine_table(n);
  const double scale = std::numbers::sqrt2 / double(n + 1);
  SpectralField x(n);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      acc += s[std::size_t(j) * std::size_t(n) + std::size_t(k)] * v.values[std::size_t(j)];
    x[k] = scale * acc;
  }
  return x;
}

}  // namespace sfavg
