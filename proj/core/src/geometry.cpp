#include "cuspwave/geometry.hpp"

#include <cmath>
#include <sstream>

#include "cuspwave/errors.hpp"

namespace cuspwave {

std::string to_string(WarpKind kind) {
  switch (kind) {
    case WarpKind::Exp: return "exp";
    case WarpKind::Cosh: return "cosh";
    case WarpKind::Power: return "power";
  }
  return "?";
}

WarpKind warp_kind_from_string(const std::string& s) {
  if (s == "exp") return WarpKind::Exp;
  if (s == "cosh") return WarpKind::Cosh;
  if (s == "power") return WarpKind::Power;
  throw PreconditionError("unknown warp kind '" + s + "' (expected exp|cosh|power)");
}

WarpProfile WarpProfile::exp_cusp(double r0) { return WarpProfile(WarpKind::Exp, 0.0, r0); }

WarpProfile WarpProfile::cosh_cusp(double r0) { return WarpProfile(WarpKind::Cosh, 0.0, r0); }

WarpProfile WarpProfile::power_cusp(double sigma, double r0) {
  if (!(sigma > 1.0)) throw PreconditionError("power cusp needs sigma > 1");
  // phi' = sigma/r must stay bounded on the whole half-line.
  if (!(r0 >= 0.5)) throw PreconditionError("power cusp needs r0 >= 0.5");
  return WarpProfile(WarpKind::Power, sigma, r0);
}

WarpProfile WarpProfile::make(WarpKind kind, double sigma, double r0) {
  switch (kind) {
    case WarpKind::Exp: return exp_cusp(r0);
    case WarpKind::Cosh: return cosh_cusp(r0);
    case WarpKind::Power: return power_cusp(sigma, r0);
  }
  throw PreconditionError("bad warp kind");
}

double WarpProfile::phi(double r) const {
  switch (kind_) {
    case WarpKind::Exp: return r;
    case WarpKind::Cosh: {
      // log cosh r = |r| + log1p(e^{-2|r|}) - log 2, stable for large |r|
      const double a = std::fabs(r);
      return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
    }
    case WarpKind::Power: return sigma_ * std::log(r);
  }
  return 0.0;
}

double WarpProfile::derivative(int order, double r) const {
  if (order == 0) return phi(r);
  switch (kind_) {
    case WarpKind::Exp: return order == 1 ? 1.0 : 0.0;
    case WarpKind::Cosh: {
      const double t = std::tanh(r);
      const double s2 = 1.0 - t * t;  // sech^2
      switch (order) {
        case 1: return t;
        case 2: return s2;
        case 3: return -2.0 * s2 * t;
        case 4: return 4.0 * s2 * t * t - 2.0 * s2 * s2;
        default: break;
      }
      break;
    }
    case WarpKind::Power: {
      const double s = sigma_;
      switch (order) {
        case 1: return s / r;
        case 2: return -s / (r * r);
        case 3: return 2.0 * s / (r * r * r);
        case 4: return -6.0 * s / (r * r * r * r);
        default: break;
      }
      break;
    }
  }
  throw PreconditionError("warp derivative order must be in 0..4");
}

double WarpProfile::w(double r) const {
  const double d1 = derivative(1, r);
  const double d2 = derivative(2, r);
  return 0.25 * (d1 * d1 - 2.0 * d2);
}

WarpValues WarpProfile::eval(double r) const {
  if (!(r >= r0_)) {
    std::ostringstream os;
    os << "eval_warp: r = " << r << " below r0 = " << r0_;
    throw DomainError(os.str());
  }
  const double d1 = derivative(1, r);
  const double d2 = derivative(2, r);
  return {phi(r), d1, d2, 0.25 * (d1 * d1 - 2.0 * d2)};
}

WarpValues eval_warp(const WarpProfile& profile, double r) { return profile.eval(r); }

double area_tail(const WarpProfile& profile, double R) {
  const double r0 = profile.r0();
  if (!(R >= r0)) throw DomainError("area_tail: R below r0");
  const double len = R - r0;
  if (len == 0.0) return 0.0;
  long n = static_cast<long>(std::ceil(len / 1e-3));
  if (n % 2) ++n;
  const double h = len / static_cast<double>(n);
  double acc = std::exp(-profile.phi(r0)) + std::exp(-profile.phi(R));
  for (long i = 1; i < n; ++i) {
    acc += (i % 2 ? 4.0 : 2.0) * std::exp(-profile.phi(r0 + h * static_cast<double>(i)));
  }
  return acc * h / 3.0;
}

double shell_weight_sum(const WarpProfile& profile, int L0, int Lmax) {
  if (!(static_cast<double>(L0) > profile.r0())) throw DomainError("shell_weight_sum: L0 must exceed r0");
  double acc = 0.0;
  // smallest terms first
  for (int L = Lmax; L >= L0; --L) acc += std::exp(-profile.phi(static_cast<double>(L)));
  return acc;
}

}  // namespace cuspwave
