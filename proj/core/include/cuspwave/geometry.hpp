#pragma once

#include <cstddef>
#include <string>

namespace cuspwave {

enum class WarpKind { Exp, Cosh, Power };

std::string to_string(WarpKind kind);
WarpKind warp_kind_from_string(const std::string& s);

struct WarpValues {
  double phi;
  double dphi;
  double d2phi;
  double w;
};

// Warp function phi of the cusp metric dr^2 + e^{-2 phi(r)} dtheta^2.
//   Exp:   phi = r
//   Cosh:  phi = log cosh r
//   Power: phi = sigma log r   (sigma > 1, r0 >= 0.5)
class WarpProfile {
 public:
  static WarpProfile exp_cusp(double r0 = 0.0);
  static WarpProfile cosh_cusp(double r0 = 0.0);
  static WarpProfile power_cusp(double sigma, double r0 = 1.0);
  static WarpProfile make(WarpKind kind, double sigma, double r0);

  WarpKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double r0() const { return r0_; }

  // No domain check; callers on hot paths use these.
  double phi(double r) const;
  double derivative(int order, double r) const;  // order 0..4
  double w(double r) const;                      // (phi'^2 - 2 phi'') / 4

  // Checked evaluation, throws DomainError for r < r0.
  WarpValues eval(double r) const;

  bool operator==(const WarpProfile&) const = default;

 private:
  WarpProfile(WarpKind kind, double sigma, double r0) : kind_(kind), sigma_(sigma), r0_(r0) {}
  WarpKind kind_;
  double sigma_;
  double r0_;
};

WarpValues eval_warp(const WarpProfile& profile, double r);

// Simpson quadrature of e^{-phi} over [r0, R], step at most 1e-3.
double area_tail(const WarpProfile& profile, double R);

// sum_{L=L0}^{Lmax} e^{-phi(L)}.
double shell_weight_sum(const WarpProfile& profile, int L0, int Lmax);

}  // namespace cuspwave
