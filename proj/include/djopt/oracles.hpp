#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "djopt/cones.hpp"
#include "djopt/supports.hpp"

namespace djopt {

struct SamplerConfig {
  std::uint64_t seed = 0x5EED;
  double t0 = 1e-1;
  double ratio = 0.5;
  int count = 20;
  int probe_count = 1000;
  double delta = 1e-1;  // directional neighborhood V_{delta,rho}
  double rho = 1e-1;

  void validate() const;
  double t(int k) const;
  int tail_start() const { return count / 2; }
};

// A set given by a residual (0 exactly on the set, a distance-like quantity
// off it) and a local linear maximizer
//   argmax <c, x>  s.t. x in S, |x - center|_inf <= radius
// returning nullopt when the local region is empty.
struct SetOracle {
  Eigen::Index dim = 0;
  std::function<double(const Vec&)> residual;
  std::function<std::optional<Vec>(const Vec& c, const Vec& center, double radius)> local_max;
};

SetOracle polyhedral_oracle(const PolyhedralSet& S, const Tolerance& tol = default_tolerance());

// Gamma = {x : G(x) in D} with residual dist_inf(G(x), D); local maximizer via
// per-piece linearization and Gauss-Newton correction back onto Gamma.
SetOracle gamma_oracle(std::function<Vec(const Vec&)> G, std::function<Mat(const Vec&)> J,
                       const PolyhedralSet& D, Eigen::Index n,
                       const Tolerance& tol = default_tolerance());

// Gauss-Newton projection of x onto {G in D}; nullopt if it fails to converge.
std::optional<Vec> gauss_newton_project(const std::function<Vec(const Vec&)>& G,
                                        const std::function<Mat(const Vec&)>& J,
                                        const PolyhedralSet& D, const Vec& x,
                                        const Tolerance& tol = default_tolerance());

// z + t_k w_k in S with w_k -> w: dist(z + t_k w)/t_k <= C t_k on the tail.
bool tangent_membership_oracle(const SetOracle& S, const Vec& z, const Vec& w,
                               const SamplerConfig& cfg = {});

// z + t_k w + t_k^2/2 s_k in S with s_k -> s.
bool second_order_tangent_oracle(const SetOracle& S, const Vec& z, const Vec& w, const Vec& s,
                                 const SamplerConfig& cfg = {});

struct Band {
  ExtReal lo = ExtReal::minus_inf();
  ExtReal hi = ExtReal::plus_inf();
  ExtReal::Kind classification = ExtReal::Kind::Finite;
  std::vector<double> tail;  // quotient values along the tail

  bool contains(const ExtReal& v, double tol = 1e-6) const;
};

// Grid liminf of -2<zstar, w'>/t over z + t w' in S, |w' - w| <= sqrt(t)/10.
Band d2_indicator_oracle(const SetOracle& S, const Vec& z, const Vec& zstar, const Vec& w,
                         const SamplerConfig& cfg = {});

// Grid oracle for the lower generalized support function: sampled points z of
// S, perturbed normals z~* within eta of zstar with z~* in the regular normal
// cone at z (dual description by active rows), minimizing <z~*, z>; the band
// collects the values over the finest eta levels.
Band lower_support_oracle(const PolyhedralSet& S, const Vec& zstar, const SamplerConfig& cfg = {},
                          const Tolerance& tol = default_tolerance());

struct NormalLimitSample {
  std::vector<Vec> points;         // sampled y = z + t_k w_k in S
  std::vector<ConvexPolyhedron> normals;  // regular normal cones at the points
  std::vector<Vec> candidates;     // their generators (unit max-norm)
};

NormalLimitSample normal_limit_oracle(const PolyhedralSet& S, const Vec& z, const Vec& w,
                                      const SamplerConfig& cfg = {},
                                      const Tolerance& tol = default_tolerance());

struct NormalLimitCheck {
  bool candidates_inside = true;    // every candidate lies in the closed form
  bool generators_reached = true;   // every closed-form generator lies in some sampled normal cone
  std::vector<Vec> outside;
  std::vector<Vec> unreached;
  bool agree() const { return candidates_inside && generators_reached; }
};

NormalLimitCheck check_normal_limit(const NormalLimitSample& sample, const PolyhedralCone& closed_form,
                                    const Tolerance& tol = default_tolerance());

}  // namespace djopt
