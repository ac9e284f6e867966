#include "djopt/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "djopt/error.hpp"
#include "djopt/lp.hpp"

namespace djopt {

namespace {

// Quotients with t^2 in the denominator lose precision below this scale.
constexpr double kSecondOrderTFloor = 1e-5;
// Sampled points closer than this to the base point are not resolvable.
constexpr double kNormalSampleFloor = 1e-9;

LpProblem box_lp(const Vec& c, const Vec& center, double radius) {
  const Eigen::Index n = center.size();
  LpProblem lp = LpProblem::feasibility(n);
  lp.c = c;
  lp.A_ineq = Mat(2 * n, n);
  lp.A_ineq << Mat::Identity(n, n), -Mat::Identity(n, n);
  lp.b_ineq = Vec(2 * n);
  lp.b_ineq << center.array() + radius, -(center.array() - radius);
  return lp;
}

}  // namespace

void SamplerConfig::validate() const {
  if (!(ratio > 0 && ratio < 1)) fail(ErrorCode::InvalidArgument, "sampler ratio must lie in (0,1)");
  if (!(t0 > 0) || count < 2) fail(ErrorCode::InvalidArgument, "sampler t0 > 0 and count >= 2 required");
  if (!(delta > 0 && rho > 0)) fail(ErrorCode::InvalidArgument, "sampler delta, rho must be positive");
}

double SamplerConfig::t(int k) const { return t0 * std::pow(ratio, k); }

SetOracle polyhedral_oracle(const PolyhedralSet& S, const Tolerance& tol) {
  SetOracle o;
  o.dim = S.dim;
  o.residual = [S, tol](const Vec& x) { return distance_inf(S, x, tol).value; };
  o.local_max = [S, tol](const Vec& c, const Vec& center, double radius) -> std::optional<Vec> {
    std::optional<Vec> best;
    double bv = 0;
    for (const auto& P : S.pieces) {
      LpProblem lp = box_lp(c, center, radius);
      lp.A_ineq = linalg::vstack(lp.A_ineq, P.A);
      Vec b(lp.b_ineq.size() + P.b.size());
      b << lp.b_ineq, P.b;
      lp.b_ineq = b;
      lp.A_eq = P.E;
      lp.b_eq = P.f;
      const LpOutcome out = solve_lp(lp, tol);
      if (!out.optimal()) continue;
      if (!best || out.value > bv) best = out.x, bv = out.value;
    }
    return best;
  };
  return o;
}

namespace {

std::optional<Vec> gn_piece(const std::function<Vec(const Vec&)>& G, const std::function<Mat(const Vec&)>& J,
                            const ConvexPolyhedron& P, Vec y, const Tolerance& tol) {
  const Eigen::Index n = y.size();
  for (int it = 0; it < 40; ++it) {
    const Vec g = G(y);
    const double res = distance_inf(P, g, tol).value;
    if (res <= 1e-13 * point_scale(g)) return y;
    const Mat Jy = J(y);
    // min tau s.t. |x - y| <= tau, A(g + Jy (x - y)) <= b, E(...) = f.
    LpProblem lp = LpProblem::feasibility(n + 1);
    lp.sense = Sense::Min;
    lp.c(n) = 1.0;
    Mat A(2 * n + P.num_ineq(), n + 1);
    Vec b(2 * n + P.num_ineq());
    A.setZero();
    A.topLeftCorner(n, n) = Mat::Identity(n, n);
    A.block(n, 0, n, n) = -Mat::Identity(n, n);
    A.block(0, n, 2 * n, 1).setConstant(-1.0);
    b.head(n) = y;
    b.segment(n, n) = -y;
    if (P.num_ineq()) {
      A.bottomLeftCorner(P.num_ineq(), n) = P.A * Jy;
      b.tail(P.num_ineq()) = P.b - P.A * g + P.A * Jy * y;
    }
    lp.A_ineq = A;
    lp.b_ineq = b;
    lp.A_eq = Mat::Zero(P.num_eq(), n + 1);
    if (P.num_eq()) lp.A_eq.leftCols(n) = P.E * Jy;
    lp.b_eq = P.f - P.E * g + P.E * Jy * y;
    if (!P.num_eq()) lp.b_eq = Vec(0);
    const LpOutcome out = solve_lp(lp, tol);
    if (!out.optimal()) return std::nullopt;
    y = out.x.head(n);
  }
  const double res = distance_inf(P, G(y), tol).value;
  if (res <= 1e-11 * point_scale(y)) return y;
  return std::nullopt;
}

}  // namespace

std::optional<Vec> gauss_newton_project(const std::function<Vec(const Vec&)>& G,
                                        const std::function<Mat(const Vec&)>& J, const PolyhedralSet& D,
                                        const Vec& x, const Tolerance& tol) {
  std::optional<Vec> best;
  double bd = 0;
  for (const auto& P : D.pieces) {
    auto y = gn_piece(G, J, P, x, tol);
    if (!y) continue;
    const double d = linalg::inf_norm(*y - x);
    if (!best || d < bd) best = y, bd = d;
  }
  return best;
}

SetOracle gamma_oracle(std::function<Vec(const Vec&)> G, std::function<Mat(const Vec&)> J,
                       const PolyhedralSet& D, Eigen::Index n, const Tolerance& tol) {
  SetOracle o;
  o.dim = n;
  o.residual = [G, D, tol](const Vec& x) { return distance_inf(D, G(x), tol).value; };
  o.local_max = [G, J, D, tol](const Vec& c, const Vec& center, double radius) -> std::optional<Vec> {
    const Vec g = G(center);
    const Mat Jc = J(center);
    std::optional<Vec> best;
    double bv = 0;
    for (const auto& P : D.pieces) {
      LpProblem lp = box_lp(c, center, radius);
      if (P.num_ineq()) {
        lp.A_ineq = linalg::vstack(lp.A_ineq, Mat(P.A * Jc));
        Vec b(lp.b_ineq.size() + P.num_ineq());
        b << lp.b_ineq, P.b - P.A * g + P.A * Jc * center;
        lp.b_ineq = b;
      }
      if (P.num_eq()) {
        lp.A_eq = P.E * Jc;
        lp.b_eq = P.f - P.E * g + P.E * Jc * center;
      }
      const LpOutcome out = solve_lp(lp, tol);
      if (!out.optimal()) continue;
      auto y = gn_piece(G, J, P, out.x, tol);
      if (!y) continue;
      // Accept corrections of second order in the radius.
      if (linalg::inf_norm(*y - center) > radius * 1.5 + 1e-12) continue;
      const double v = c.dot(*y);
      if (!best || v > bv) best = y, bv = v;
    }
    return best;
  };
  return o;
}

bool tangent_membership_oracle(const SetOracle& S, const Vec& z, const Vec& w, const SamplerConfig& cfg) {
  cfg.validate();
  require_dims(z.size() == S.dim && w.size() == S.dim, "tangent oracle dimensions");
  const double C = 100.0 * std::pow(1.0 + linalg::inf_norm(w), 2);
  for (int k = cfg.tail_start(); k < cfg.count; ++k) {
    const double t = cfg.t(k);
    const double d = S.residual(Vec(z + t * w));
    if (!(d / t <= C * t + 1e-12)) return false;
  }
  return true;
}

bool second_order_tangent_oracle(const SetOracle& S, const Vec& z, const Vec& w, const Vec& s,
                                 const SamplerConfig& cfg) {
  cfg.validate();
  require_dims(z.size() == S.dim && w.size() == S.dim && s.size() == S.dim, "second-order oracle dimensions");
  const double C = 100.0 * std::pow(1.0 + linalg::inf_norm(w) + linalg::inf_norm(s), 2);
  int used = 0;
  for (int k = cfg.tail_start(); k < cfg.count; ++k) {
    const double t = cfg.t(k);
    if (t < kSecondOrderTFloor && used > 0) break;
    const double d = S.residual(Vec(z + t * w + 0.5 * t * t * s));
    if (!(2.0 * d / (t * t) <= C * t + 1e-12)) return false;
    ++used;
  }
  return true;
}

bool Band::contains(const ExtReal& v, double tol) const {
  if (classification != ExtReal::Kind::Finite) return v.kind() == classification;
  if (!v.is_finite()) return false;
  return lo.as_double() - tol <= v.value() && v.value() <= hi.as_double() + tol;
}

Band d2_indicator_oracle(const SetOracle& S, const Vec& z, const Vec& zstar, const Vec& w,
                         const SamplerConfig& cfg) {
  cfg.validate();
  require_dims(z.size() == S.dim && w.size() == S.dim && zstar.size() == S.dim, "d2 oracle dimensions");
  Band band;
  std::vector<double> q, qt;
  bool infeasible_tail = false;
  for (int k = cfg.tail_start(); k < cfg.count; ++k) {
    const double t = cfg.t(k);
    if (t < kSecondOrderTFloor && !band.tail.empty()) break;
    const double r = std::sqrt(t) / 10.0;
    const auto x = S.local_max(zstar, Vec(z + t * w), t * r);
    if (!x) {
      infeasible_tail = true;
      band.tail.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    infeasible_tail = false;
    const double v = -2.0 * zstar.dot(*x - z) / (t * t);
    band.tail.push_back(v);
    q.push_back(v * std::sqrt(t));
    qt.push_back(t);
  }
  if (infeasible_tail || q.empty()) {
    band.classification = ExtReal::Kind::PlusInf;
    band.lo = band.hi = ExtReal::plus_inf();
    return band;
  }
  // Divergent quotients grow at least like t^(-1/2) along the tail; finite
  // ones settle, however large.
  const double qlast = q.back();
  const double thr = 1e-3 * (1.0 + linalg::inf_norm(zstar));
  const double tail_ratio = std::sqrt(qt.front() / qt.back());
  const double first = q.front() / std::sqrt(qt.front());
  const double last = q.back() / std::sqrt(qt.back());
  const bool growing = q.size() >= 2 && std::abs(last) >= 0.6 * tail_ratio * std::abs(first);
  if (!growing) {
    // finite
  } else if (qlast < -thr) {
    band.classification = ExtReal::Kind::MinusInf;
    band.lo = band.hi = ExtReal::minus_inf();
  } else if (qlast > thr) {
    band.classification = ExtReal::Kind::PlusInf;
    band.lo = band.hi = ExtReal::plus_inf();
  }
  if (band.classification == ExtReal::Kind::Finite) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : band.tail) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    // Remainder of a sequence converging like sqrt(t): geometric with rate sqrt(ratio).
    const double rate = std::sqrt(cfg.ratio);
    const double step = q.size() >= 2 ? std::abs(last - q[q.size() - 2] / std::sqrt(qt[qt.size() - 2])) : 0.0;
    const double rem = 1.5 * step * rate / (1.0 - rate);
    band.lo = lo - rem;
    band.hi = hi + rem;
  }
  return band;
}

namespace {

std::string active_key(const PolyhedralSet& S, const Vec& y, const Tolerance& tol) {
  std::ostringstream key;
  for (const auto& P : S.pieces) {
    if (!contains(P, y, tol)) {
      key << "x|";
      continue;
    }
    for (Eigen::Index i : active_rows(P, y, tol)) key << i << ',';
    key << '|';
  }
  return key.str();
}

}  // namespace

Band lower_support_oracle(const PolyhedralSet& S, const Vec& zstar, const SamplerConfig& cfg,
                          const Tolerance& tol) {
  cfg.validate();
  require_dims(zstar.size() == S.dim, "lower support oracle dimension");
  const Eigen::Index n = S.dim;
  Band band;
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < S.pieces.size(); ++i)
    if (is_nonempty(S.pieces[i], tol)) live.push_back(i);
  if (live.empty()) {
    band.classification = ExtReal::Kind::MinusInf;
    band.lo = band.hi = ExtReal::minus_inf();
    return band;
  }

  // Sample points of S: max-norm projections of random box points and
  // maximizers of random linear functions, both landing on faces.
  double R = 2.0;
  for (const auto& P : S.pieces) R = std::max({R, 2.0 + linalg::inf_norm(P.b), 2.0 + linalg::inf_norm(P.f)});
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::map<std::string, Vec> samples;
  for (int s = 0; s < cfg.probe_count; ++s) {
    const auto& P = S.pieces[live[static_cast<std::size_t>(s) % live.size()]];
    Vec x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = R * unif(rng);
    Vec y;
    if (s % 4 == 3) {
      LpProblem lp = box_lp(x, Vec::Zero(n), R);
      lp.A_ineq = linalg::vstack(lp.A_ineq, P.A);
      Vec b(lp.b_ineq.size() + P.b.size());
      b << lp.b_ineq, P.b;
      lp.b_ineq = b;
      lp.A_eq = P.E;
      lp.b_eq = P.f;
      const LpOutcome o = solve_lp(lp, tol);
      if (!o.optimal()) continue;
      y = o.x;
    } else {
      const DistanceResult d = distance_inf(P, x, tol);
      if (d.empty()) continue;
      y = d.nearest;
    }
    samples.emplace(active_key(S, y, tol), y);
  }

  // Admissible perturbations: z~ = A_act^T lam + E^T mu for every piece containing y.
  auto level_value = [&](const Vec& y, double eta) -> std::optional<double> {
    std::vector<std::pair<const ConvexPolyhedron*, std::vector<Eigen::Index>>> at;
    Eigen::Index nv = n;
    for (const auto& P : S.pieces) {
      if (!contains(P, y, tol)) continue;
      auto act = active_rows(P, y, tol);
      nv += static_cast<Eigen::Index>(act.size()) + P.num_eq();
      at.emplace_back(&P, std::move(act));
    }
    LpProblem lp = LpProblem::feasibility(nv);
    lp.sense = Sense::Min;
    lp.c.head(n) = y;
    lp.A_eq = Mat::Zero(n * static_cast<Eigen::Index>(at.size()), nv);
    lp.b_eq = Vec::Zero(lp.A_eq.rows());
    std::vector<Eigen::Index> nonneg;
    Eigen::Index col = n;
    for (std::size_t k = 0; k < at.size(); ++k) {
      const auto& [P, act] = at[k];
      const Eigen::Index r0 = n * static_cast<Eigen::Index>(k);
      lp.A_eq.block(r0, 0, n, n) = Mat::Identity(n, n);
      for (Eigen::Index i : act) {
        lp.A_eq.block(r0, col, n, 1) = -P->A.row(i).transpose();
        nonneg.push_back(col++);
      }
      for (Eigen::Index i = 0; i < P->num_eq(); ++i) lp.A_eq.block(r0, col++, n, 1) = -P->E.row(i).transpose();
    }
    lp.A_ineq = Mat::Zero(2 * n + static_cast<Eigen::Index>(nonneg.size()), nv);
    lp.b_ineq = Vec::Zero(lp.A_ineq.rows());
    lp.A_ineq.block(0, 0, n, n) = Mat::Identity(n, n);
    lp.A_ineq.block(n, 0, n, n) = -Mat::Identity(n, n);
    lp.b_ineq.head(n) = zstar.array() + eta;
    lp.b_ineq.segment(n, n) = -(zstar.array() - eta);
    for (std::size_t k = 0; k < nonneg.size(); ++k) lp.A_ineq(2 * n + static_cast<Eigen::Index>(k), nonneg[k]) = -1.0;
    const LpOutcome o = solve_lp(lp, tol);
    if (!o.optimal()) return std::nullopt;
    return o.value;
  };

  std::vector<double> levels;
  for (int k = 0; k < 8; ++k) {
    const double eta = 1e-1 * std::pow(0.1, k);
    std::optional<double> best;
    for (const auto& [key, y] : samples) {
      const auto v = level_value(y, eta);
      if (v && (!best || *v < *best)) best = v;
    }
    levels.push_back(best ? *best : std::numeric_limits<double>::infinity());
  }
  band.tail = levels;
  const std::vector<double> fine(levels.end() - 3, levels.end());
  if (std::isinf(fine.back())) {
    band.classification = ExtReal::Kind::PlusInf;
    band.lo = band.hi = ExtReal::plus_inf();
    return band;
  }
  band.lo = *std::min_element(fine.begin(), fine.end());
  band.hi = *std::max_element(fine.begin(), fine.end());
  return band;
}

NormalLimitSample normal_limit_oracle(const PolyhedralSet& S, const Vec& z, const Vec& w,
                                      const SamplerConfig& cfg, const Tolerance& tol) {
  cfg.validate();
  require_dims(z.size() == S.dim && w.size() == S.dim, "normal oracle dimensions");
  const Eigen::Index n = S.dim;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  NormalLimitSample out;
  std::map<std::string, std::size_t> seen;
  const int tail = cfg.count - cfg.tail_start();
  const int per_t = std::max(1, cfg.probe_count / tail);

  auto record = [&](const Vec& y) {
    // Active structure is resolved relative to the offset from z, which is
    // far below the absolute feasibility tolerance on the tail.
    const double off = linalg::inf_norm(Vec(y - z));
    if (off > 0 && off < kNormalSampleFloor) return;
    Tolerance loc = tol;
    if (off > 0) loc.eps_feas = std::min(tol.eps_feas, 1e-4 * off);
    // Regular normal cones depend only on the active structure at y.
    const std::string key = active_key(S, y, loc);
    if (seen.count(key)) return;
    seen[key] = out.points.size();
    out.points.push_back(y);
    out.normals.push_back(regular_normal_cone(S, y, loc));
    const GeneratorRep g = generators(out.normals.back(), tol);
    for (const Vec& r : g.rays) out.candidates.push_back(r);
    for (const Vec& l : g.lines) {
      out.candidates.push_back(l);
      out.candidates.push_back(-l);
    }
    // Interior points too: a union can contain every generator of a cone
    // without containing the cone.
    if (g.rays.size() + 2 * g.lines.size() > 1) {
      std::uniform_real_distribution<double> pos(0.1, 1.0);
      for (int j = 0; j < 4; ++j) {
        Vec v = Vec::Zero(n);
        for (const Vec& r : g.rays) v += (j == 0 ? 1.0 : pos(rng)) * r;
        for (const Vec& l : g.lines) v += (j == 0 ? 0.0 : unif(rng)) * l;
        if (!v.isZero(tol.eps_zero)) out.candidates.push_back(linalg::normalized_inf(v));
      }
    }
  };

  for (int k = cfg.tail_start(); k < cfg.count; ++k) {
    const double t = cfg.t(k);
    const double rho = std::min(cfg.rho, std::sqrt(t) / 10.0);
    const Vec base = z + t * w;
    if (contains(S, base, tol)) record(base);
    for (int j = 0; j < per_t; ++j) {
      Vec q(n);
      for (Eigen::Index i = 0; i < n; ++i) q(i) = unif(rng);
      // Mix of scales so that low-dimensional cells are hit.
      const double scale = j % 3 == 0 ? 1.0 : (j % 3 == 1 ? 0.1 : 0.01);
      const Vec x = base + t * rho * scale * q;
      const DistanceResult d = distance_inf(S, x, tol);
      if (d.empty()) continue;
      const Vec& y = d.nearest;
      if (linalg::inf_norm(Vec((y - z) / t - w)) > 2.0 * rho) continue;
      if (linalg::inf_norm(Vec(y - z)) > cfg.delta) continue;
      record(y);
    }
  }
  return out;
}

NormalLimitCheck check_normal_limit(const NormalLimitSample& sample, const PolyhedralCone& closed_form,
                                    const Tolerance& tol) {
  NormalLimitCheck c;
  for (const Vec& v : sample.candidates) {
    if (!cone_contains(closed_form, v, tol)) {
      c.candidates_inside = false;
      c.outside.push_back(v);
    }
  }
  auto reached = [&](const Vec& g) {
    for (const auto& N : sample.normals)
      if (cone_contains(N, g, tol)) return true;
    return false;
  };
  for (const auto& P : closed_form.pieces) {
    const GeneratorRep g = generators(P, tol);
    std::vector<Vec> gens = g.rays;
    for (const Vec& l : g.lines) {
      gens.push_back(l);
      gens.push_back(-l);
    }
    for (const Vec& v : gens) {
      if (!reached(v)) {
        c.generators_reached = false;
        c.unreached.push_back(v);
      }
    }
  }
  return c;
}

}  // namespace djopt
