#include "djopt/encodings.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "djopt/error.hpp"

namespace djopt {

namespace {

ConvexPolyhedron piece2(std::vector<std::array<double, 2>> ineq, std::vector<std::array<double, 2>> eq) {
  Mat A(static_cast<Eigen::Index>(ineq.size()), 2), E(static_cast<Eigen::Index>(eq.size()), 2);
  for (std::size_t i = 0; i < ineq.size(); ++i) A.row(static_cast<Eigen::Index>(i)) << ineq[i][0], ineq[i][1];
  for (std::size_t i = 0; i < eq.size(); ++i) E.row(static_cast<Eigen::Index>(i)) << eq[i][0], eq[i][1];
  return ConvexPolyhedron::cone(A, E);
}

PolyhedralSet pair_set(EncodingKind k) {
  switch (k) {
    case EncodingKind::MPCC:
      return PolyhedralSet(2, {piece2({{-1, 0}}, {{0, 1}}), piece2({{0, 1}}, {{1, 0}})});
    case EncodingKind::Switching:
      return PolyhedralSet(2, {piece2({}, {{1, 0}}), piece2({}, {{0, 1}})});
    case EncodingKind::Vanishing:
      return PolyhedralSet(2, {piece2({}, {{1, 0}}), piece2({{-1, 0}, {0, 1}}, {})});
    default:
      fail(ErrorCode::InvalidArgument, "not a pair encoding");
  }
}

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

EncodingKind encoding_kind_from_string(const std::string& s) {
  if (s == "mpcc") return EncodingKind::MPCC;
  if (s == "vanishing") return EncodingKind::Vanishing;
  if (s == "switching") return EncodingKind::Switching;
  if (s == "cardinality") return EncodingKind::Cardinality;
  if (s == "box") return EncodingKind::Box;
  if (s == "union") return EncodingKind::CustomUnion;
  fail(ErrorCode::SchemaError, "unknown set kind '" + s + "'");
}

std::string to_string(EncodingKind k) {
  switch (k) {
    case EncodingKind::MPCC: return "mpcc";
    case EncodingKind::Vanishing: return "vanishing";
    case EncodingKind::Switching: return "switching";
    case EncodingKind::Cardinality: return "cardinality";
    case EncodingKind::Box: return "box";
    case EncodingKind::CustomUnion: return "union";
  }
  return "";
}

PolyhedralSet product(const PolyhedralSet& S1, const PolyhedralSet& S2) {
  if (static_cast<long>(S1.pieces.size()) * static_cast<long>(S2.pieces.size()) > kMaxEncodingPieces)
    fail(ErrorCode::ScaleCapExceeded, "product: more than 64 pieces");
  const Eigen::Index n1 = S1.dim, n2 = S2.dim;
  PolyhedralSet out(n1 + n2);
  for (const auto& P : S1.pieces)
    for (const auto& Q : S2.pieces) {
      Mat A = Mat::Zero(P.num_ineq() + Q.num_ineq(), n1 + n2);
      A.topLeftCorner(P.num_ineq(), n1) = P.A;
      A.bottomRightCorner(Q.num_ineq(), n2) = Q.A;
      Mat E = Mat::Zero(P.num_eq() + Q.num_eq(), n1 + n2);
      E.topLeftCorner(P.num_eq(), n1) = P.E;
      E.bottomRightCorner(Q.num_eq(), n2) = Q.E;
      Vec b(A.rows()), f(E.rows());
      b << P.b, Q.b;
      f << P.f, Q.f;
      ConvexPolyhedron R(A, b, E, f);
      R.dim = n1 + n2;
      out.pieces.push_back(std::move(R));
    }
  return out;
}

long expected_pieces(const EncodingSpec& spec) {
  switch (spec.kind) {
    case EncodingKind::MPCC:
    case EncodingKind::Switching:
    case EncodingKind::Vanishing: return 1L << spec.pairs;
    case EncodingKind::Cardinality: return binomial(spec.n, spec.nonzeros);
    case EncodingKind::Box: return 1;
    case EncodingKind::CustomUnion: return static_cast<long>(spec.custom.pieces.size());
  }
  return 0;
}

PolyhedralSet build(const EncodingSpec& spec) {
  switch (spec.kind) {
    case EncodingKind::MPCC:
    case EncodingKind::Switching:
    case EncodingKind::Vanishing: {
      if (spec.pairs < 1) fail(ErrorCode::InvalidArgument, "pair count must be positive");
      if (spec.pairs > kMaxPairs) fail(ErrorCode::ScaleCapExceeded, "more than 6 pairs");
      const PolyhedralSet one = pair_set(spec.kind);
      PolyhedralSet out = one;
      for (int j = 1; j < spec.pairs; ++j) out = product(out, one);
      return out;
    }
    case EncodingKind::Cardinality: {
      if (spec.n < 1 || spec.nonzeros < 0 || spec.nonzeros > spec.n)
        fail(ErrorCode::InvalidArgument, "cardinality: need 0 <= nonzeros <= n, n >= 1");
      if (expected_pieces(spec) > kMaxEncodingPieces) fail(ErrorCode::ScaleCapExceeded, "cardinality: more than 64 pieces");
      PolyhedralSet out(spec.n);
      // choose the free coordinates; the rest vanish
      std::vector<int> mask(static_cast<std::size_t>(spec.n), 0);
      std::fill(mask.end() - spec.nonzeros, mask.end(), 1);
      do {
        Mat E(spec.n - spec.nonzeros, spec.n);
        E.setZero();
        Eigen::Index r = 0;
        for (int i = 0; i < spec.n; ++i)
          if (!mask[static_cast<std::size_t>(i)]) E(r++, i) = 1.0;
        out.pieces.push_back(ConvexPolyhedron::cone(Mat(0, spec.n), E));
      } while (std::next_permutation(mask.begin(), mask.end()));
      return out;
    }
    case EncodingKind::Box: {
      require_dims(spec.lower.size() == spec.upper.size() && spec.lower.size() > 0, "box: bounds");
      if ((spec.lower.array() > spec.upper.array()).any()) fail(ErrorCode::EmptySet, "box: lower above upper");
      const Eigen::Index n = spec.lower.size();
      Mat A(2 * n, n);
      A << Mat::Identity(n, n), -Mat::Identity(n, n);
      Vec b(2 * n);
      b << spec.upper, -spec.lower;
      ConvexPolyhedron P(A, b, Mat(0, n), Vec(0));
      P.dim = n;
      return PolyhedralSet(P);
    }
    case EncodingKind::CustomUnion:
      spec.custom.validate();
      if (spec.custom.pieces.size() > static_cast<std::size_t>(kMaxEncodingPieces))
        fail(ErrorCode::ScaleCapExceeded, "union: more than 64 pieces");
      return spec.custom;
  }
  fail(ErrorCode::InvalidArgument, "unknown encoding");
}

bool encoding_predicate(const EncodingSpec& spec, const Vec& z, double tol) {
  auto zero = [&](double x) { return std::abs(x) <= tol; };
  switch (spec.kind) {
    case EncodingKind::MPCC:
    case EncodingKind::Switching:
    case EncodingKind::Vanishing: {
      require_dims(z.size() == 2 * spec.pairs, "predicate: dimension");
      for (int j = 0; j < spec.pairs; ++j) {
        const double a = z(2 * j), b = z(2 * j + 1);
        bool ok = false;
        if (spec.kind == EncodingKind::MPCC) ok = a >= -tol && b <= tol && (zero(a) || zero(b));
        if (spec.kind == EncodingKind::Switching) ok = zero(a) || zero(b);
        if (spec.kind == EncodingKind::Vanishing) ok = a >= -tol && (zero(a) || b <= tol);
        if (!ok) return false;
      }
      return true;
    }
    case EncodingKind::Cardinality: {
      int nz = 0;
      for (Eigen::Index i = 0; i < z.size(); ++i) nz += !zero(z(i));
      return nz <= spec.nonzeros;
    }
    case EncodingKind::Box:
      return (z.array() >= spec.lower.array() - tol).all() && (z.array() <= spec.upper.array() + tol).all();
    case EncodingKind::CustomUnion:
      return contains(spec.custom, z);
  }
  return false;
}

}  // namespace djopt
