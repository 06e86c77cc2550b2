#include "vnm/cm/liouville.hpp"

#include <algorithm>
#include <cmath>

#include "vnm/error.hpp"

namespace vnm::cm {

namespace {

void require_shape(const RealField& f, const Grid1D& qg, const Grid1D& pg) {
  require(static_cast<std::size_t>(f.rows()) == qg.size() && static_cast<std::size_t>(f.cols()) == pg.size(),
          ErrorCode::ShapeMismatch, "field does not match the (q, p) grid");
}

// f with one ring of zero ghost nodes.
RealField padded(const RealField& f) {
  RealField g = RealField::Zero(f.rows() + 2, f.cols() + 2);
  g.block(1, 1, f.rows(), f.cols()) = f;
  return g;
}

}  // namespace

LiouvilleGenerator::LiouvilleGenerator(ClassicalObservable obs)
    : obs_(std::move(obs)),
      mode_(obs_.kind() == ObservableKind::General ? GeneratorMode::FiniteDifference : GeneratorMode::FlowShift) {}

RealField LiouvilleGenerator::apply(const RealField& f, const Grid1D& qgrid, const Grid1D& pgrid) const {
  require_shape(f, qgrid, pgrid);
  const auto nq = static_cast<Eigen::Index>(qgrid.size());
  const auto np = static_cast<Eigen::Index>(pgrid.size());
  const double hq = qgrid.spacing(), hp = pgrid.spacing();
  RealField a(nq + 2, np + 2);
  for (Eigen::Index i = 0; i < nq + 2; ++i)
    for (Eigen::Index j = 0; j < np + 2; ++j)
      a(i, j) = obs_(qgrid.lo() + hq * static_cast<double>(i - 1), pgrid.lo() + hp * static_cast<double>(j - 1));
  const RealField b = padded(f);
  RealField out(nq, np);
  const double c = 1.0 / (12.0 * hq * hp);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 1; i <= nq; ++i) {
    for (Eigen::Index j = 1; j <= np; ++j) {
      const double jpp = (a(i + 1, j) - a(i - 1, j)) * (b(i, j + 1) - b(i, j - 1)) -
                         (a(i, j + 1) - a(i, j - 1)) * (b(i + 1, j) - b(i - 1, j));
      const double jpx = a(i + 1, j) * (b(i + 1, j + 1) - b(i + 1, j - 1)) -
                         a(i - 1, j) * (b(i - 1, j + 1) - b(i - 1, j - 1)) -
                         a(i, j + 1) * (b(i + 1, j + 1) - b(i - 1, j + 1)) +
                         a(i, j - 1) * (b(i + 1, j - 1) - b(i - 1, j - 1));
      const double jxp = b(i, j + 1) * (a(i + 1, j + 1) - a(i - 1, j + 1)) -
                         b(i, j - 1) * (a(i + 1, j - 1) - a(i - 1, j - 1)) -
                         b(i + 1, j) * (a(i + 1, j + 1) - a(i + 1, j - 1)) +
                         b(i - 1, j) * (a(i - 1, j + 1) - a(i - 1, j - 1));
      out(i - 1, j - 1) = c * (jpp + jpx + jxp);
    }
  }
  return out;
}

RealField LiouvilleGenerator::apply_squared(const RealField& f, const Grid1D& qgrid, const Grid1D& pgrid) const {
  require_shape(f, qgrid, pgrid);
  const auto nq = static_cast<Eigen::Index>(qgrid.size());
  const auto np = static_cast<Eigen::Index>(pgrid.size());
  const double hq = qgrid.spacing(), hp = pgrid.spacing();
  const RealField b = padded(f);
  auto q_at = [&](double i) { return qgrid.lo() + hq * i; };
  auto p_at = [&](double j) { return pgrid.lo() + hp * j; };
  RealField out(nq, np);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < nq; ++i) {
    const double di = static_cast<double>(i);
    for (Eigen::Index j = 0; j < np; ++j) {
      const double dj = static_cast<double>(j);
      const Eigen::Index bi = i + 1, bj = j + 1;
      const double f0 = b(bi, bj);
      // d/dq (A_p^2 df/dq) and d/dp (A_q^2 df/dp) on half-node fluxes.
      const double ap_e = obs_.dA_dp(q_at(di + 0.5), p_at(dj));
      const double ap_w = obs_.dA_dp(q_at(di - 0.5), p_at(dj));
      const double aq_n = obs_.dA_dq(q_at(di), p_at(dj + 0.5));
      const double aq_s = obs_.dA_dq(q_at(di), p_at(dj - 0.5));
      double s = (ap_e * ap_e * (b(bi + 1, bj) - f0) - ap_w * ap_w * (f0 - b(bi - 1, bj))) / (hq * hq);
      s += (aq_n * aq_n * (b(bi, bj + 1) - f0) - aq_s * aq_s * (f0 - b(bi, bj - 1))) / (hp * hp);
      // Cross terms with D_qp = -A_p A_q.
      auto dqp = [&](Eigen::Index ii, Eigen::Index jj) {
        const double q = q_at(static_cast<double>(ii)), p = p_at(static_cast<double>(jj));
        return -obs_.dA_dp(q, p) * obs_.dA_dq(q, p);
      };
      const double cross_q = dqp(i + 1, j) * (b(bi + 1, bj + 1) - b(bi + 1, bj - 1)) -
                             dqp(i - 1, j) * (b(bi - 1, bj + 1) - b(bi - 1, bj - 1));
      const double cross_p = dqp(i, j + 1) * (b(bi + 1, bj + 1) - b(bi - 1, bj + 1)) -
                             dqp(i, j - 1) * (b(bi + 1, bj - 1) - b(bi - 1, bj - 1));
      s += (cross_q + cross_p) / (4.0 * hq * hp);
      out(i, j) = s;
    }
  }
  return out;
}

double LiouvilleGenerator::stable_step(const Grid1D& qgrid, const Grid1D& pgrid) const {
  double vmax = 0.0;
  for (std::size_t i = 0; i < qgrid.size(); ++i)
    for (std::size_t j = 0; j < pgrid.size(); ++j) {
      const double aq = obs_.dA_dq(qgrid.node(i), pgrid.node(j));
      const double ap = obs_.dA_dp(qgrid.node(i), pgrid.node(j));
      vmax = std::max(vmax, aq * aq + ap * ap);
    }
  const double h = std::min(qgrid.spacing(), pgrid.spacing());
  return vmax > 0.0 ? h * h / (4.0 * vmax) : std::numeric_limits<double>::infinity();
}

std::pair<double, double> LiouvilleGenerator::flow(double q, double p, double s, double max_step) const {
  switch (obs_.kind()) {
    case ObservableKind::Position:
      return {q, p + s};
    case ObservableKind::ActionFunction: {
      const double c = obs_.units().scale_C;
      const double qb = c * q, pb = p / c;
      const double phi = obs_.dA_dxi(0.5 * (qb * qb + pb * pb)) * s;
      const double cs = std::cos(phi), sn = std::sin(phi);
      return {(qb * cs - pb * sn) / c, (qb * sn + pb * cs) * c};
    }
    case ObservableKind::General:
      break;
  }
  require(max_step > 0.0, ErrorCode::InvalidArgument, "flow step must be positive");
  // Characteristics of A_op: dq/ds = -dA/dp, dp/ds = dA/dq.
  const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::fabs(s) / max_step)));
  const double h = s / static_cast<double>(steps);
  auto rhs = [&](double x, double y) { return std::pair{-obs_.dA_dp(x, y), obs_.dA_dq(x, y)}; };
  for (std::size_t k = 0; k < steps; ++k) {
    const auto [k1q, k1p] = rhs(q, p);
    const auto [k2q, k2p] = rhs(q + 0.5 * h * k1q, p + 0.5 * h * k1p);
    const auto [k3q, k3p] = rhs(q + 0.5 * h * k2q, p + 0.5 * h * k2p);
    const auto [k4q, k4p] = rhs(q + h * k3q, p + h * k3p);
    q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  }
  return {q, p};
}

RealField cm_diffusion_rhs(const PhaseSpaceDensity& rho, const ClassicalObservable& obs) {
  return LiouvilleGenerator(obs).apply_squared(rho.values(), rho.qgrid(), rho.pgrid());
}

}  // namespace vnm::cm
