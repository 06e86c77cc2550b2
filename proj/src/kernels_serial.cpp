#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "kernels_common.hpp"
#include "vnm/grid.hpp"
#include "vnm/kernels.hpp"
#include "vnm/probe.hpp"

namespace vnm::kernels::serial {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

WignerOut wigner(const WignerArgs& args) {
  detail::check_wigner_args(args);
  const auto& rho = *args.rho;
  const auto n = static_cast<std::size_t>(rho.rows());
  const bool damped = !args.a_nodes.empty();
  WignerOut out{RealField(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(args.pnodes.size())), 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    const auto mmax = static_cast<std::ptrdiff_t>(detail::max_lag(k, n));
    const auto kk = static_cast<std::ptrdiff_t>(k);
    for (std::size_t j = 0; j < args.pnodes.size(); ++j) {
      cd sum = 0.0;
      for (std::ptrdiff_t m = -mmax; m <= mmax; ++m) {
        const double phase = -2.0 * args.pnodes[j] * static_cast<double>(m) * args.h / args.hbar;
        double d = 1.0;
        if (damped) {
          const double da = args.a_nodes[static_cast<std::size_t>(kk + m)] - args.a_nodes[static_cast<std::size_t>(kk - m)];
          d = std::exp(-args.rate * da * da);
        }
        sum += 2.0 * d * rho(kk + m, kk - m) * std::polar(1.0, phase);
      }
      out.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = sum.real();
      out.max_imag = std::max(out.max_imag, std::fabs(sum.imag()));
    }
  }
  return out;
}

void diffuse_rows(RealField& rows, double spacing, std::span<const double> rate, double tau) {
  detail::check_rates(rows, rate);
  const auto n = static_cast<std::size_t>(rows.cols());
  const std::size_t l = detail::pad_length(n);
  const std::size_t half = l / 2;
  std::vector<cd> spec(half + 1);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    if (tau == 0.0 || rate[static_cast<std::size_t>(r)] == 0.0) continue;
    for (std::size_t m = 0; m <= half; ++m) {
      cd s = 0.0;
      for (std::size_t x = 0; x < n; ++x)
        s += rows(r, static_cast<Eigen::Index>(x)) *
             std::polar(1.0, -kTwoPi * static_cast<double>((m * x) % l) / static_cast<double>(l));
      const double k = detail::wavenumber(m, l, spacing);
      spec[m] = s * std::exp(-tau * rate[static_cast<std::size_t>(r)] * k * k);
    }
    for (std::size_t x = 0; x < n; ++x) {
      double s = spec[0].real() + spec[half].real() * ((x % 2 == 0) ? 1.0 : -1.0);
      for (std::size_t m = 1; m < half; ++m)
        s += 2.0 * (spec[m] * std::polar(1.0, kTwoPi * static_cast<double>((m * x) % l) / static_cast<double>(l))).real();
      rows(r, static_cast<Eigen::Index>(x)) = s / static_cast<double>(l);
    }
  }
}

std::vector<double> damp_angle_modes(RealField& rows, std::span<const double> rate, double tau, std::size_t cutoff) {
  detail::check_rates(rows, rate);
  const auto n = static_cast<std::size_t>(rows.cols());
  const std::size_t half = n / 2;
  std::vector<double> dropped(static_cast<std::size_t>(rows.rows()), 0.0);
  std::vector<cd> c(half + 1);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (std::size_t m = 0; m <= half; ++m) {
      cd s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        s += rows(r, static_cast<Eigen::Index>(j)) *
             std::polar(1.0, -kTwoPi * static_cast<double>((m * j) % n) / static_cast<double>(n));
      c[m] = s / static_cast<double>(n);
      if (m > cutoff) {
        const double mult = (n % 2 == 0 && m == half) ? 1.0 : 2.0;
        dropped[static_cast<std::size_t>(r)] += mult * std::abs(c[m]);
        c[m] = 0.0;
      } else {
        const double md = static_cast<double>(m);
        c[m] *= std::exp(-md * md * rate[static_cast<std::size_t>(r)] * tau);
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = c[0].real();
      for (std::size_t m = 1; m <= half; ++m) {
        const cd term = c[m] * std::polar(1.0, kTwoPi * static_cast<double>((m * j) % n) / static_cast<double>(n));
        s += (n % 2 == 0 && m == half) ? term.real() : 2.0 * term.real();
      }
      rows(r, static_cast<Eigen::Index>(j)) = s;
    }
  }
  return dropped;
}

std::vector<double> probe_marginal(const RealField& weighted_rho, const RealField& a_values, double eps,
                                   double sigma_Q, std::span<const double> Qnodes) {
  require(weighted_rho.rows() == a_values.rows() && weighted_rho.cols() == a_values.cols(), ErrorCode::ShapeMismatch,
          "probe_marginal: observable samples differ from the density grid");
  std::vector<double> out(Qnodes.size(), 0.0);
  for (std::size_t k = 0; k < Qnodes.size(); ++k) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < weighted_rho.rows(); ++i)
      for (Eigen::Index j = 0; j < weighted_rho.cols(); ++j)
        s += weighted_rho(i, j) * gaussian_pdf(Qnodes[k] - eps * a_values(i, j), sigma_Q);
    out[k] = s;
  }
  return out;
}

RealField tabulate(std::span<const double> xs, std::span<const double> ys,
                   const std::function<double(double, double)>& f) {
  RealField v(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f(xs[i], ys[j]);
  return v;
}

void flow_position(std::span<PhasePoint> points, double eps) {
  for (auto& s : points) {
    s.p = s.p - eps * s.P;
    s.Q = s.Q + eps * s.q;
  }
}

void flow_action(std::span<ActionPoint> points, double eps, const std::function<double(double)>& a_of_xi,
                 const std::function<double(double)>& da_dxi) {
  for (auto& s : points) {
    s.theta = wrap_angle(s.theta - eps * da_dxi(s.xi) * s.Pbar);
    s.Qbar = s.Qbar + eps * a_of_xi(s.xi);
  }
}

}  // namespace vnm::kernels::serial
