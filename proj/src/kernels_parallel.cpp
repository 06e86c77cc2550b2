#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>

#include "fft.hpp"
#include "kernels_common.hpp"
#include "vnm/grid.hpp"
#include "vnm/kernels.hpp"
#include "vnm/probe.hpp"

namespace vnm::kernels::parallel {

using cd = std::complex<double>;

WignerOut wigner(const WignerArgs& args) {
  detail::check_wigner_args(args);
  const auto& rho = *args.rho;
  const auto n = static_cast<std::size_t>(rho.rows());
  const auto np = args.pnodes.size();
  const std::size_t lags = n / 2 + 1;
  const bool damped = !args.a_nodes.empty();

  // e^{-2 i p_j m h / hbar} for m >= 0; negative lags use the conjugate.
  std::vector<cd> phase(np * lags);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(np); ++j)
    for (std::size_t m = 0; m < lags; ++m)
      phase[static_cast<std::size_t>(j) * lags + m] =
          std::polar(1.0, -2.0 * args.pnodes[static_cast<std::size_t>(j)] * static_cast<double>(m) * args.h / args.hbar);

  WignerOut out{RealField(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(np)), 0.0};
  double max_imag = 0.0;
#pragma omp parallel reduction(max : max_imag)
  {
    std::vector<cd> c(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
      const auto mmax = static_cast<std::ptrdiff_t>(detail::max_lag(static_cast<std::size_t>(k), n));
      // c[m + mmax] = 2 D_km rho(k+m, k-m)
      for (std::ptrdiff_t m = -mmax; m <= mmax; ++m) {
        double d = 1.0;
        if (damped) {
          const double da = args.a_nodes[static_cast<std::size_t>(k + m)] - args.a_nodes[static_cast<std::size_t>(k - m)];
          d = std::exp(-args.rate * da * da);
        }
        c[static_cast<std::size_t>(m + mmax)] = 2.0 * d * rho(k + m, k - m);
      }
      for (std::size_t j = 0; j < np; ++j) {
        const cd* tab = phase.data() + j * lags;
        cd sum = 0.0;
        for (std::ptrdiff_t m = -mmax; m <= mmax; ++m) {
          const cd ph = m >= 0 ? tab[m] : std::conj(tab[-m]);
          sum += c[static_cast<std::size_t>(m + mmax)] * ph;
        }
        out.values(k, static_cast<Eigen::Index>(j)) = sum.real();
        max_imag = std::max(max_imag, std::fabs(sum.imag()));
      }
    }
  }
  out.max_imag = max_imag;
  return out;
}

void diffuse_rows(RealField& rows, double spacing, std::span<const double> rate, double tau) {
  detail::check_rates(rows, rate);
  if (tau == 0.0) return;
  const auto n = static_cast<std::size_t>(rows.cols());
  const std::size_t l = detail::pad_length(n);
  const vnm::detail::RealFft fft(l);
  std::vector<double> k2(fft.spectrum_size());
  for (std::size_t m = 0; m < k2.size(); ++m) {
    const double k = detail::wavenumber(m, l, spacing);
    k2[m] = k * k;
  }
#pragma omp parallel
  {
    std::vector<double> buf(l);
    std::vector<cd> spec(fft.spectrum_size());
#pragma omp for schedule(static)
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
      const double rr = rate[static_cast<std::size_t>(r)];
      if (rr == 0.0) continue;
      std::fill(buf.begin(), buf.end(), 0.0);
      for (std::size_t x = 0; x < n; ++x) buf[x] = rows(r, static_cast<Eigen::Index>(x));
      fft.forward(buf.data(), spec.data());
      for (std::size_t m = 0; m < spec.size(); ++m) spec[m] *= std::exp(-tau * rr * k2[m]);
      fft.inverse(spec.data(), buf.data());
      for (std::size_t x = 0; x < n; ++x) rows(r, static_cast<Eigen::Index>(x)) = buf[x] / static_cast<double>(l);
    }
  }
}

std::vector<double> damp_angle_modes(RealField& rows, std::span<const double> rate, double tau, std::size_t cutoff) {
  detail::check_rates(rows, rate);
  const auto n = static_cast<std::size_t>(rows.cols());
  const std::size_t half = n / 2;
  const vnm::detail::RealFft fft(n);
  std::vector<double> dropped(static_cast<std::size_t>(rows.rows()), 0.0);
#pragma omp parallel
  {
    std::vector<double> buf(n);
    std::vector<cd> spec(fft.spectrum_size());
#pragma omp for schedule(static)
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
      for (std::size_t j = 0; j < n; ++j) buf[j] = rows(r, static_cast<Eigen::Index>(j));
      fft.forward(buf.data(), spec.data());
      const double rr = rate[static_cast<std::size_t>(r)];
      double lost = 0.0;
      for (std::size_t m = 0; m <= half; ++m) {
        if (m > cutoff) {
          const double mult = (n % 2 == 0 && m == half) ? 1.0 : 2.0;
          lost += mult * std::abs(spec[m]) / static_cast<double>(n);
          spec[m] = 0.0;
        } else {
          const double md = static_cast<double>(m);
          spec[m] *= std::exp(-md * md * rr * tau);
        }
      }
      fft.inverse(spec.data(), buf.data());
      for (std::size_t j = 0; j < n; ++j) rows(r, static_cast<Eigen::Index>(j)) = buf[j] / static_cast<double>(n);
      dropped[static_cast<std::size_t>(r)] = lost;
    }
  }
  return dropped;
}

std::vector<double> probe_marginal(const RealField& weighted_rho, const RealField& a_values, double eps,
                                   double sigma_Q, std::span<const double> Qnodes) {
  require(weighted_rho.rows() == a_values.rows() && weighted_rho.cols() == a_values.cols(), ErrorCode::ShapeMismatch,
          "probe_marginal: observable samples differ from the density grid");
  std::vector<double> out(Qnodes.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(Qnodes.size()); ++k) {
    const double Q = Qnodes[static_cast<std::size_t>(k)];
    double s = 0.0;
    for (Eigen::Index i = 0; i < weighted_rho.rows(); ++i)
      for (Eigen::Index j = 0; j < weighted_rho.cols(); ++j) {
        const double w = weighted_rho(i, j);
        if (w != 0.0) s += w * gaussian_pdf(Q - eps * a_values(i, j), sigma_Q);
      }
    out[static_cast<std::size_t>(k)] = s;
  }
  return out;
}

RealField tabulate(std::span<const double> xs, std::span<const double> ys,
                   const std::function<double(double, double)>& f) {
  RealField v(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(xs.size()); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j)
      v(i, static_cast<Eigen::Index>(j)) = f(xs[static_cast<std::size_t>(i)], ys[j]);
  return v;
}

void flow_position(std::span<PhasePoint> points, double eps) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(points.size()); ++i) {
    auto& s = points[static_cast<std::size_t>(i)];
    s.p = s.p - eps * s.P;
    s.Q = s.Q + eps * s.q;
  }
}

void flow_action(std::span<ActionPoint> points, double eps, const std::function<double(double)>& a_of_xi,
                 const std::function<double(double)>& da_dxi) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(points.size()); ++i) {
    auto& s = points[static_cast<std::size_t>(i)];
    s.theta = wrap_angle(s.theta - eps * da_dxi(s.xi) * s.Pbar);
    s.Qbar = s.Qbar + eps * a_of_xi(s.xi);
  }
}

}  // namespace vnm::kernels::parallel
