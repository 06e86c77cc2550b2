#pragma once

// Hot grid and sample loops. `parallel` is what the library calls; `serial`
// holds straightforward reference versions (full sums, naive DFTs) that the
// tests compare against and the benchmark times.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vnm/phase_space.hpp"

namespace vnm::kernels {

/// W(x_k, p_j) = sum_m 2 exp(-2 i p_j m h / hbar) D_km rho(k+m, k-m), with the
/// optional damping D_km = exp(-rate (A_{k+m} - A_{k-m})^2).
struct WignerArgs {
  const Eigen::MatrixXcd* rho = nullptr;
  double h = 1.0;
  std::span<const double> pnodes;
  double hbar = 1.0;
  std::span<const double> a_nodes;  // empty: no damping
  double rate = 0.0;                // tau / hbar^2
};

struct WignerOut {
  RealField values;        // rows: x nodes, columns: p nodes
  double max_imag = 0.0;   // largest imaginary residue of the sum
};

struct PhasePoint {
  double q, p, Q, P;
};

struct ActionPoint {
  double xi, theta, Qbar, Pbar;
};

namespace serial {

WignerOut wigner(const WignerArgs& args);

/// Multiplies the zero-padded spectrum of every row by exp(-tau rate_i k^2),
/// i.e. convolves row i with a Gaussian of variance 2 tau rate_i.
void diffuse_rows(RealField& rows, double spacing, std::span<const double> rate, double tau);

/// Periodic rows: damps mode m by exp(-m^2 rate_i tau) and drops |m| > cutoff.
/// Returns per-row sums of |c_m| over the dropped modes (both signs).
std::vector<double> damp_angle_modes(RealField& rows, std::span<const double> rate, double tau,
                                     std::size_t cutoff);

/// rho'(Q) = sum_ij w_ij N(Q - eps A_ij; sigma_Q), where w already carries the
/// quadrature weights.
std::vector<double> probe_marginal(const RealField& weighted_rho, const RealField& a_values,
                                   double eps, double sigma_Q, std::span<const double> Qnodes);

RealField tabulate(std::span<const double> xs, std::span<const double> ys,
                   const std::function<double(double, double)>& f);

void flow_position(std::span<PhasePoint> points, double eps);
void flow_action(std::span<ActionPoint> points, double eps, const std::function<double(double)>& a_of_xi,
                 const std::function<double(double)>& da_dxi);

}  // namespace serial

namespace parallel {

WignerOut wigner(const WignerArgs& args);
void diffuse_rows(RealField& rows, double spacing, std::span<const double> rate, double tau);
std::vector<double> damp_angle_modes(RealField& rows, std::span<const double> rate, double tau,
                                     std::size_t cutoff);
std::vector<double> probe_marginal(const RealField& weighted_rho, const RealField& a_values,
                                   double eps, double sigma_Q, std::span<const double> Qnodes);
RealField tabulate(std::span<const double> xs, std::span<const double> ys,
                   const std::function<double(double, double)>& f);
void flow_position(std::span<PhasePoint> points, double eps);
void flow_action(std::span<ActionPoint> points, double eps, const std::function<double(double)>& a_of_xi,
                 const std::function<double(double)>& da_dxi);

}  // namespace parallel

}  // namespace vnm::kernels
