#pragma once

namespace credinfo {

// Closed-form first-passage kernels for D_s = nu s + sigma W_s started at 0,
// with the barrier at -y (y = ln(X_t / l) is the log-distance to the level).

double norm_pdf(double x);
double norm_cdf(double x);
/// log Phi(x), accurate in the far left tail.
double log_norm_cdf(double x);

/// P(min_{s <= h} D_s > -y): conditional probability of no passage below l over
/// (t, t+h] given F_t on {X_t* > l}.
///
///   1 - [ Phi((-y - nu h)/(sigma sqrt h)) + exp(-2 nu y / sigma^2) Phi((-y + nu h)/(sigma sqrt h)) ]
///
/// y = 0 means the process sits on the barrier: the value is 0 for h > 0.
/// Throws std::invalid_argument for y < 0, h < 0 or sigma <= 0.
double survival_prob(double y, double nu, double sigma, double h);

/// First-passage density of D to -y at time s (per year):
/// y / (sigma sqrt(2 pi s^3)) exp(-(y + nu s)^2 / (2 sigma^2 s)).  Requires y > 0, s > 0.
double hitting_time_density(double y, double nu, double sigma, double s);

/// Density of D_h at z restricted to {min_{s <= h} D_s > -y}; zero for z <= -y.
/// Integrates over z to survival_prob(y, nu, sigma, h).  Requires y > 0, h > 0.
double joint_density_terminal_min(double z, double y, double nu, double sigma, double h);

}  // namespace credinfo
