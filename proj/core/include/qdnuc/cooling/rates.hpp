#pragma once

namespace qdnuc::cooling {

// Saturated linewidth of the pumped transition, bounded by gamma0/4.
double effective_linewidth(double pump_rabi, double gamma0);

// Inverse of effective_linewidth. Throws DomainError for gamma_eff >= gamma0/4.
double pump_rabi_for_linewidth(double gamma_eff, double gamma0);

// Electron coherence decay rate entering the Raman lineshape. The T2 term
// is converted with 2*pi (this convention is pinned by the regression test).
double dephasing_rate(double gamma_eff, double t2_us, double pump_rabi, double gamma0,
                      double delta_omega_n);

// Two-level stimulated Raman rate, W = (G/2) s / (1 + s + (d/G2)^2),
// s = rabi^2 / (G G2). The rabi argument is the two-level Rabi frequency.
double raman_rate(double detuning, double rabi, double gamma_eff, double gamma2);

}  // namespace qdnuc::cooling
