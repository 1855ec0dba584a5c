#pragma once

#include "qrc/common.hpp"

#include <array>
#include <optional>
#include <string>

namespace qrc {

struct XorOutcome {
    double p_plus = 0.0;  // P(output spin = +1)
    int decision = -1;    // +1 if p_plus > 0.5
};

// Three spins, J13 = J23 = J, J12 = 0, no detuning, drive (W/2) sx on all.
// Starts in |s1, s2, -1> and returns the output distribution at time t
// (default pi / W, one full flip of a resonant output spin).
XorOutcome xor_demo(double j_over_omega, int s1, int s2, double omega = 1.0, double t = -1.0);

enum class ZErrorSite { none, l1, l2, l3 };

std::string to_string(ZErrorSite s);

struct ZErrorOutcome {
    int a1 = 0;                       // most probable parity outcome of A1 (L1, L2)
    int a2 = 0;                       // most probable parity outcome of A2 (L2, L3)
    double probability = 0.0;         // probability of that outcome
    std::array<double, 4> joint{};    // P(a1, a2) for (+,+), (+,-), (-,+), (-,-)
    ZErrorSite diagnosis = ZErrorSite::none;
};

// Syndrome lookup for the even-parity convention: a_i = +1 when the pair
// agrees.
ZErrorSite diagnose(int a1, int a2);

// Five spins (L1, L2, L3, A1, A2). Prepares a|0_L> + b|1_L> with
// |0_L> = |-_y>^3, |1_L> = |+_y>^3, applies an optional Z error, rotates
// the logical spins by (W/2) sum sx for pi / (2 W), then runs both parity
// checks at once for pi / W with J / W = j_over_omega. Ancillas start in +1.
ZErrorOutcome z_error_demo(std::optional<int> error_site, cplx a = {1.0, 0.0}, cplx b = {0.0, 0.0},
                           double j_over_omega = 100.0, double omega = 1.0);

}  // namespace qrc
