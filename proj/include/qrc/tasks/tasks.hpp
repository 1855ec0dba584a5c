#pragma once

#include "qrc/common.hpp"
#include "qrc/rydberg/hamiltonian.hpp"
#include "qrc/scars/kicked.hpp"
#include "qrc/tasks/result.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qrc {

inline constexpr double kTaskOmega = kTwoPi * 4.2;  // rad/us
// Lindblad step for task workloads. Feature error at this step is ~1e-6
// over 3 us, far below the input noise.
inline constexpr double kTaskStep = 0.02;

std::vector<double> linspace_step(double start, double stop, double step);

// Shared by every driver.
struct TaskCommon {
    std::uint64_t seed = 0;
    double omega = kTaskOmega;
    DissipationSpec dissipation{};
    double dt = kTaskStep;
    int threads = 1;
    double train_fraction = 0.7;
    double sigma_in = 0.1;       // input noise, pre-2pi units, and time jitter in us
    double jitter_sigma = 0.05;  // atom position noise, um
    int realizations = 10;       // geometry realizations, samples assigned round-robin

    void validate() const;
};

// Truncated normal draw (negative draws are redrawn) for durations.
double draw_duration(double mean, double sd, Rng& rng);

// --- multitask ---------------------------------------------------------------

struct MultitaskConfig : TaskCommon {
    int n_atoms = 8;
    int n_inhibitory = 2;
    int n_samples = 500;
    std::vector<double> mean_dt_grid = linspace_step(0.0, 5.0, 0.25);

    void validate() const;
};

// Chain sites of the inhibitory (73S) atoms: round(i (N-1) / (k-1)), k = 1
// at site 0. Throws for k > N/2 or colliding sites.
std::vector<int> inhibitory_sites(int n_atoms, int n_inhibitory);
// Nearest-neighbour strength (rad/us) giving V / d_max^6 = 0.01 MHz.
double multitask_interaction(int n_atoms, int n_inhibitory);

// Inputs x, y in {0, 1} on atoms 0 and 1 as detunings 2 pi (x + noise),
// output atom N - 1, readout (x, y, z, 1) fit jointly to XOR, OR, AND.
// Reports the loss per <dt> grid point and the minimum.
TaskResult run_multitask(const MultitaskConfig& cfg);

// --- decision / working memory ----------------------------------------------

// 3 x 2 lattice, inputs on atoms 0 and 1, outputs on atoms 4 and 5.
struct LatticeTaskConfig : TaskCommon {
    double v = kTwoPi * 10.0;
    std::vector<double> input_values{0.0, kPi / 2, kPi, 3 * kPi / 2, 2 * kPi};  // MHz

    void validate() const;
};

struct DecisionConfig : LatticeTaskConfig {
    int n_samples = 4000;
    double mean_dt = 0.1;
    double t_out_max = 3.0;
    double t_out_scan_step = 0.05;
};

// Fixed-duration protocol: stimuli for dt ~ N(mean_dt, sigma_in^2), relax
// t_out, read (<sy_4>, <sy_5>, 1). t_out and W are trained together by a
// scan plus Nelder-Mead over t_out with W solved by least squares inside.
TaskResult run_decision(const DecisionConfig& cfg);

struct WorkingMemoryConfig : LatticeTaskConfig {
    double v_disordered = kTwoPi * 0.1;
    int samples_per_point = 150;
    // Panels: accuracy and loss vs dt (with entropy) at t_delay = 0.1 for each
    // t_out, and accuracy vs t_delay at dt = 0.15, t_out = 0.5 for both V.
    bool sweep_dt = true;
    bool sweep_delay = true;
    std::vector<double> dt_grid = linspace_step(0.05, 0.5, 0.05);
    std::vector<double> t_out_grid{0.1, 0.3, 0.5, 1.0};
    double sweep_dt_delay = 0.1;
    double loss_t_out = 0.1;
    std::vector<double> delay_grid = linspace_step(0.0, 2.0, 0.25);
    double delay_dt = 0.15;
    double delay_t_out = 0.5;
    double significance = 0.01;
};

TaskResult run_working_memory(const WorkingMemoryConfig& cfg);

// --- long-term memory --------------------------------------------------------

struct LongtermConfig {
    std::uint64_t seed = 0;
    int threads = 1;
    int n_sites = 8;
    double tau = kScarTau;
    double eps = 0.1;
    double sigma = 0.1;
    int n_cycles = 100;
    int n_train = 100;
    int n_test = 30;
    std::vector<std::string> references{"AF", "gg", "d2"};

    void validate() const;
};

// Reference configuration label on an n-site ring: AF = grgr..., gg = all
// g, d2 = g r g...g r g. A literal g/r string is accepted as well.
std::string reference_label(const std::string& name, int n_sites);

// Bit m stored as |psi> (m = 0) or chi|psi> (m = 1); per cycle n a readout
// on the first atom's (P_g, P_r, 1) is trained and scored by R(n).
TaskResult run_longterm_memory(const LongtermConfig& cfg);

// --- analyses behind the scar and embeddability figures ------------------------

struct ScarFidelityConfig {
    std::uint64_t seed = 0;
    int threads = 1;
    int n_sites = 8;
    double tau = kScarTau;
    double eps = 0.1;
    double sigma = 0.1;
    int n_cycles = 100;
    int n_seeds = 10;  // noise seeds, shared across references
    std::vector<std::string> references{"AF", "gg", "d2"};

    void validate() const;
};

// Mean return fidelity per cycle for each reference; noise draws are shared
// across references. Also reports the worst noiseless fidelity.
TaskResult run_scar_fidelity(const ScarFidelityConfig& cfg);

struct EmbeddabilityConfig {
    int n_max = 6;            // spin-flip check for N = 1..n_max
    int n_max_decohered = 4;  // decohered flip for N = 1..n_max_decohered
    double gamma = 0.3;       // rad/us, alpha = 1, beta = 0
    double t = 0.4;           // us

    void validate() const;
};

TaskResult run_embeddability(const EmbeddabilityConfig& cfg);

struct KernelCountConfig {
    std::vector<int> sizes{4, 6, 8};
    std::vector<int> steady_sizes{6, 8};
    double tau = kScarTau;
    double eps = 0.1;
    double sigma = 0.1;
    double tol = kKernelTol;
    double steady_cycles = 1e4;

    void validate() const;
};

// Kernel dimension per ring size, plus empirical steady states with their
// fidelity matrices (tables "steady_fidelity_<N>", header = bitstrings).
TaskResult run_kernel_count(const KernelCountConfig& cfg);

}  // namespace qrc
