#pragma once

// Critical Ising interfaces on the square lattice under Dobrushin boundary
// conditions: single-site Glauber (heat-bath) dynamics with fixed boundary
// spins, extraction of the chordal domain wall on the dual lattice, and a
// diffusivity estimate of its Loewner driving function.

#include <cstdint>
#include <vector>

#include "slelab/cgeom.hpp"

namespace slelab {
namespace walls {

struct lattice_spec {
    int width = 64;
    int height = 64;
    double beta = 0.0;       // 0 = critical 0.5 ln(1 + sqrt 2)
    int sweeps = 0;          // decorrelation spacing (0 = thermalization/4)
    int thermalization = 6000;
    std::uint64_t seed = 1;
};

double critical_beta();

struct spin_field {
    int width = 0, height = 0;
    std::vector<std::int8_t> s; // row-major, y * width + x

    std::int8_t at(int x, int y) const { return s[static_cast<std::size_t>(y) * width + x]; }
    // boundary-condition value for off-lattice probes
    std::int8_t spin_or_boundary(int x, int y) const;
};

// One Markov chain: thermalize, then emit n_samples configurations spaced
// by `sweeps` full sweeps. chain_id seeds an independent stream.
std::vector<spin_field> simulate(const lattice_spec& spec,
                                 std::uint64_t chain_id,
                                 std::size_t n_samples);

struct interface_path {
    std::vector<cplx> dual_points; // dual-lattice polyline from the bottom split
    std::vector<cplx> rescaled;    // half-plane coordinates
};

// Walk the dual lattice from the bottom-center split keeping + on the left;
// fixed left-turn rule at four-way ambiguities; ends on the top boundary.
interface_path extract_interface(const spin_field& f);

struct diffusivity_result {
    double kappa_hat = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
    double r2 = 0.0;
    std::size_t n_paths = 0;
};

// Unzips each path, regresses Var[w(t)] on t over the first quartile of
// common capacity-times; bootstrap CI over paths.
diffusivity_result diffusivity(const std::vector<std::vector<cplx>>& paths,
                               std::uint64_t seed = 7);

// End-to-end: n_interfaces independent chains -> interfaces -> kappa_hat.
struct ising_run_result {
    diffusivity_result diff;
    std::vector<interface_path> interfaces;
};
ising_run_result run_ising_interfaces(const lattice_spec& spec,
                                      std::size_t n_interfaces,
                                      unsigned threads = 0);

} // namespace walls
} // namespace slelab
