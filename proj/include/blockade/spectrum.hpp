#pragma once

#include <array>
#include <string>
#include <vector>

#include "blockade/model.hpp"

namespace blockade {

enum class Branch { minus = -1, zero = 0, plus = 1 };

std::string branch_label(int sector, Branch b);

struct EigenLevel {
    int sector = 0;
    Branch branch = Branch::zero;
    int k = 0;
    double value = 0.0;
    // Weights on |m, N-m>|k~(m, N-m)>, ordered by descending m.
    std::vector<double> coeffs;
    // True when the displaced frames differ and the delta_{k,k'} overlap approximation was used.
    bool franck_condon_approx = false;
};

double bare_eigenvalue(int m, int n, int k, const ModelParams& p);
double conditional_displacement(int m, int n, const ModelParams& p);

EigenLevel zero_photon_level(int k, const ModelParams& p);
// Ascending: {minus, plus}.
std::array<EigenLevel, 2> single_photon_eigs(int k, const ModelParams& p);
// Ascending: {minus, zero, plus}.
std::array<EigenLevel, 3> two_photon_eigs(int k, const ModelParams& p);

struct Resonance {
    int photons = 1;
    Branch branch = Branch::zero;
    int k = 0;
    // Common detuning shift (delta_L and delta_R move together) placing the level at zero.
    double detuning = 0.0;
};

// Values of a common detuning Delta (delta_L = Delta, delta_R = Delta + (delta_R - delta_L))
// at which the one- and two-photon levels of sideband k cross zero.
std::vector<Resonance> resonance_detunings(int k, const ModelParams& p);

// Couplings at which single- and two-photon resonances coincide when Delta = g^2/omega_M -+ J.
std::vector<double> resonant_couplings(int k, Branch branch, const ModelParams& p);

std::vector<EigenLevel> level_table(int k_max, const ModelParams& p);

}  // namespace blockade
