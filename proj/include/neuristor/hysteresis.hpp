#pragma once

// Resistance-temperature hysteresis of a VO2 film with major and minor loops.
//
// The insulating volume fraction F(T) follows a tanh sigmoid whose center is
// shifted by +w/2 on heating and -w/2 on cooling. After a direction reversal
// inside the transition, a proximity temperature T_pr shifts the effective
// temperature so the new branch starts continuously at the reversal point and
// relaxes onto the major branch as the proximity weight decays.

#include <string>
#include <vector>

namespace neuristor {

/// How the proximity temperature is recovered from F at a reversal point.
enum class ReversalForm {
    inverse_tanh,  ///< artanh(2F - 1): keeps F continuous across a reversal
    linear,        ///< (2F - 1) taken literally, without inversion
};

struct HysteresisParams {
    double r0 = 0.0;     ///< insulating prefactor [ohm]
    double rm = 0.0;     ///< metallic residual resistance [ohm]
    double ea = 0.0;     ///< activation temperature [K]
    double beta = 0.0;   ///< transition sharpness [1/K]
    double w = 0.0;      ///< loop width [K]
    double tc = 0.0;     ///< critical temperature [K]
    double gamma = 0.0;  ///< proximity-function shape
    ReversalForm reversal_form = ReversalForm::inverse_tanh;

    bool operator==(const HysteresisParams&) const = default;
};

/// Built-in parameter set "paper-fit-2023" fitted to the measured R(T) loops.
HysteresisParams paper_fit_2023();

/// Returns one message per violated invariant; empty when valid.
std::vector<std::string> validate(const HysteresisParams& p);

/// Branch memory. `t_pr == 0` means the state is on the major loop.
struct BranchState {
    int delta = +1;      ///< +1 heating, -1 cooling
    double t_r = 0.0;    ///< temperature of the most recent reversal [K]
    double t_pr = 0.0;   ///< proximity temperature at that reversal [K]
    double t_last = 0.0; ///< last temperature seen [K]

    bool on_major_loop() const { return t_pr == 0.0; }
    bool operator==(const BranchState&) const = default;
};

/// Major-loop state at temperature `t` moving in direction `delta`.
BranchState major_loop_state(double t, int delta = +1);

enum class ResistanceMode {
    quasistatic,  ///< metallic term R_m (slow R(T) sweeps)
    dynamic,      ///< metallic term k * R_m (narrow channels during spiking)
};

inline constexpr double kDefaultReversalEps = 1e-4;  // K

double proximity_weight(double x, double gamma);

double insulating_fraction(double t, const BranchState& branch, const HysteresisParams& p);

/// Turns the branch around at `t_r`, which must lie on the current branch.
/// F(t_r) is taken from the pre-flip branch so the new branch starts at the same F.
BranchState reverse_branch(const BranchState& branch, double t_r, const HysteresisParams& p);

/// Advances the branch memory to `t_new`, reversing when the temperature moved
/// against `delta` by more than `eps`.
BranchState reversal_update(const BranchState& branch, double t_new, const HysteresisParams& p,
                            double eps = kDefaultReversalEps);

double resistance(double t, const BranchState& branch, const HysteresisParams& p, double k,
                  ResistanceMode mode);

std::string to_string(ReversalForm form);
ReversalForm reversal_form_from_string(const std::string& name);

}  // namespace neuristor
