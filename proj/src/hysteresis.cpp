#include "neuristor/hysteresis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace neuristor {

namespace {

// Proximity temperatures below this are indistinguishable from the major loop.
constexpr double kMajorLoopTpr = 1e-9;  // K
// Keeps artanh finite when F(t_r) rounds to exactly 0 or 1.
constexpr double kArtanhClamp = 1.0 - 1e-12;

}  // namespace

HysteresisParams paper_fit_2023()
{
    HysteresisParams p;
    p.r0 = 5.359e-3;
    p.rm = 262.5;
    p.ea = 5220.0;
    p.beta = 0.253;
    p.w = 7.193;
    p.tc = 332.8;
    p.gamma = 0.956;
    return p;
}

std::vector<std::string> validate(const HysteresisParams& p)
{
    std::vector<std::string> issues;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            issues.push_back(std::string(name) + " must be finite and > 0");
    };
    positive(p.r0, "r0");
    positive(p.rm, "rm");
    positive(p.ea, "ea");
    positive(p.beta, "beta");
    positive(p.w, "w");
    positive(p.tc, "tc");
    positive(p.gamma, "gamma");
    if (!(p.tc - 0.5 * p.w > 0.0))
        issues.push_back("tc - w/2 must be > 0");
    return issues;
}

BranchState major_loop_state(double t, int delta)
{
    BranchState b;
    b.delta = delta >= 0 ? +1 : -1;
    b.t_last = t;
    return b;
}

double proximity_weight(double x, double gamma)
{
    constexpr double pi = std::numbers::pi;
    return 0.5 * (1.0 - std::sin(gamma * x)) * (1.0 + std::tanh(pi * pi - 2.0 * pi * x));
}

double insulating_fraction(double t, const BranchState& branch, const HysteresisParams& p)
{
    double effective = t;
    if (!branch.on_major_loop())
        effective += branch.t_pr * proximity_weight((t - branch.t_r) / branch.t_pr, p.gamma);
    const double arg = p.beta * (branch.delta * 0.5 * p.w + p.tc - effective);
    return 0.5 + 0.5 * std::tanh(arg);
}

BranchState reverse_branch(const BranchState& branch, double t_r, const HysteresisParams& p)
{
    const double f_r = insulating_fraction(t_r, branch, p);
    const double y = std::clamp(2.0 * f_r - 1.0, -kArtanhClamp, kArtanhClamp);
    const double inverted = p.reversal_form == ReversalForm::inverse_tanh ? std::atanh(y) : y;

    BranchState next;
    next.delta = -branch.delta;
    next.t_r = t_r;
    next.t_pr = next.delta * 0.5 * p.w + p.tc - inverted / p.beta - t_r;
    next.t_last = t_r;
    if (std::abs(next.t_pr) < kMajorLoopTpr) {
        next.t_pr = 0.0;
        next.t_r = 0.0;
    }
    return next;
}

BranchState reversal_update(const BranchState& branch, double t_new, const HysteresisParams& p,
                            double eps)
{
    const double step = t_new - branch.t_last;
    const int direction = step > 0.0 ? +1 : -1;
    if (direction != branch.delta && std::abs(step) > eps) {
        BranchState next = reverse_branch(branch, branch.t_last, p);
        next.t_last = t_new;
        return next;
    }
    BranchState next = branch;
    next.t_last = t_new;
    return next;
}

double resistance(double t, const BranchState& branch, const HysteresisParams& p, double k,
                  ResistanceMode mode)
{
    const double metallic = mode == ResistanceMode::dynamic ? k * p.rm : p.rm;
    return p.r0 * std::exp(p.ea / t) * insulating_fraction(t, branch, p) + metallic;
}

std::string to_string(ReversalForm form)
{
    return form == ReversalForm::inverse_tanh ? "inverse_tanh" : "linear";
}

ReversalForm reversal_form_from_string(const std::string& name)
{
    if (name == "inverse_tanh")
        return ReversalForm::inverse_tanh;
    if (name == "linear")
        return ReversalForm::linear;
    throw std::invalid_argument("unknown reversal form '" + name + "'");
}

}  // namespace neuristor
