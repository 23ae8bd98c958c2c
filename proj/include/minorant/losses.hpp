#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include "minorant/box.hpp"
#include "minorant/buchstab.hpp"
#include "minorant/quadrature.hpp"
#include "minorant/regions.hpp"

namespace minorant::losses {

using quadrature::IntegralEstimate;

// Target upper bounds for the three discarded pieces, their sum's budget
// and the resulting retained density.
inline constexpr double kTargetA3 = 0.000829;
inline constexpr double kTargetB3 = 0.013062;
inline constexpr double kTargetC = 0.235134;
inline constexpr double kTargetTotal = 0.25;
inline constexpr double kTargetRetained = 0.75;

enum class Loss { A3, B3, C };

const char* loss_name(Loss l);
double loss_target(Loss l);

/// Everything needed to integrate one loss: region, integration box, integrand.
struct LossProblem {
    Loss loss;
    regions::RegionPredicate region;
    Box root;
    std::unique_ptr<quadrature::Integrand> integrand;
    std::shared_ptr<const buchstab::BuchstabTable> table;  // C only
};

/// Integrands on the critical path: ω1 from the piecewise bound (A3, B3) and
/// the certified table (C).
LossProblem make_loss_a3();
LossProblem make_loss_b3();
LossProblem make_loss_c(std::shared_ptr<const buchstab::BuchstabTable> table);
LossProblem make_loss(Loss l, std::shared_ptr<const buchstab::BuchstabTable> table = nullptr);

/// Same integrals with ω replaced by 1/u, the closed form on all three
/// regions. Used as an independent oracle.
LossProblem make_reduced(Loss l);

/// Integration boxes: [3/19, 8/19]^4 for A3/B3, [11/38, 8/19] x [9/38, 8/19] for C.
Box loss_root(Loss l);

struct LossOptions {
    std::size_t budget = 0;  // 0: 10^7 for 4-D, 10^6 for 2-D
    double tol = 1e-5;
    unsigned workers = 1;
    int escalations = 2;
};

struct LossResult {
    Loss loss;
    IntegralEstimate estimate;
    double target = 0.0;
    bool passed = false;  // estimate.upper < target
    int escalations_used = 0;
    std::size_t final_budget = 0;
    double final_tol = 0.0;

    double margin() const { return target - estimate.upper; }
};

/// Rigorous bounds; if upper >= target the run continues with budget x10 and
/// tol /10, at most opt.escalations times.
LossResult evaluate_loss(const LossProblem& p, const LossOptions& opt = {});

IntegralEstimate loss_a3(std::size_t budget, double tol, unsigned workers = 1);
IntegralEstimate loss_b3(std::size_t budget, double tol, unsigned workers = 1);
IntegralEstimate loss_c(const std::shared_ptr<const buchstab::BuchstabTable>& table, std::size_t budget, double tol,
                        unsigned workers = 1);

/// Monte Carlo estimate of the loss over the rigorous support hull when
/// available, else over the root box.
IntegralEstimate loss_mc(const LossProblem& p, const IntegralEstimate& rigorous, std::size_t samples,
                         std::uint64_t seed, unsigned workers = 1);

struct LossLedger {
    IntegralEstimate loss_a3;
    IntegralEstimate loss_b3;
    IntegralEstimate loss_c;
    double total_upper = 0.0;
    double retained_lower = 0.0;
    bool total_pass = false;     // total_upper < 0.25
    bool retained_pass = false;  // retained_lower >= 0.75
};

/// Throws std::invalid_argument if any input is a Monte Carlo estimate.
LossLedger assemble_ledger(const IntegralEstimate& a3, const IntegralEstimate& b3, const IntegralEstimate& c);

}  // namespace minorant::losses
