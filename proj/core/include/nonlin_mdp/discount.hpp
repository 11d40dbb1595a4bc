#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nonlin_mdp/errors.hpp"
#include "nonlin_mdp/model.hpp"

namespace nonlin_mdp {

/// A discount function delta together with its comparison modulus gamma.
///
/// delta maps extended reals to extended reals with delta(0) = 0 and
/// delta(-inf) = -inf; gamma is an increasing function on the nonnegative
/// reals with gamma(z) < z, subadditive and satisfying
/// gamma(d*y) <= d*gamma(y) for d >= 1.  The modulus inequality
/// |delta(z1) - delta(z2)| <= gamma(|z1 - z2|) is guaranteed on
/// [modulus_domain_min, inf); for the log-blend functions the negative
/// half-line is an odd-reflection extension and the inequality is only
/// checked there empirically, never assumed.
struct DiscountFunction {
    std::function<double(double)> delta;
    std::function<double(double)> gamma;
    std::string name;
    std::string kind; // linear | sign_effect | log_blend | log_blend2
    std::map<std::string, double> params;
    double modulus_domain_min = neg_inf;

    double operator()(double z) const { return delta(z); }
};

DiscountFunction make_linear(double beta);
DiscountFunction make_sign_effect(double d1, double d2);

enum class LogBlendVariant { one, two };
DiscountFunction make_log_blend(double eps, LogBlendVariant variant);

/// One pass/fail entry of a property report.
struct PropertyCheck {
    std::string property;
    bool passed = false;
    bool informational = false; // reported but not gating
    double worst_violation = 0.0;
    std::string worst_sample;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed && !c.informational) return false;
        return true;
    }
    const PropertyCheck* find(const std::string& property) const {
        for (const auto& c : checks)
            if (c.property == property) return &c;
        return nullptr;
    }
};

struct SampleGrid {
    double lo = -50.0;
    double hi = 50.0;
    int grid_points = 400;
    int random_pairs = 200;
    unsigned long long seed = 1234;
};

/// Samples the (B)-style axioms on a grid and random pairs; failures are
/// carried in the report, nothing throws.
PropertyReport check_discount(const DiscountFunction& d, const SampleGrid& grid = {});

/// Standalone gamma check (for moduli given without a paired delta).
PropertyReport check_gamma(const std::function<double(double)>& gamma, const SampleGrid& grid = {});

/// gamma-tilde of (B2.4): gamma when alpha <= 1, alpha*gamma otherwise.
double gamma_tilde(const DiscountFunction& d, double alpha, double y);

/// The nested-sum iterates gamma_k(z) = z + gt(z + gt(... + gt(z))),
/// their certified limit and the stopping index.
struct GammaIterates {
    double z = 0;
    double alpha = 0;
    std::vector<double> sequence; // gamma_1(z), gamma_2(z), ...
    double L_tilde = 0;           // last element + residual majorant
    double residual = 0;
    int k_stop = 0;
    double tol = 0;
};

GammaIterates gamma_tilde_iterates(const DiscountFunction& d, double alpha, double z,
                                   double tol, int cap = 1000000);

/// n-fold composition of gamma-tilde; n = 0 is the identity.
double gamma_tilde_power(const DiscountFunction& d, double alpha, double z, int n);

/// Samples alpha*gamma(y) < y on a positive grid; used as the (B2.4)(ii)
/// precondition when alpha > 1.
bool check_alpha_gamma(const DiscountFunction& d, double alpha,
                       double lo = 1e-6, double hi = 1e6, int points = 200);

} // namespace nonlin_mdp
