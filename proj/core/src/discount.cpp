#include "nonlin_mdp/discount.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace nonlin_mdp {

namespace {
constexpr double prop_tol = 1e-12;

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string pair_str(double a, double b) {
    std::ostringstream os;
    os << "(" << a << ", " << b << ")";
    return os.str();
}
} // namespace

DiscountFunction make_linear(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw ParamError("make_linear: beta must lie in (0,1)");
    DiscountFunction d;
    d.kind = "linear";
    d.name = "linear(" + std::to_string(beta) + ")";
    d.params["beta"] = beta;
    d.delta = [beta](double z) { return is_neg_inf(z) ? neg_inf : beta * z; };
    d.gamma = [beta](double z) { return beta * z; };
    return d;
}

DiscountFunction make_sign_effect(double d1, double d2) {
    if (!(d1 > 0.0 && d1 < 1.0) || !(d2 > 0.0 && d2 < 1.0))
        throw ParamError("make_sign_effect: factors must lie in (0,1)");
    DiscountFunction d;
    d.kind = "sign_effect";
    d.name = "sign_effect(" + std::to_string(d1) + ", " + std::to_string(d2) + ")";
    d.params["d1"] = d1;
    d.params["d2"] = d2;
    d.delta = [d1, d2](double z) {
        if (is_neg_inf(z)) return neg_inf;
        return z <= 0.0 ? d1 * z : d2 * z;
    };
    const double g = std::max(d1, d2);
    d.gamma = [g](double z) { return g * z; };
    return d;
}

DiscountFunction make_log_blend(double eps, LogBlendVariant variant) {
    if (!(eps > 0.0 && eps < 1.0))
        throw ParamError("make_log_blend: eps must lie in (0,1)");
    if (variant == LogBlendVariant::two && !(eps < 0.5))
        throw ParamError("make_log_blend: variant two requires eps < 1/2");
    const double lin = (variant == LogBlendVariant::one) ? 1.0 - eps : 1.0 - 2.0 * eps;
    auto pos = [lin, eps](double z) { return lin * z + eps * std::log1p(z); };
    DiscountFunction d;
    d.kind = (variant == LogBlendVariant::one) ? "log_blend" : "log_blend2";
    d.name = d.kind + "(" + std::to_string(eps) + ")";
    d.params["eps"] = eps;
    d.modulus_domain_min = 0.0; // negative half-line is odd reflection, see check_discount
    d.delta = [pos](double z) {
        if (is_neg_inf(z)) return neg_inf;
        return z >= 0.0 ? pos(z) : -pos(-z);
    };
    d.gamma = pos;
    return d;
}

namespace {

std::vector<double> linear_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return g;
}

void check_pair_bound(PropertyCheck& c, double lhs, double rhs, double tol,
                      double a, double b) {
    const double viol = lhs - rhs - tol;
    if (viol > c.worst_violation) {
        c.worst_violation = viol;
        c.worst_sample = pair_str(a, b);
        c.passed = false;
    }
}

} // namespace

PropertyReport check_discount(const DiscountFunction& d, const SampleGrid& grid) {
    PropertyReport report;
    std::mt19937_64 rng(grid.seed);
    const auto zs = linear_grid(grid.lo, grid.hi, grid.grid_points);

    {
        PropertyCheck c{"delta(0)=0", d.delta(0.0) == 0.0, false, std::abs(d.delta(0.0)), "0"};
        report.checks.push_back(c);
    }
    {
        PropertyCheck c{"delta(-inf)=-inf", is_neg_inf(d.delta(neg_inf)), false, 0.0, "-inf"};
        report.checks.push_back(c);
    }
    {
        PropertyCheck c{"delta increasing", true};
        for (std::size_t i = 1; i < zs.size(); ++i) {
            if (!(d.delta(zs[i]) > d.delta(zs[i - 1]))) {
                c.passed = false;
                c.worst_sample = pair_str(zs[i - 1], zs[i]);
                break;
            }
        }
        report.checks.push_back(c);
    }
    {
        // Modulus inequality on the declared domain.
        PropertyCheck c{"modulus |delta(z1)-delta(z2)| <= gamma(|z1-z2|)", true};
        const double dom = d.modulus_domain_min;
        auto try_pair = [&](double z1, double z2) {
            if (z1 < dom || z2 < dom) return;
            check_pair_bound(c, std::abs(d.delta(z1) - d.delta(z2)),
                             d.gamma(std::abs(z1 - z2)), prop_tol, z1, z2);
        };
        for (std::size_t i = 1; i < zs.size(); ++i) try_pair(zs[i - 1], zs[i]);
        for (int i = 0; i < grid.random_pairs; ++i) {
            const double z1 = grid.lo + (grid.hi - grid.lo) * u01(rng);
            const double z2 = grid.lo + (grid.hi - grid.lo) * u01(rng);
            try_pair(z1, z2);
        }
        report.checks.push_back(c);
    }
    if (d.modulus_domain_min > neg_inf) {
        // Cross-sign pairs fall outside the declared modulus domain; the
        // odd-reflection behaviour is reported but does not gate.
        PropertyCheck c{"odd-reflection modulus (cross-sign)", true, true};
        for (int i = 0; i < grid.random_pairs; ++i) {
            const double z1 = (grid.hi) * u01(rng);
            const double z2 = -(grid.hi) * u01(rng);
            check_pair_bound(c, std::abs(d.delta(z1) - d.delta(z2)),
                             d.gamma(std::abs(z1 - z2)), prop_tol, z1, z2);
        }
        c.passed = c.worst_violation <= 0.0;
        report.checks.push_back(c);
    }
    {
        PropertyCheck c{"gamma(z) < z", true};
        for (double z : zs) {
            if (z <= 0.0) continue;
            if (!(d.gamma(z) < z)) {
                c.passed = false;
                c.worst_violation = std::max(c.worst_violation, d.gamma(z) - z);
                c.worst_sample = pair_str(z, d.gamma(z));
            }
        }
        report.checks.push_back(c);
    }
    {
        PropertyCheck c{"gamma subadditive", true};
        for (int i = 0; i < grid.random_pairs; ++i) {
            const double y = grid.hi * u01(rng);
            const double z = grid.hi * u01(rng);
            check_pair_bound(c, d.gamma(y + z), d.gamma(y) + d.gamma(z), prop_tol, y, z);
        }
        report.checks.push_back(c);
    }
    {
        PropertyCheck c{"gamma(d*y) <= d*gamma(y) for d >= 1", true};
        for (int i = 0; i < grid.random_pairs; ++i) {
            const double y = grid.hi * u01(rng) + 1e-9;
            const double dd = 1.0 + 49.0 * u01(rng);
            check_pair_bound(c, d.gamma(dd * y), dd * d.gamma(y), prop_tol, dd, y);
        }
        report.checks.push_back(c);
    }
    {
        PropertyCheck c{"|delta(z)| <= gamma(|z|)", true};
        for (double z : zs) {
            check_pair_bound(c, std::abs(d.delta(z)), d.gamma(std::abs(z)), prop_tol, z, z);
        }
        report.checks.push_back(c);
    }
    return report;
}

PropertyReport check_gamma(const std::function<double(double)>& gamma, const SampleGrid& grid) {
    DiscountFunction d;
    d.gamma = gamma;
    PropertyReport full;
    std::mt19937_64 rng(grid.seed);
    const auto zs = linear_grid(std::max(0.0, grid.lo), grid.hi, grid.grid_points);
    {
        PropertyCheck c{"gamma(z) < z", true};
        for (double z : zs) {
            if (z <= 0.0) continue;
            if (!(gamma(z) < z)) {
                c.passed = false;
                c.worst_violation = std::max(c.worst_violation, gamma(z) - z);
                c.worst_sample = pair_str(z, gamma(z));
            }
        }
        full.checks.push_back(c);
    }
    {
        PropertyCheck c{"gamma subadditive", true};
        for (int i = 0; i < grid.random_pairs; ++i) {
            const double y = grid.hi * u01(rng);
            const double z = grid.hi * u01(rng);
            check_pair_bound(c, gamma(y + z), gamma(y) + gamma(z), prop_tol, y, z);
        }
        full.checks.push_back(c);
    }
    {
        PropertyCheck c{"gamma increasing", true};
        for (std::size_t i = 1; i < zs.size(); ++i) {
            if (!(gamma(zs[i]) >= gamma(zs[i - 1]))) {
                c.passed = false;
                c.worst_sample = pair_str(zs[i - 1], zs[i]);
                break;
            }
        }
        full.checks.push_back(c);
    }
    return full;
}

double gamma_tilde(const DiscountFunction& d, double alpha, double y) {
    return alpha <= 1.0 ? d.gamma(y) : alpha * d.gamma(y);
}

bool check_alpha_gamma(const DiscountFunction& d, double alpha, double lo, double hi, int points) {
    const double ratio = std::pow(hi / lo, 1.0 / (points - 1));
    double y = lo;
    for (int i = 0; i < points; ++i, y *= ratio)
        if (!(alpha * d.gamma(y) < y)) return false;
    return true;
}

double gamma_tilde_power(const DiscountFunction& d, double alpha, double z, int n) {
    double v = z;
    for (int i = 0; i < n; ++i) v = gamma_tilde(d, alpha, v);
    return v;
}

GammaIterates gamma_tilde_iterates(const DiscountFunction& d, double alpha, double z,
                                   double tol, int cap) {
    if (!(z > 0.0) || !(tol > 0.0))
        throw ParamError("gamma_tilde_iterates: z and tol must be positive");
    if (alpha > 1.0 && !check_alpha_gamma(d, alpha))
        throw ParamError("gamma_tilde_iterates: alpha*gamma(y) < y fails on sampled y");

    GammaIterates out;
    out.z = z;
    out.alpha = alpha;
    out.tol = tol;

    // Increment certificate from the nested-sum limit lemma: once the
    // increment gamma_{k} - gamma_{k-1} (itself majorized by gt^(k-1)(z))
    // drops below eps - gt(eps), every later iterate stays within eps of
    // gamma_{k-1}, so the limit is bracketed by [gamma_k, gamma_{k-1}+eps].
    const double eps = tol;
    const double threshold = eps - gamma_tilde(d, alpha, eps);
    double g = z; // gamma_1(z)
    out.sequence.push_back(g);
    int k = 1;
    for (;; ++k) {
        if (k >= cap)
            throw DivergenceError("gamma_tilde_iterates: iteration cap reached; "
                                  "alpha*gamma(y) < y is likely violated");
        const double next = z + gamma_tilde(d, alpha, g);
        const double inc = next - g;
        if (inc <= 0.0) { // fixed point to machine precision; keep strict increase
            out.residual = 0.0;
            break;
        }
        g = next;
        out.sequence.push_back(g);
        if (inc < threshold) {
            out.residual = eps;
            break;
        }
    }
    out.k_stop = k + 1;
    out.L_tilde = out.sequence.back() + out.residual;
    return out;
}

} // namespace nonlin_mdp
