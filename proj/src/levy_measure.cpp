#include "levyshe/levy_measure.hpp"

#include "levyshe/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace levyshe {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Density alpha z^{-1-alpha} on [lo, hi).
struct PowerLaw {
    double alpha;
    double lo;
    double hi;
};

double power_moment(const PowerLaw& pl, double p) {
    const double lo = pl.lo;
    const double hi = pl.hi;
    if (!(lo < hi)) return 0.0;
    const double e = p - pl.alpha;
    if (e == 0.0) {
        if (lo == 0.0 || std::isinf(hi))
            throw DivergentIntegral("integral of z^" + fmt(p) + " diverges (logarithmically) on [" + fmt(lo) +
                                    ", " + fmt(hi) + ")");
        return pl.alpha * std::log(hi / lo);
    }
    if (lo == 0.0) {
        if (e < 0.0) throw DivergentIntegral("integral of z^" + fmt(p) + " diverges at 0 (p <= alpha)");
        return pl.alpha / e * std::pow(hi, e);
    }
    if (std::isinf(hi)) {
        if (e > 0.0) throw DivergentIntegral("integral of z^" + fmt(p) + " diverges at infinity (p >= alpha)");
        return pl.alpha / (-e) * std::pow(lo, e);
    }
    // alpha/e (hi^e - lo^e), written to stay accurate when e is close to 0
    return pl.alpha * std::pow(lo, e) * std::expm1(e * std::log(hi / lo)) / e;
}

// Law proportional to z^{-1-gamma} on [lo, hi) (gamma = alpha - tilt).
double power_quantile(double gamma, double lo, double hi, double u) {
    if (gamma == 0.0) return lo * std::exp(u * std::log(hi / lo));
    if (lo == 0.0) return hi * std::pow(u, -1.0 / gamma);
    const double one_minus_r = std::isinf(hi) ? 1.0 : -std::expm1(gamma * std::log(lo / hi));
    const double z = lo * std::pow(1.0 - u * one_minus_r, -1.0 / gamma);
    return std::clamp(z, lo, hi);
}

double power_cdf(double gamma, double lo, double hi, double z) {
    if (z <= lo) return 0.0;
    if (z >= hi) return 1.0;
    if (gamma == 0.0) return std::log(z / lo) / std::log(hi / lo);
    if (lo == 0.0) return std::pow(z / hi, -gamma);
    const double num = -std::expm1(gamma * std::log(lo / z));
    const double den = std::isinf(hi) ? 1.0 : -std::expm1(gamma * std::log(lo / hi));
    return num / den;
}

PowerLaw clip(const AlphaStable& k, double a, double b) { return {k.alpha, std::max(a, 0.0), b}; }
PowerLaw clip(const PowerTail& k, double a, double b) {
    return {k.alpha, std::max(a, k.z_min), std::min(b, k.z_max)};
}

std::vector<AtomJump> atoms_of(const LevyMeasure::Kind& kind) {
    if (const auto* a = std::get_if<AtomJump>(&kind)) return {*a};
    return std::get<Mixture>(kind).atoms;
}

double exponential_moment(const ExponentialTail& k, double a, double b, double p) {
    if (!(a < b)) return 0.0;
    const double ua = a / k.scale;
    const double ub = b / k.scale;
    if (p == 0.0) {
        const double upper = std::isinf(ub) ? 0.0 : std::exp(-ub);
        return k.rate * (std::exp(-ua) - upper);
    }
    auto integrand = [p](double u) { return u == 0.0 ? 0.0 : std::exp(p * std::log(u) - u); };
    double integral = 0.0;
    if (std::isinf(ub)) {
        boost::math::quadrature::exp_sinh<double> integrator;
        integral = integrator.integrate(integrand, ua, std::numeric_limits<double>::infinity(), 1e-13);
    } else {
        boost::math::quadrature::tanh_sinh<double> integrator;
        integral = integrator.integrate(integrand, ua, ub, 1e-13);
    }
    return k.rate * std::pow(k.scale, p) * integral;
}

double exponential_quantile(const ExponentialTail& k, double a, double b, double tilt, double u) {
    using boost::math::gamma_p;
    using boost::math::gamma_p_inv;
    using boost::math::gamma_q;
    using boost::math::gamma_q_inv;
    const double shape = tilt + 1.0;
    const double ua = a / k.scale;
    const double ub = b / k.scale;
    if (ua > shape) {
        // upper tail: work with the complementary function to keep precision
        const double qa = gamma_q(shape, ua);
        const double qb = std::isinf(ub) ? 0.0 : gamma_q(shape, ub);
        const double w = qa - u * (qa - qb);
        if (w <= 0.0) return b;
        return std::clamp(k.scale * gamma_q_inv(shape, w), a, b);
    }
    const double pa = gamma_p(shape, ua);
    const double pb = std::isinf(ub) ? 1.0 : gamma_p(shape, ub);
    const double v = pa + u * (pb - pa);
    if (v >= 1.0) return b;
    return std::clamp(k.scale * gamma_p_inv(shape, v), a, b);
}

double exponential_cdf(const ExponentialTail& k, double a, double b, double tilt, double z) {
    if (z <= a) return 0.0;
    if (z >= b) return 1.0;
    const double shape = tilt + 1.0;
    const double pa = boost::math::gamma_p(shape, a / k.scale);
    const double pb = std::isinf(b) ? 1.0 : boost::math::gamma_p(shape, b / k.scale);
    return (boost::math::gamma_p(shape, z / k.scale) - pa) / (pb - pa);
}

void check_interval(double a, double b) {
    if (!(a >= 0.0) || !(b >= a))
        throw DomainError("invalid jump interval [" + fmt(a) + ", " + fmt(b) + ")");
}

} // namespace

LevyMeasure::LevyMeasure(Kind kind, bool degenerate_experiment)
    : kind_(std::move(kind)), degenerate_(degenerate_experiment) {
    std::visit(Overloaded{
                   [](const AlphaStable& k) {
                       if (!(k.alpha > 0.0 && k.alpha < 2.0))
                           throw DomainError("alpha_stable requires alpha in (0,2), got " + fmt(k.alpha));
                   },
                   [](const PowerTail& k) {
                       if (!(k.alpha > 0.0)) throw DomainError("power_tail requires alpha > 0");
                       if (!(k.z_min >= 0.0 && k.z_max > k.z_min))
                           throw DomainError("power_tail requires 0 <= z_min < z_max");
                   },
                   [](const AtomJump& k) {
                       if (!(k.z0 > 0.0) || !(k.mass >= 0.0) || std::isinf(k.z0) || std::isinf(k.mass))
                           throw DomainError("atom requires z0 > 0 and finite mass >= 0");
                   },
                   [](const Mixture& k) {
                       for (const auto& a : k.atoms)
                           if (!(a.z0 > 0.0) || !(a.mass >= 0.0) || std::isinf(a.z0) || std::isinf(a.mass))
                               throw DomainError("mixture atoms require z0 > 0 and finite mass >= 0");
                   },
                   [](const ExponentialTail& k) {
                       if (!(k.rate >= 0.0) || !(k.scale > 0.0))
                           throw DomainError("exponential_tail requires rate >= 0 and scale > 0");
                   },
               },
               kind_);
    if (!small_jumps_square_integrable() && !degenerate_)
        throw DomainError("measure has infinite integral of z^2 near 0; construct it with the "
                          "degenerate-experiment flag to use it anyway");
}

std::string LevyMeasure::kind_name() const {
    return std::visit(Overloaded{
                          [](const AlphaStable&) { return std::string("alpha_stable"); },
                          [](const PowerTail&) { return std::string("power_tail"); },
                          [](const AtomJump&) { return std::string("atom"); },
                          [](const Mixture&) { return std::string("mixture"); },
                          [](const ExponentialTail&) { return std::string("exponential_tail"); },
                      },
                      kind_);
}

double LevyMeasure::support_lo() const {
    return std::visit(Overloaded{
                          [](const AlphaStable&) { return 0.0; },
                          [](const PowerTail& k) { return k.z_min; },
                          [this](const auto&) {
                              double lo = kInfinity;
                              for (const auto& a : atoms_of(kind_))
                                  if (a.mass > 0.0) lo = std::min(lo, a.z0);
                              return lo;
                          },
                          [](const ExponentialTail&) { return 0.0; },
                      },
                      kind_);
}

double LevyMeasure::support_hi() const {
    return std::visit(Overloaded{
                          [](const AlphaStable&) { return kInfinity; },
                          [](const PowerTail& k) { return k.z_max; },
                          [this](const auto&) {
                              double hi = 0.0;
                              for (const auto& a : atoms_of(kind_))
                                  if (a.mass > 0.0) hi = std::max(hi, a.z0);
                              return hi;
                          },
                          [](const ExponentialTail&) { return kInfinity; },
                      },
                      kind_);
}

double LevyMeasure::partial_moment(double a, double b, double p) const {
    check_interval(a, b);
    if (!(p >= 0.0)) throw DomainError("moment order must be >= 0");
    if (a == b) return 0.0;
    return std::visit(Overloaded{
                          [&](const AlphaStable& k) { return power_moment(clip(k, a, b), p); },
                          [&](const PowerTail& k) { return power_moment(clip(k, a, b), p); },
                          [&](const ExponentialTail& k) { return exponential_moment(k, a, b, p); },
                          [&](const auto&) {
                              double sum = 0.0;
                              for (const auto& atom : atoms_of(kind_))
                                  if (atom.z0 >= a && atom.z0 < b) sum += std::pow(atom.z0, p) * atom.mass;
                              return sum;
                          },
                      },
                      kind_);
}

double LevyMeasure::compensator(double a) const {
    if (!(a > 0.0 && a <= 1.0)) throw DomainError("compensator needs a in (0,1], got " + fmt(a));
    return partial_moment(a, 1.0, 1.0);
}

double LevyMeasure::tail_mass(double a, double b) const { return partial_moment(a, b, 0.0); }

double LevyMeasure::sample_tilted(double a, double b, double tilt, Rng& rng) const {
    const double mass = partial_moment(a, b, tilt);
    if (!(mass > 0.0)) throw DomainError("empty support on [" + fmt(a) + ", " + fmt(b) + ")");
    return quantile(a, b, tilt, uniform01(rng));
}

double LevyMeasure::quantile(double a, double b, double tilt, double u) const {
    check_interval(a, b);
    return std::visit(Overloaded{
                          [&](const AlphaStable& k) {
                              const auto pl = clip(k, a, b);
                              return power_quantile(k.alpha - tilt, pl.lo, pl.hi, u);
                          },
                          [&](const PowerTail& k) {
                              const auto pl = clip(k, a, b);
                              return power_quantile(k.alpha - tilt, pl.lo, pl.hi, u);
                          },
                          [&](const ExponentialTail& k) { return exponential_quantile(k, a, b, tilt, u); },
                          [&](const auto&) {
                              const auto atoms = atoms_of(kind_);
                              double total = 0.0;
                              for (const auto& atom : atoms)
                                  if (atom.z0 >= a && atom.z0 < b) total += std::pow(atom.z0, tilt) * atom.mass;
                              if (!(total > 0.0)) throw DomainError("empty support");
                              const double target = u * total;
                              double cum = 0.0;
                              double last = 0.0;
                              for (const auto& atom : atoms) {
                                  if (!(atom.z0 >= a && atom.z0 < b) || atom.mass == 0.0) continue;
                                  cum += std::pow(atom.z0, tilt) * atom.mass;
                                  last = atom.z0;
                                  if (target < cum) return atom.z0;
                              }
                              return last;
                          },
                      },
                      kind_);
}

double LevyMeasure::conditional_cdf(double a, double b, double tilt, double z) const {
    check_interval(a, b);
    return std::visit(Overloaded{
                          [&](const AlphaStable& k) {
                              const auto pl = clip(k, a, b);
                              return power_cdf(k.alpha - tilt, pl.lo, pl.hi, z);
                          },
                          [&](const PowerTail& k) {
                              const auto pl = clip(k, a, b);
                              return power_cdf(k.alpha - tilt, pl.lo, pl.hi, z);
                          },
                          [&](const ExponentialTail& k) { return exponential_cdf(k, a, b, tilt, z); },
                          [&](const auto&) {
                              double total = 0.0;
                              double below = 0.0;
                              for (const auto& atom : atoms_of(kind_)) {
                                  if (!(atom.z0 >= a && atom.z0 < b)) continue;
                                  const double w = std::pow(atom.z0, tilt) * atom.mass;
                                  total += w;
                                  if (atom.z0 <= z) below += w;
                              }
                              return total > 0.0 ? below / total : 0.0;
                          },
                      },
                      kind_);
}

bool LevyMeasure::small_jumps_square_integrable() const {
    if (const auto* k = std::get_if<PowerTail>(&kind_)) return k->z_min > 0.0 || k->alpha < 2.0;
    return true;
}

namespace {

// Exponent q such that the relevant small-jump integral is of z^q (d = 2 adds a log factor,
// which changes nothing for pure power laws at 0 away from the boundary q = alpha).
double nondegeneracy_exponent(int d) { return d == 1 ? 2.0 : 1.0 + 2.0 / d; }

} // namespace

bool LevyMeasure::satisfies_nondegeneracy(int d) const {
    if (d < 1) throw DomainError("dimension must be >= 1");
    const double q = nondegeneracy_exponent(d);
    if (const auto* k = std::get_if<AlphaStable>(&kind_)) return k->alpha < q;
    if (const auto* k = std::get_if<PowerTail>(&kind_)) return k->z_min > 0.0 || k->alpha < q;
    return true;
}

bool LevyMeasure::violates_nondegeneracy(int d) const {
    if (d < 1) throw DomainError("dimension must be >= 1");
    const double q = nondegeneracy_exponent(d);
    if (const auto* k = std::get_if<AlphaStable>(&kind_)) return k->alpha >= q;
    if (const auto* k = std::get_if<PowerTail>(&kind_)) return k->z_min == 0.0 && k->alpha >= q;
    return false;
}

} // namespace levyshe
