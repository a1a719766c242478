#include "credinfo/instruments.hpp"

#include <cmath>
#include <stdexcept>

namespace credinfo {

void Claim::validate() const {
    if (!(maturity > 0.0) || !std::isfinite(maturity)) throw std::invalid_argument("Claim: maturity must be > 0");
    if (!std::isfinite(terminal) || !std::isfinite(dividend_rate) || !std::isfinite(recovery))
        throw std::invalid_argument("Claim: payoffs must be finite");
}

Claim operator+(const Claim& a, const Claim& b) {
    if (a.maturity != b.maturity) throw std::invalid_argument("Claim: cannot add claims with different maturities");
    return Claim{a.maturity, a.terminal + b.terminal, a.dividend_rate + b.dividend_rate, a.recovery + b.recovery};
}

Claim operator*(double scale, const Claim& c) {
    return Claim{c.maturity, scale * c.terminal, scale * c.dividend_rate, scale * c.recovery};
}

namespace {

void check_recovery_rate(double alpha_rec) {
    if (!(alpha_rec >= 0.0 && alpha_rec <= 1.0)) throw std::invalid_argument("alpha_rec must lie in [0, 1]");
}

}  // namespace

Claim make_zcb(double maturity, double alpha_rec) {
    check_recovery_rate(alpha_rec);
    Claim c{maturity, 1.0, 0.0, 1.0 - alpha_rec};
    c.validate();
    return c;
}

Claim make_cds(double maturity, double kappa, double alpha_rec) {
    check_recovery_rate(alpha_rec);
    if (!(kappa >= 0.0)) throw std::invalid_argument("make_cds: kappa must be >= 0");
    Claim c{maturity, 0.0, -kappa, 1.0 - alpha_rec};
    c.validate();
    return c;
}

double discount_factor(const Discount& disc, double t) {
    if (t < 0.0) throw std::invalid_argument("discount_factor: t must be >= 0");
    return std::exp(disc.r * t);
}

}  // namespace credinfo
