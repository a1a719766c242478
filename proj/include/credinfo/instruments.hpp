#pragma once

namespace credinfo {

/// Credit-sensitive claim (C, G, Z): C paid at T if no default, dividends
/// G_t = g t accrued while alive, recovery Z paid at default before T.
struct Claim {
    double maturity = 1.0;
    double terminal = 1.0;
    double dividend_rate = 0.0;
    double recovery = 0.0;

    /// Throws std::invalid_argument unless maturity > 0 and all fields are finite.
    void validate() const;
    bool is_zero() const { return terminal == 0.0 && dividend_rate == 0.0 && recovery == 0.0; }
};

/// Field-wise combinations; maturities must match.
Claim operator+(const Claim& a, const Claim& b);
Claim operator*(double scale, const Claim& c);

/// Defaultable zero-coupon bond: C = 1, g = 0, Z = 1 - alpha_rec.
Claim make_zcb(double maturity, double alpha_rec);
/// Protection buyer's CDS leg: C = 0, g = -kappa, Z = 1 - alpha_rec.
Claim make_cds(double maturity, double kappa, double alpha_rec);

/// Flat continuously compounded short rate.
struct Discount {
    double r = 0.02;
};

/// R_t = exp(r t).
double discount_factor(const Discount& disc, double t);

}  // namespace credinfo
