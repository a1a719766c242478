#include "credinfo/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "credinfo/errors.hpp"

namespace credinfo {
namespace {

// Gauss-Kronrod 15-point abscissae; odd indices are the Gauss 7-point nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment kronrod(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod_sum = fc * kWgk[7];
    double gauss_sum = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod_sum += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss_sum += kWg[j / 2] * (f1 + f2);
    }
    const double value = kronrod_sum * half;
    const double error = std::abs((kronrod_sum - gauss_sum) * half);
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "integrate: non-finite integrand on [" << a << ", " << b << "]";
        throw NumericalFailure(msg.str());
    }
    return {a, b, value, error};
}

template <class F>
QuadratureResult adaptive(const F& f, double a, double b, double tol, std::size_t max_intervals) {
    QuadratureResult result;
    if (a == b) return result;

    std::priority_queue<Segment> heap;
    Segment first = kronrod(f, a, b);
    result.evaluations = 15;
    double total = first.value;
    double error = first.error;
    heap.push(first);

    while (error > tol && heap.size() < max_intervals) {
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // no representable split left
        heap.pop();
        const Segment left = kronrod(f, worst.a, mid);
        const Segment right = kronrod(f, mid, worst.b);
        result.evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Recompute from scratch to drop the round-off of incremental updates.
    total = 0.0;
    error = 0.0;
    result.intervals = heap.size();
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    result.value = total;
    result.abs_error = error;
    if (error > tol) {
        std::ostringstream msg;
        msg << "integrate: no convergence on [" << a << ", " << b << "] after " << result.intervals
            << " intervals (" << result.evaluations << " evaluations), error estimate " << error
            << " > tolerance " << tol;
        throw NumericalFailure(msg.str());
    }
    return result;
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                                    std::size_t max_intervals) {
    if (std::isnan(a) || std::isnan(b) || a > b) throw std::invalid_argument("integrate: requires a <= b");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate: tolerance must be > 0");

    constexpr double inf = std::numeric_limits<double>::infinity();
    if (a == -inf && b == inf) {
        auto mapped = [&](double t) {  // x = t / (1 - t^2) on (-1, 1)
            const double d = 1.0 - t * t;
            return f(t / d) * (1.0 + t * t) / (d * d);
        };
        return adaptive(mapped, -1.0, 1.0, tol, max_intervals);
    }
    if (b == inf) {
        auto mapped = [&](double t) {
            const double d = 1.0 - t;
            return f(a + t / d) / (d * d);
        };
        return adaptive(mapped, 0.0, 1.0, tol, max_intervals);
    }
    if (a == -inf) {
        auto mapped = [&](double t) {
            const double d = 1.0 - t;
            return f(b - t / d) / (d * d);
        };
        return adaptive(mapped, 0.0, 1.0, tol, max_intervals);
    }
    return adaptive(f, a, b, tol, max_intervals);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    return integrate_adaptive(f, a, b, tol).value;
}

GaussHermiteRule gauss_hermite(std::size_t n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    // Newton iteration on orthonormal physicists' Hermite polynomials,
    // then rescaled to the standard normal weight.
    const double pi_quarter = std::pow(std::numbers::pi, -0.25);
    std::vector<double> x(n);
    std::vector<double> w(n);
    const std::size_t m = (n + 1) / 2;
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double nd = static_cast<double>(n);
        if (i == 0)
            z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(nd, 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * x[1];
        else
            z = 2.0 * z - x[i - 2];

        double pp = 0.0;
        bool converged = false;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pi_quarter;
            double p2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const double jd = static_cast<double>(j);
                p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * nd) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged) throw NumericalFailure("gauss_hermite: Newton iteration did not converge");
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }

    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = std::numbers::sqrt2 * x[n - 1 - i];
        rule.weights[i] = w[n - 1 - i] * inv_sqrt_pi;
    }
    // Newton can settle on a repeated root at high orders; the mass exposes it
    const double mass = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
    if (!(std::abs(mass - 1.0) <= 1e-10)) throw NumericalFailure("gauss_hermite: rule does not integrate 1");
    return rule;
}

}  // namespace credinfo
