#include "qbounce/airy.hpp"
#include "qbounce/dd.hpp"
#include "qbounce/errors.hpp"

#include <array>
#include <cmath>
#include <complex>

namespace qbounce {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.77245385090551602730;

// Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3).
constexpr double kAi0 = 0.35502805388781723926;
constexpr double kAip0 = -0.25881940379280679840;

// Taylor coefficients at x = a of the solution of y'' = x y with
// y(a) = y0, y'(a) = y1.
void taylor_coeffs(double a, double y0, double y1, double* c, int order) {
    c[0] = y0;
    c[1] = y1;
    c[2] = 0.5 * a * y0;
    for (int k = 1; k + 2 < order; ++k)
        c[k + 2] = (a * c[k] + c[k - 1]) / ((k + 1.0) * (k + 2.0));
}

void taylor_eval(const double* c, int order, double h, double& y, double& yp) {
    double v = 0.0, d = 0.0;
    for (int k = order - 1; k >= 1; --k) {
        v = v * h + c[k];
        d = d * h + k * c[k];
    }
    y = v * h + c[0];
    yp = d;
}

void taylor_eval(const double* c, int order, std::complex<double> h,
                 std::complex<double>& y, std::complex<double>& yp) {
    std::complex<double> v = 0.0, d = 0.0;
    for (int k = order - 1; k >= 1; --k) {
        v = v * h + c[k];
        d = d * h + static_cast<double>(k) * c[k];
    }
    y = v * h + c[0];
    yp = d;
}

// Partial sums of the two asymptotic series S_u = sum (-1)^k u_k zeta^-k and
// S_v = sum (-1)^k v_k zeta^-k, truncated at the smallest term.
void uv_series(std::complex<double> zeta, std::complex<double>& su, std::complex<double>& sv) {
    const std::complex<double> zinv = 1.0 / zeta;
    std::complex<double> zk = 1.0;
    double u = 1.0, sgn = 1.0, prev = 1.0;
    su = 1.0;
    sv = 1.0;
    for (int k = 1; k <= 40; ++k) {
        const double kk = 6.0 * k;
        u *= (kk - 5.0) * (kk - 3.0) * (kk - 1.0) / (216.0 * k * (2.0 * k - 1.0));
        zk *= zinv;
        sgn = -sgn;
        const std::complex<double> tu = (sgn * u) * zk;
        const double mag = std::abs(tu);
        if (mag >= prev) break;
        su += tu;
        sv += -tu * ((kk + 1.0) / (kk - 1.0));
        prev = mag;
        if (mag < 1e-18) break;
    }
}

struct AnchorTable {
    static constexpr int kOrder = 64;
    static constexpr int kPosCount = 19;   // a = 3.0, 3.5, ..., 12.0
    static constexpr int kNegCount = 15;   // a = -12.0, -11.5, ..., -5.0
    std::array<std::array<double, kOrder>, kPosCount> pos;
    std::array<std::array<double, kOrder>, kNegCount> neg;
};

const AnchorTable& anchors();

} // namespace

namespace airy_detail {

AiryPair maclaurin_pair(double x) {
    const double x3 = x * x * x;
    double f = 1.0, g = x, fp = 0.0, gp = 1.0;
    double tf = 1.0, tg = x, tfp = 0.0, tgp = 1.0;
    for (int k = 1; k <= 52; ++k) {
        const double a = 3.0 * k;
        tf *= x3 / ((a - 1.0) * a);
        tg *= x3 / (a * (a + 1.0));
        tgp *= x3 / ((a - 2.0) * a);
        if (k == 1)
            tfp = 0.5 * x * x;
        else
            tfp *= x3 * k / ((k - 1.0) * (a - 1.0) * a);
        f += tf;
        g += tg;
        fp += tfp;
        gp += tgp;
        if (std::abs(tf) + std::abs(tg) + std::abs(tfp) + std::abs(tgp) <
            1e-20 * (std::abs(f) + std::abs(g) + 1.0))
            break;
    }
    return {kAi0 * f + kAip0 * g, kAi0 * fp + kAip0 * gp};
}

ComplexAiryPair maclaurin_pair(std::complex<double> z) {
    const std::complex<double> x3 = z * z * z;
    std::complex<double> f = 1.0, g = z, fp = 0.0, gp = 1.0;
    std::complex<double> tf = 1.0, tg = z, tfp = 0.0, tgp = 1.0;
    for (int k = 1; k <= 52; ++k) {
        const double a = 3.0 * k;
        tf *= x3 / ((a - 1.0) * a);
        tg *= x3 / (a * (a + 1.0));
        tgp *= x3 / ((a - 2.0) * a);
        if (k == 1)
            tfp = 0.5 * z * z;
        else
            tfp *= x3 * (k / ((k - 1.0) * (a - 1.0) * a));
        f += tf;
        g += tg;
        fp += tfp;
        gp += tgp;
        if (std::abs(tf) + std::abs(tg) + std::abs(tfp) + std::abs(tgp) <
            1e-20 * (std::abs(f) + std::abs(g) + 1.0))
            break;
    }
    return {kAi0 * f + kAip0 * g, kAi0 * fp + kAip0 * gp};
}

AiryPair anchored_pair(double x) {
    const AnchorTable& t = anchors();
    double y, yp;
    if (x > 0.0) {
        int i = static_cast<int>(std::lround((x - 3.0) * 2.0));
        i = std::max(0, std::min(AnchorTable::kPosCount - 1, i));
        taylor_eval(t.pos[i].data(), AnchorTable::kOrder, x - (3.0 + 0.5 * i), y, yp);
    } else {
        int i = static_cast<int>(std::lround((x + 12.0) * 2.0));
        i = std::max(0, std::min(AnchorTable::kNegCount - 1, i));
        taylor_eval(t.neg[i].data(), AnchorTable::kOrder, x - (-12.0 + 0.5 * i), y, yp);
    }
    return {y, yp};
}

ComplexAiryPair anchored_pair(std::complex<double> z) {
    const AnchorTable& t = anchors();
    std::complex<double> y, yp;
    if (z.real() > 0.0) {
        int i = static_cast<int>(std::lround((z.real() - 3.0) * 2.0));
        i = std::max(0, std::min(AnchorTable::kPosCount - 1, i));
        taylor_eval(t.pos[i].data(), AnchorTable::kOrder, z - (3.0 + 0.5 * i), y, yp);
    } else {
        int i = static_cast<int>(std::lround((z.real() + 12.0) * 2.0));
        i = std::max(0, std::min(AnchorTable::kNegCount - 1, i));
        taylor_eval(t.neg[i].data(), AnchorTable::kOrder, z - (-12.0 + 0.5 * i), y, yp);
    }
    return {y, yp};
}

AiryPair asymptotic_pos_pair(double x) {
    const double sq = std::sqrt(x);
    const double zeta = (2.0 / 3.0) * x * sq;
    if (zeta > 740.0) return {0.0, 0.0};
    const double zinv = 1.0 / zeta;
    double u = 1.0, zk = 1.0, sgn = 1.0, prev = 1.0;
    double su = 1.0, sv = 1.0;
    for (int k = 1; k <= 40; ++k) {
        const double kk = 6.0 * k;
        u *= (kk - 5.0) * (kk - 3.0) * (kk - 1.0) / (216.0 * k * (2.0 * k - 1.0));
        zk *= zinv;
        sgn = -sgn;
        const double tu = sgn * u * zk;
        if (std::abs(tu) >= prev) break;
        su += tu;
        sv += -tu * (kk + 1.0) / (kk - 1.0);
        prev = std::abs(tu);
        if (prev < 1e-18) break;
    }
    const double pref = std::exp(-zeta) / (2.0 * kSqrtPi);
    const double x14 = std::sqrt(sq);
    return {pref * su / x14, -pref * x14 * sv};
}

ComplexAiryPair asymptotic_pos_pair(std::complex<double> z) {
    const std::complex<double> zeta = (2.0 / 3.0) * std::pow(z, 1.5);
    if (zeta.real() < -700.0)
        throw RangeError("airy_ai: asymptotic branch overflow for large |Im| argument");
    if (zeta.real() > 740.0) return {0.0, 0.0};
    std::complex<double> su, sv;
    uv_series(zeta, su, sv);
    const std::complex<double> pref = std::exp(-zeta) / (2.0 * kSqrtPi);
    const std::complex<double> z14 = std::pow(z, 0.25);
    return {pref * su / z14, -pref * z14 * sv};
}

// Oscillatory region through the connection identity
//   Ai(-w) = e^{-i pi/3} Ai(e^{-i pi/3} w) + e^{+i pi/3} Ai(e^{+i pi/3} w),
// where both rotated arguments sit in the decaying sector and
// zeta(e^{+-i pi/3} w) = +-i zeta(w). The real part of zeta is carried in
// double-double through the mod-2pi reduction; a plain double would lose the
// phase to ~|zeta| * eps, which is fatal near the zeros of Ai.
ComplexAiryPair asymptotic_neg_pair(std::complex<double> z) {
    const double wr = -z.real(), wi = -z.imag();
    const dd r2 = dd_add(two_prod(wr, wr), two_prod(wi, wi));
    const dd r = dd_sqrt(r2);
    const dd rho = dd_div(dd_mul(dd_mul(r, dd_sqrt(r)), 2.0), 3.0);
    const double theta = 1.5 * std::atan2(wi, wr);
    const double sh = std::sin(0.5 * theta);
    const double cm1 = -2.0 * sh * sh;
    const dd zr = dd_add(rho, dd_mul(rho, cm1));
    const double zi = rho.hi * std::sin(theta);
    if (std::abs(zi) > 705.0)
        throw RangeError("airy_ai: oscillatory branch overflow, |Im zeta| > 705");
    const double phi = dd_mod_2pi(zr);
    const std::complex<double> zeta(rho.hi + rho.hi * cm1, zi);

    std::complex<double> sup, svp, sum, svm;
    uv_series(std::complex<double>(-zeta.imag(), zeta.real()), sup, svp);   // i zeta
    uv_series(std::complex<double>(zeta.imag(), -zeta.real()), sum, svm);   // -i zeta

    const double c = std::cos(phi), s = std::sin(phi);
    const double egrow = std::exp(zi), edecay = std::exp(-zi);
    const std::complex<double> em(egrow * c, -egrow * s);    // e^{-i zeta}
    const std::complex<double> ep(edecay * c, edecay * s);   // e^{+i zeta}

    const std::complex<double> w(wr, wi);
    const std::complex<double> w14 = std::pow(w, 0.25);
    const std::complex<double> rot12p = std::polar(1.0, kPi / 12.0);
    const std::complex<double> rot12m = std::conj(rot12p);
    const double inv2sp = 1.0 / (2.0 * kSqrtPi);

    const std::complex<double> ai_p = em * sup * inv2sp / (rot12p * w14);
    const std::complex<double> ai_m = ep * sum * inv2sp / (rot12m * w14);
    const std::complex<double> aip_p = -(rot12p * w14) * em * svp * inv2sp;
    const std::complex<double> aip_m = -(rot12m * w14) * ep * svm * inv2sp;

    const std::complex<double> r3p = std::polar(1.0, kPi / 3.0);
    const std::complex<double> r3m = std::conj(r3p);
    const std::complex<double> r23p = std::polar(1.0, 2.0 * kPi / 3.0);
    const std::complex<double> r23m = std::conj(r23p);

    ComplexAiryPair out;
    out.ai = r3m * ai_m + r3p * ai_p;
    out.aip = -(r23m * aip_m + r23p * aip_p);
    return out;
}

// Real-axis shortcut of the same connection identity: the two rotated terms
// are conjugates, so one series evaluation suffices.
AiryPair asymptotic_neg_pair(double x) {
    const double w = -x;
    const dd r{w, 0.0};
    const dd rho = dd_div(dd_mul(dd_mul(r, dd_sqrt(r)), 2.0), 3.0);
    const double phi = dd_mod_2pi(rho);
    std::complex<double> sup, svp;
    uv_series(std::complex<double>(0.0, rho.hi), sup, svp);
    const double w14 = std::sqrt(std::sqrt(w));
    const double ca = std::cos(phi - kPi / 4.0);
    const double sa = std::sin(phi - kPi / 4.0);
    const double cb = std::cos(phi - 3.0 * kPi / 4.0);
    const double sb = std::sin(phi - 3.0 * kPi / 4.0);
    return {(ca * sup.real() + sa * sup.imag()) / (kSqrtPi * w14),
            w14 * (cb * svp.real() + sb * svp.imag()) / kSqrtPi};
}

} // namespace airy_detail

namespace {

const AnchorTable& anchors() {
    static const AnchorTable table = [] {
        AnchorTable t{};
        double buf[32];
        // Positive side, marching down from the asymptotic values at x = 12.
        // Downward steps suppress any Bi contamination, so the march is stable.
        AiryPair p = airy_detail::asymptotic_pos_pair(12.0);
        double y = p.ai, yp = p.aip;
        for (int k = 0;; ++k) {
            const double x = 12.0 - 0.25 * k;
            if (k % 2 == 0) {
                const int i = static_cast<int>(std::lround((x - 3.0) * 2.0));
                taylor_coeffs(x, y, yp, t.pos[i].data(), AnchorTable::kOrder);
            }
            if (x <= 3.0) break;
            taylor_coeffs(x, y, yp, buf, 32);
            taylor_eval(buf, 32, -0.25, y, yp);
        }
        // Negative side, marching up from x = -12.
        p = airy_detail::asymptotic_neg_pair(-12.0);
        y = p.ai;
        yp = p.aip;
        for (int k = 0;; ++k) {
            const double x = -12.0 + 0.25 * k;
            if (k % 2 == 0) {
                const int i = static_cast<int>(std::lround((x + 12.0) * 2.0));
                taylor_coeffs(x, y, yp, t.neg[i].data(), AnchorTable::kOrder);
            }
            if (x >= -5.0) break;
            taylor_coeffs(x, y, yp, buf, 32);
            taylor_eval(buf, 32, 0.25, y, yp);
        }
        return t;
    }();
    return table;
}

} // namespace

AiryPair airy_ai_pair(double x) {
    if (!std::isfinite(x)) throw DomainError("airy_ai: non-finite argument");
    if (x >= -5.0 && x <= 3.0) return airy_detail::maclaurin_pair(x);
    if (x > 3.0 && x < 12.0) return airy_detail::anchored_pair(x);
    if (x >= 12.0) return airy_detail::asymptotic_pos_pair(x);
    if (x > -12.0) return airy_detail::anchored_pair(x);
    return airy_detail::asymptotic_neg_pair(x);
}

double airy_ai(double x) { return airy_ai_pair(x).ai; }

double airy_ai_prime(double x) { return airy_ai_pair(x).aip; }

ComplexAiryPair airy_ai_pair(std::complex<double> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("airy_ai: non-finite argument");
    if (z.imag() == 0.0) {
        const AiryPair p = airy_ai_pair(z.real());
        return {std::complex<double>(p.ai, 0.0), std::complex<double>(p.aip, 0.0)};
    }
    const double az = std::abs(z);
    // Maclaurin only away from the positive real axis: there Ai decays like
    // e^{-zeta} while the series terms peak at e^{+zeta}, losing 2 zeta digits.
    if (az <= 6.0 && z.real() <= 3.0) return airy_detail::maclaurin_pair(z);
    if (az <= 6.0) return airy_detail::anchored_pair(z);
    if (std::abs(z.imag()) <= 3.0 && std::abs(z.real()) <= 12.0)
        return airy_detail::anchored_pair(z);
    if (z.real() < -12.0 && std::abs(z.imag()) <= 3.0)
        return airy_detail::asymptotic_neg_pair(z);
    if (az > 12.0 && std::abs(std::arg(z)) <= 1.9)
        return airy_detail::asymptotic_pos_pair(z);
    throw DomainError("airy_ai: argument outside supported complex domain");
}

std::complex<double> airy_ai(std::complex<double> z) { return airy_ai_pair(z).ai; }

std::complex<double> airy_ai_prime(std::complex<double> z) { return airy_ai_pair(z).aip; }

double airy_zero(int n) {
    if (n < 1) throw DomainError("airy_zero: index must be >= 1");
    const double t = 3.0 * kPi * (4.0 * n - 1.0) / 8.0;
    const double it2 = 1.0 / (t * t);
    double lam = std::cbrt(t * t) *
                 (1.0 + it2 * (5.0 / 48.0 + it2 * (-5.0 / 36.0 + it2 * (77125.0 / 82944.0))));
    for (int it = 0; it < 12; ++it) {
        const AiryPair p = airy_ai_pair(-lam);
        const double step = p.ai / p.aip;
        lam += step;
        if (std::abs(step) <= 1e-15 * lam) break;
    }
    return lam;
}

ZeroTable airy_zeros(int n_max) {
    if (n_max < 1) throw DomainError("airy_zeros: count must be >= 1");
    if (n_max > 5000000) throw CapacityError("airy_zeros: zero table too large");
    ZeroTable table;
    table.lambda.resize(n_max);
    table.aip.resize(n_max);
    for (int n = 1; n <= n_max; ++n) {
        double lam = airy_zero(n);
        AiryPair p = airy_ai_pair(-lam);
        // |Ai(-lam)| / |Ai'(-lam)| is the distance to the true zero. The
        // 1e-13 target is below one ulp of lam once lam > 1024, so the bound
        // is relaxed to the representable limit there.
        double bound = std::max(1e-13, 1.25 * (std::nextafter(lam, INFINITY) - lam));
        if (std::abs(p.ai) > bound * std::abs(p.aip)) {
            lam += p.ai / p.aip;
            p = airy_ai_pair(-lam);
            if (std::abs(p.ai) > bound * std::abs(p.aip))
                throw ConvergenceError("airy_zeros: residual contract failed at n=" +
                                       std::to_string(n));
        }
        table.lambda[n - 1] = lam;
        table.aip[n - 1] = p.aip;
        if (n > 1 && !(table.lambda[n - 1] > table.lambda[n - 2]))
            throw ConvergenceError("airy_zeros: zeros not strictly increasing at n=" +
                                   std::to_string(n));
    }
    return table;
}

} // namespace qbounce
