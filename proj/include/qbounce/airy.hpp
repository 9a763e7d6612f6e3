#pragma once
#include <complex>
#include <vector>

namespace qbounce {

struct AiryPair {
    double ai;
    double aip;
};

struct ComplexAiryPair {
    std::complex<double> ai;
    std::complex<double> aip;
};

// Ai and Ai' on the real axis. Relative accuracy ~1e-13 for |x| <= 50
// (relative to the oscillation envelope on the negative axis). For large
// positive x the value underflows smoothly to zero.
double airy_ai(double x);
double airy_ai_prime(double x);
AiryPair airy_ai_pair(double x);

// Ai and Ai' for complex arguments. Supported domain: |z| <= 6, or
// |Im z| <= 3 with any Re z (asymptotic branches engage for |Re z| > 12),
// or |z| > 12 with |arg z| <= 1.9. Outside: DomainError. Arguments whose
// result magnitude would overflow a double: RangeError.
std::complex<double> airy_ai(std::complex<double> z);
std::complex<double> airy_ai_prime(std::complex<double> z);
ComplexAiryPair airy_ai_pair(std::complex<double> z);

// n-th zero of Ai as a positive magnitude lambda_n (Ai(-lambda_n) = 0),
// n >= 1. Asymptotic seed refined by Newton iterations to the residual
// contract |Ai(-lambda_n)| <= 1e-13 |Ai'(-lambda_n)| wherever that bound is
// representable (it is sub-ulp past lambda = 1024; placement is then within
// 1.25 ulp of the true zero, the double-precision limit).
double airy_zero(int n);

struct ZeroTable {
    std::vector<double> lambda;   // lambda_1 .. lambda_n, strictly increasing
    std::vector<double> aip;      // Ai'(-lambda_n)
};

ZeroTable airy_zeros(int n_max);

namespace airy_detail {
// Individual branch evaluators, exposed for cross-validation tests and for
// the kernel benchmark. Dispatch thresholds: real Maclaurin on [-5, 3],
// anchored Taylor on (3, 12) and (-12, -5), asymptotics beyond.
AiryPair maclaurin_pair(double x);
ComplexAiryPair maclaurin_pair(std::complex<double> z);
AiryPair anchored_pair(double x);
ComplexAiryPair anchored_pair(std::complex<double> z);
AiryPair asymptotic_pos_pair(double x);
AiryPair asymptotic_neg_pair(double x);
ComplexAiryPair asymptotic_pos_pair(std::complex<double> z);
ComplexAiryPair asymptotic_neg_pair(std::complex<double> z);
} // namespace airy_detail

} // namespace qbounce
