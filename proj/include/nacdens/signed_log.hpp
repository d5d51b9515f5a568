#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace nac {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/* Number represented as sign * exp(logmag).  The carrier for every
 * quantity whose magnitude can leave the double range (Stirling-type
 * coefficients, high generator derivatives, Bell tables). */
struct SignedLog {
    int sign = 0;             // -1, 0, +1
    double logmag = neg_inf;  // log|x|; -inf iff sign == 0

    static SignedLog zero() { return {}; }
    static SignedLog one() { return {1, 0.0}; }

    static SignedLog from_real(double x) {
        if (x == 0.0) return zero();
        return {x > 0.0 ? 1 : -1, std::log(std::fabs(x))};
    }
    /* sign attached to an externally computed log magnitude */
    static SignedLog from_log(int sign, double logmag) {
        if (sign == 0 || logmag == neg_inf) return zero();
        return {sign, logmag};
    }

    double to_real() const { return sign == 0 ? 0.0 : sign * std::exp(logmag); }
    bool is_zero() const { return sign == 0; }

    SignedLog operator-() const { return {-sign, logmag}; }

    friend SignedLog operator*(const SignedLog& a, const SignedLog& b) {
        if (a.sign == 0 || b.sign == 0) return zero();
        return {a.sign * b.sign, a.logmag + b.logmag};
    }
    SignedLog& operator*=(const SignedLog& o) { return *this = *this * o; }

    /* integer power (n >= 0) */
    SignedLog pow_int(long n) const {
        if (n == 0) return one();
        if (sign == 0) return zero();
        return {(sign < 0 && (n & 1L)) ? -1 : 1, logmag * static_cast<double>(n)};
    }
};

/* Streaming log-sum-exp of nonnegative-magnitude terms: keeps the running
 * maximum and the rescaled mantissa sum. */
class LogSumAcc {
public:
    void add_log(double lx) {
        if (lx == neg_inf) return;
        if (!started_) {
            m_ = lx;
            s_ = 1.0;
            started_ = true;
        } else if (lx <= m_) {
            s_ += std::exp(lx - m_);
        } else {
            s_ = s_ * std::exp(m_ - lx) + 1.0;
            m_ = lx;
        }
    }
    bool empty() const { return !started_; }
    double total_log() const { return started_ ? m_ + std::log(s_) : neg_inf; }

private:
    bool started_ = false;
    double m_ = neg_inf;
    double s_ = 0.0;
};

/* Worst relative residual observed when oppositely signed accumulations
 * nearly cancel.  1 = no cancellation anywhere, 0 = total loss. */
struct Cancellation {
    double worst = 1.0;
    void note(double rel) { worst = std::min(worst, rel); }
    void merge(const Cancellation& o) { worst = std::min(worst, o.worst); }
    bool flagged() const { return worst < 1e-8; }
};

/* Sign-separated accumulator: positive and negative magnitudes are summed
 * independently in log space and subtracted once at the end, which makes the
 * precision actually lost measurable. */
class SignedLogAcc {
public:
    void add(const SignedLog& v) {
        if (v.sign > 0)
            pos_.add_log(v.logmag);
        else if (v.sign < 0)
            neg_.add_log(v.logmag);
    }
    void add_log(int sign, double logmag) { add(SignedLog::from_log(sign, logmag)); }

    /* If `cancel` is given, the relative residual |sum| / max(|pos|, |neg|)
     * is recorded whenever both sides are populated. */
    SignedLog result(Cancellation* cancel = nullptr) const {
        const double p = pos_.total_log();
        const double n = neg_.total_log();
        if (pos_.empty() && neg_.empty()) return SignedLog::zero();
        if (neg_.empty()) return SignedLog::from_log(1, p);
        if (pos_.empty()) return SignedLog::from_log(-1, n);
        const double hi = std::max(p, n), lo = std::min(p, n);
        if (p == n) {
            if (cancel) cancel->note(0.0);
            return SignedLog::zero();
        }
        const double diff = hi + std::log1p(-std::exp(lo - hi));
        if (cancel) cancel->note(std::exp(diff - hi));
        return SignedLog::from_log(p > n ? 1 : -1, diff);
    }

private:
    LogSumAcc pos_, neg_;
};

/* log(sum exp(x_i)) over a plain array, max-shifted */
inline double log_sum_exp(const double* x, std::size_t n) {
    double m = neg_inf;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
    if (m == neg_inf) return neg_inf;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::exp(x[i] - m);
    return m + std::log(s);
}

}  // namespace nac
