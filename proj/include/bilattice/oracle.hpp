#pragma once

#include <utility>
#include <vector>

#include "bilattice/measures.hpp"
#include "bilattice/painleve.hpp"

namespace bilattice {

/// Monic orthogonal basis data from the Stieltjes procedure: recurrence
/// coefficients plus the norms <P_n, P_n> = 1/gamma_n^2, which satisfy
/// a_n^2 = norms[n]/norms[n-1].
struct OrthoBasis {
    CoeffSeq coeffs;
    std::vector<Real> norms;

    long order() const { return static_cast<long>(norms.size()) - 1; }
};

/// Computes recurrence coefficients directly from the measure by iterated
/// weighted inner products:
///   b_n = <x P_n, P_n> / <P_n, P_n>,  a_n^2 = <P_n, P_n> / <P_{n-1}, P_{n-1}>,
/// generating P_{n+1} through the three-term recurrence.  This path never
/// touches the nonlinear recurrence systems, so it serves as an independent
/// check on them.
inline OrthoBasis stieltjes_coeffs(const DiscreteMeasure& m, long N, const PrecisionContext& ctx) {
    if (N < 0) throw ValidityError("stieltjes_coeffs requires N >= 0");
    if (static_cast<long>(m.size()) < N + 1)
        throw ValidityError("measure truncation has fewer support points than requested order");
    if (m.max_moment_order < 2 * N + 2)
        throw ValidityError("measure was truncated for moment order < 2N+2");

    const std::size_t K = m.size();
    OrthoBasis basis;
    basis.coeffs.a_sq.reserve(N + 1);
    basis.coeffs.b.reserve(N + 1);
    basis.norms.reserve(N + 1);

    std::vector<Real> prev(K, ctx.zero());
    std::vector<Real> cur(K, ctx.real(1));

    for (long n = 0; n <= N; ++n) {
        Real norm = ctx.zero();
        Real xnorm = ctx.zero();
        for (std::size_t i = 0; i < K; ++i) {
            Real sq = cur[i] * cur[i] * m.weights[i];
            norm += sq;
            xnorm += m.points[i] * sq;
        }
        if (!norm.is_finite() || !(norm > 0))
            throw RankError("norm underflow at degree " + std::to_string(n) +
                            ": truncation or precision too small");
        basis.norms.push_back(norm);
        basis.coeffs.b.push_back(xnorm / norm);
        basis.coeffs.a_sq.push_back(n == 0 ? ctx.zero() : norm / basis.norms[n - 1]);

        if (n < N) {
            const Real& bn = basis.coeffs.b[n];
            const Real& asq = basis.coeffs.a_sq[n];
            for (std::size_t i = 0; i < K; ++i) {
                Real next = (m.points[i] - bn) * cur[i] - asq * prev[i];
                prev[i] = std::move(cur[i]);
                cur[i] = std::move(next);
            }
        }
    }
    return basis;
}

/// Monic P_n(x) by forward recurrence, P_{-1} = 0, P_0 = 1.
inline Real eval_monic(const OrthoBasis& basis, long n, const Real& x) {
    if (n < 0) return Real::zero(x.precision());
    if (n > basis.order()) throw ValidityError("eval_monic beyond basis order");
    Real pm = Real::zero(x.precision());
    Real pc = Real::from_long(1, x.precision());
    for (long j = 0; j < n; ++j) {
        Real pn = (x - basis.coeffs.b[j]) * pc - basis.coeffs.a_sq[j] * pm;
        pm = std::move(pc);
        pc = std::move(pn);
    }
    return pc;
}

/// Fourier coefficients of the forward difference
///   Delta P_n = P_n(x+1) - P_n(x) = A P_{n-1} + B P_{n-2}
/// over the measure.  A must equal n (leading coefficients); B is the
/// structure coefficient, equal to a_n^2 a_{n-1}^2 / a for the generalized
/// Charlier weight.
struct StructureCoeffs {
    Real A;
    Real B;
};

inline StructureCoeffs structure_b_coeff(const OrthoBasis& basis, const DiscreteMeasure& m, long n,
                                         const PrecisionContext& ctx) {
    if (n < 2 || n > basis.order()) throw ValidityError("structure_b_coeff requires 2 <= n <= N");
    Real numA = ctx.zero();
    Real numB = ctx.zero();
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Real& x = m.points[i];
        Real dpn = eval_monic(basis, n, x + 1) - eval_monic(basis, n, x);
        numA += dpn * eval_monic(basis, n - 1, x) * m.weights[i];
        numB += dpn * eval_monic(basis, n - 2, x) * m.weights[i];
    }
    return {numA / basis.norms[n - 1], numB / basis.norms[n - 2]};
}

/// Ladder sums of the generalized Meixner weight over the measure's support,
/// with orthonormal values p_n = P_n / sqrt(<P_n,P_n>):
///   R_n = sum p_n(x) p_n(x-1) x/(gamma+x-1) w(x)       (no a_n factor)
///   T_n = sum p_n(x) p_n(x-1) (gamma-1)/(gamma+x-1) w(x)
///   r_n = a_n sum p_n(x) p_{n-1}(x-1) x/(gamma+x-1) w(x)
///   t_n = a_n sum p_n(x) p_{n-1}(x-1) (gamma-1)/(gamma+x-1) w(x)
/// The same compatibility identities hold on all three lattices:
///   R_n + T_n = 1, r_n + t_n = 0,
///   b_n = gamma - (gamma-beta) T_n + a + n - beta,
///   a_n^2 = n a - (gamma-beta) t_n.
struct LadderDiagnostics {
    Real R, T, r, t;
};

inline LadderDiagnostics ladder_diagnostics(const OrthoBasis& basis, const DiscreteMeasure& m,
                                            const FamilyParams& p, long n, const PrecisionContext& ctx) {
    if (p.family != Family::GeneralizedMeixner)
        throw ValidityError("ladder_diagnostics applies to the generalized Meixner weight");
    if (n < 1 || n > basis.order()) throw ValidityError("ladder_diagnostics requires 1 <= n <= N");
    const Real g = ctx.real(p.gamma);
    const Real inv_n = 1 / sqrt(basis.norms[n]);
    const Real inv_nm1 = 1 / sqrt(basis.norms[n - 1]);
    const Real a_n = sqrt(basis.coeffs.a_sq[n]);

    LadderDiagnostics d{ctx.zero(), ctx.zero(), ctx.zero(), ctx.zero()};
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Real& x = m.points[i];
        Real den = g + x - 1;
        if (den.is_zero()) throw PoleError("ladder factor pole on the support lattice");
        Real pn_x = inv_n * eval_monic(basis, n, x);
        Real pn_xm = inv_n * eval_monic(basis, n, x - 1);
        Real pm_xm = inv_nm1 * eval_monic(basis, n - 1, x - 1);
        Real wr = m.weights[i] * x / den;
        Real wt = m.weights[i] * (g - 1) / den;
        d.R += pn_x * pn_xm * wr;
        d.T += pn_x * pn_xm * wt;
        d.r += a_n * pn_x * pm_xm * wr;
        d.t += a_n * pn_x * pm_xm * wt;
    }
    return d;
}

/// The n real simple zeros of P_n, located by sign-change bracketing on a
/// grid finer than the smallest lattice gap (zeros interlace the support, so
/// the grid cannot skip a crossing on certified runs) and refined by
/// bisection to ~10^{-(digits-10)}.  Ascending order.
inline std::vector<Real> zeros(const OrthoBasis& basis, const DiscreteMeasure& m, long n,
                               const PrecisionContext& ctx) {
    if (n < 1 || n > basis.order()) throw ValidityError("zeros requires 1 <= n <= N");
    if (m.size() < 2) throw ValidityError("zeros requires a measure with at least two points");

    Real gap = m.points[1] - m.points[0];
    for (std::size_t i = 2; i < m.size(); ++i) gap = min(gap, m.points[i] - m.points[i - 1]);
    const Real step = gap / 4;
    const Real lo = m.points.front() - 1;
    const Real hi = m.points.back() + 1;
    const Real tol = ctx.pow10(-(ctx.digits() - 10));

    std::vector<Real> out;
    Real x_prev = lo;
    Real f_prev = eval_monic(basis, n, x_prev);
    while (x_prev < hi && static_cast<long>(out.size()) < n) {
        Real x = x_prev + step;
        Real f = eval_monic(basis, n, x);
        if (f.is_zero()) {
            out.push_back(x);
            x_prev = x + step / 1024;  // step past the exact zero before resuming the scan
            f_prev = eval_monic(basis, n, x_prev);
            continue;
        }
        if (f_prev.sign() != 0 && f.sign() != f_prev.sign()) {
            Real a = x_prev, b = x, fa = f_prev;
            while (b - a > tol * max(ctx.real(1), abs(b))) {
                Real mid = (a + b) / 2;
                Real fm = eval_monic(basis, n, mid);
                if (fm.is_zero()) {
                    a = mid;
                    b = mid;
                    break;
                }
                if (fm.sign() == fa.sign()) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            out.push_back((a + b) / 2);
        }
        x_prev = std::move(x);
        f_prev = std::move(f);
    }
    if (static_cast<long>(out.size()) != n)
        throw ZeroCountError("found " + std::to_string(out.size()) + " sign changes for degree " +
                             std::to_string(n) + ": raise precision or truncation");
    return out;
}

/// Zero-sum constraint from the trace of the truncated Jacobi matrix.
/// For 0 < beta < 2, beta != 1: sum_{k<2n} b_k > n(n-1) + n(1-beta);
/// for beta = 1: sum_{k<n} b_k > n(n-1)/2.
inline bool partial_sum_check(const CoeffSeq& coeffs, const Rational& beta, long n) {
    if (n < 1) throw ValidityError("partial_sum_check requires n >= 1");
    const bool merged = beta == Rational(1);
    const long terms = merged ? n : 2 * n;
    if (static_cast<long>(coeffs.b.size()) < terms)
        throw LengthError("partial_sum_check: not enough coefficients");
    Real s = Real::zero(coeffs.b[0].precision());
    for (long k = 0; k < terms; ++k) s += coeffs.b[k];
    if (merged) return 2 * s > n * (n - 1);
    Real bound = Real::from_long(n * (n - 1) + n, s.precision()) -
                 Real::from_long(n, s.precision()) * Real::from_rational(beta, s.precision());
    return s > bound;
}

/// Determinant by Gaussian elimination with partial pivoting (small Hankel
/// cross-checks only).
inline Real determinant(std::vector<std::vector<Real>> mat) {
    const std::size_t n = mat.size();
    if (n == 0) throw ValidityError("determinant of empty matrix");
    Real det = Real::from_long(1, mat[0][0].precision());
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (abs(mat[r][col]) > abs(mat[pivot][col])) pivot = r;
        if (mat[pivot][col].is_zero()) return Real::zero(det.precision());
        if (pivot != col) {
            std::swap(mat[pivot], mat[col]);
            det = -det;
        }
        det *= mat[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            Real f = mat[r][col] / mat[col][col];
            for (std::size_t c = col; c < n; ++c) mat[r][c] -= f * mat[col][c];
        }
    }
    return det;
}

/// Hankel determinant H_n = det(m_{i+j})_{i,j=0..n}; with `shifted_last_col`
/// the last column uses m_{i+n+1}.  H_n H_{n-2}/H_{n-1}^2 = a_n^2 and
/// H'_n/H_n = b_0 + ... + b_n give a second, moment-only route to the
/// coefficients.
inline Real hankel_det(const std::vector<Real>& moments, long n, bool shifted_last_col = false) {
    if (n < 0) return Real::from_long(1, moments.empty() ? Real::kMinPrec : moments[0].precision());
    const long need = shifted_last_col ? 2 * n + 1 : 2 * n;
    if (static_cast<long>(moments.size()) <= need)
        throw LengthError("hankel_det: not enough moments");
    std::vector<std::vector<Real>> mat(n + 1);
    for (long i = 0; i <= n; ++i) {
        mat[i].reserve(n + 1);
        for (long j = 0; j <= n; ++j) {
            long idx = i + j;
            if (shifted_last_col && j == n) idx = i + n + 1;
            mat[i].push_back(moments[idx]);
        }
    }
    return determinant(std::move(mat));
}

/// Oracle run certified by doubling both the working precision and (through
/// the tighter tail tolerance) the truncation length.
struct OracleRun {
    OrthoBasis basis;
    bool certified = false;
    long digits = 0;
    long first_uncertified = -1;
    Real max_disagreement;
};

inline OracleRun stieltjes_certified(const FamilyParams& p, const LatticeSpec& lat, long N,
                                     long base_digits = 60, long agree_exponent = 20,
                                     const std::optional<Rational>& tail_eps = {}) {
    const long digits = base_digits + 2 * N;
    OracleRun out;
    out.digits = digits;
    PrecisionContext low_ctx = tail_eps ? PrecisionContext(digits, *tail_eps) : PrecisionContext(digits);
    PrecisionContext high_ctx =
        tail_eps ? PrecisionContext(2 * digits, *tail_eps) : PrecisionContext(2 * digits);
    OrthoBasis low = stieltjes_coeffs(build_measure(p, lat, 2 * N + 2, low_ctx), N, low_ctx);
    out.basis = stieltjes_coeffs(build_measure(p, lat, 2 * N + 2, high_ctx), N, high_ctx);
    const Real tol = high_ctx.pow10(-agree_exponent);
    out.first_uncertified = first_divergence_index(low.coeffs, out.basis.coeffs, tol);
    CoeffComparison cmp = compare_coeffs(low.coeffs, out.basis.coeffs);
    out.max_disagreement = max(cmp.max_abs_da_sq, cmp.max_abs_db);
    out.certified = out.first_uncertified < 0;
    return out;
}

}  // namespace bilattice
