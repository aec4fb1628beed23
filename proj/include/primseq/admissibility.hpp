#pragma once

#include <primseq/distribution.hpp>
#include <primseq/lp.hpp>
#include <primseq/polynomial.hpp>
#include <primseq/rational.hpp>
#include <primseq/roots.hpp>
#include <primseq/sequence.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace primseq {

/// rows[k][n] = (-1)^k (Delta^k gamma)_n for n = 0..m-k, built exactly by
/// the forward-difference recurrence.
struct DifferenceTable {
    std::vector<std::vector<Rational>> rows;
};

inline DifferenceTable difference_table(const NormalizedSeq& g, std::size_t K) {
    if (K > g.order()) throw DomainError("difference_table: requires K <= m");
    DifferenceTable t;
    t.rows.push_back(g.gamma);
    for (std::size_t k = 1; k <= K; ++k) {
        const auto& prev = t.rows.back();
        std::vector<Rational> row(prev.size() - 1);
        for (std::size_t n = 0; n + 1 < prev.size(); ++n)
            row[n] = prev[n] - prev[n + 1];
        t.rows.push_back(std::move(row));
    }
    return t;
}

struct CmViolation {
    std::size_t n;
    std::size_t k;
    Rational value;
};

/// Complete-monotonicity screen on the prefix: every computable signed
/// difference (-1)^k (Delta^k gamma)_n with n + k <= m must be nonnegative.
/// Necessary only; a prefix can pass and still fail the Hankel conditions.
inline std::vector<CmViolation> check_cm_prefix(const NormalizedSeq& g) {
    DifferenceTable t = difference_table(g, g.order());
    std::vector<CmViolation> out;
    for (std::size_t k = 0; k < t.rows.size(); ++k)
        for (std::size_t n = 0; n < t.rows[k].size(); ++n)
            if (t.rows[k][n] < 0) out.push_back({n, k, t.rows[k][n]});
    return out;
}

namespace adm_detail {

using Matrix = std::vector<std::vector<Rational>>;

/// Monic characteristic polynomial coefficients c_0..c_{n-1} of det(tI - M)
/// via the Faddeev-LeVerrier recurrence.
inline std::vector<Rational> char_poly(const Matrix& M) {
    const std::size_t n = M.size();
    std::vector<Rational> coeffs(n);
    Matrix Mk(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) Mk[i][i] = 1;  // M_0 = I
    Matrix prod = Mk;
    for (std::size_t k = 1; k <= n; ++k) {
        // prod = M * Mk
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Rational acc = 0;
                for (std::size_t l = 0; l < n; ++l) acc += M[i][l] * Mk[l][j];
                prod[i][j] = acc;
            }
        Rational trace = 0;
        for (std::size_t i = 0; i < n; ++i) trace += prod[i][i];
        Rational ck = -trace / Rational(k);
        coeffs[n - k] = ck;
        Mk = prod;
        for (std::size_t i = 0; i < n; ++i) Mk[i][i] += ck;
    }
    return coeffs;
}

/// Exact PSD test for a symmetric rational matrix: all eigenvalues are
/// nonnegative iff the characteristic coefficients weakly alternate,
/// (-1)^j c_{n-j} >= 0. Handles singular boundary cases that leading-minor
/// tests miss.
inline bool is_psd(const Matrix& M) {
    if (M.empty()) return true;
    std::vector<Rational> c = char_poly(M);
    const std::size_t n = M.size();
    for (std::size_t j = 1; j <= n; ++j) {
        const Rational& coeff = c[n - j];
        bool ok = (j % 2 == 0) ? coeff >= 0 : coeff <= 0;
        if (!ok) return false;
    }
    return true;
}

}  // namespace adm_detail

namespace adm_detail {

/// One nonzero kernel vector of a singular symmetric matrix, or empty.
inline std::vector<Rational> kernel_vector(Matrix M) {
    const std::size_t n = M.size();
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t p = row;
        while (p < n && M[p][col] == 0) ++p;
        if (p == n) continue;
        std::swap(M[p], M[row]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == row || M[r][col] == 0) continue;
            Rational f = M[r][col] / M[row][col];
            for (std::size_t c2 = col; c2 < n; ++c2) M[r][c2] -= f * M[row][c2];
        }
        pivot_col.push_back(col);
        ++row;
    }
    if (pivot_col.size() == n) return {};
    // first free column gives a kernel vector
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    std::size_t free_col = 0;
    while (is_pivot[free_col]) ++free_col;
    std::vector<Rational> v(n, Rational(0));
    v[free_col] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r)
        v[pivot_col[r]] = -M[r][free_col] / M[r][pivot_col[r]];
    return v;
}

inline std::vector<Integer> divisors_capped(Integer n) {
    if (n < 0) n = -n;
    std::vector<Integer> out;
    if (n == 0 || n > 1000000000) return out;
    for (Integer d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            out.push_back(n / d);
        }
    }
    return out;
}

}  // namespace adm_detail

/// Support recovery for boundary prefixes: when the Hankel matrix of the
/// normalized sequence is singular, any representing measure is supported
/// on roots of a kernel polynomial. Returns its rational roots in [0, 1]
/// (normalized coordinates); empty when the matrix is regular or the roots
/// are not rational.
inline std::vector<Rational> hankel_kernel_support(const NormalizedSeq& g) {
    const std::size_t m = g.order();
    std::size_t size = m / 2 + 1;
    adm_detail::Matrix H(size, std::vector<Rational>(size));
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) H[i][j] = g.gamma[i + j];
    std::vector<Rational> kernel = adm_detail::kernel_vector(std::move(H));
    if (kernel.empty()) return {};

    root_detail::IPoly k_int = root_detail::integer_primitive(kernel);
    std::vector<Rational> roots;
    // deflate roots at zero, then apply the rational root theorem
    std::size_t low = 0;
    while (low < k_int.size() && k_int[low] == 0) ++low;
    if (low > 0 && low < k_int.size()) roots.push_back(Rational(0));
    if (low >= k_int.size() || k_int.size() - low < 2) return roots;
    const Integer& a0 = k_int[low];
    const Integer& lead = k_int.back();
    std::vector<Integer> ps = adm_detail::divisors_capped(a0);
    std::vector<Integer> qs = adm_detail::divisors_capped(lead);
    auto k_poly = [&](const Rational& y) {
        Rational acc = 0;
        for (std::size_t i = k_int.size(); i-- > 0;) acc = acc * y + Rational(k_int[i]);
        return acc;
    };
    for (const Integer& p : ps) {
        for (const Integer& q : qs) {
            Rational cand(p, q);
            if (cand > 1) continue;
            if (k_poly(cand) == 0) roots.push_back(cand);
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

struct HankelMatrixReport {
    std::string name;
    adm_detail::Matrix matrix;
    bool psd;
};

struct HankelReport {
    std::vector<HankelMatrixReport> matrices;
    bool ok() const {
        for (const auto& m : matrices)
            if (!m.psd) return false;
        return true;
    }
};

/// Classical truncated Hausdorff conditions on the normalized prefix, with
/// the matrix choices determined by the parity of m:
///   m = 2k:   (gamma_{i+j})_{0..k}  and  (gamma_{i+j+1} - gamma_{i+j+2})_{0..k-1}
///   m = 2k+1: (gamma_{i+j+1})_{0..k} and (gamma_{i+j} - gamma_{i+j+1})_{0..k}
inline HankelReport hankel_check(const NormalizedSeq& g) {
    const std::size_t m = g.order();
    if (m < 1) throw DomainError("hankel_check: requires m >= 1");
    auto mat = [&](std::size_t size, auto entry) {
        adm_detail::Matrix M(size, std::vector<Rational>(size));
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j < size; ++j) M[i][j] = entry(i + j);
        return M;
    };
    HankelReport report;
    auto push = [&](std::string name, adm_detail::Matrix M) {
        bool psd = adm_detail::is_psd(M);
        report.matrices.push_back({std::move(name), std::move(M), psd});
    };
    if (m % 2 == 0) {
        std::size_t k = m / 2;
        push("hankel", mat(k + 1, [&](std::size_t s) { return g.gamma[s]; }));
        if (k >= 1)
            push("localized", mat(k, [&](std::size_t s) {
                     return g.gamma[s + 1] - g.gamma[s + 2];
                 }));
    } else {
        std::size_t k = (m - 1) / 2;
        push("shifted", mat(k + 1, [&](std::size_t s) { return g.gamma[s + 1]; }));
        push("difference", mat(k + 1, [&](std::size_t s) {
                 return g.gamma[s] - g.gamma[s + 1];
             }));
    }
    return report;
}

enum class Verdict { Rejected, PassesNecessary, CertifiedTruncated };

/// Result of truncated-prefix certification. CERTIFIED carries an atomic
/// witness whose primitive prefix reproduces the input exactly; REJECTED
/// carries a degree <= m polynomial in the (b-x) basis, certified
/// nonnegative on [a,b], whose pairing with the prefix is negative.
struct AdmissibilityReport {
    Verdict verdict;
    std::optional<FiniteAtomic> witness;
    std::optional<Polynomial> certificate;
    std::optional<Rational> certificate_pairing;
    std::size_t refinements = 0;
};

inline std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Rejected: return "REJECTED";
    case Verdict::PassesNecessary: return "PASSES_NECESSARY";
    case Verdict::CertifiedTruncated: return "CERTIFIED_TRUNCATED";
    }
    return "?";
}

/// Feasibility certification of the prefix as a truncated moment problem
/// over a rational grid. A feasible grid LP yields an exact atomic witness;
/// an infeasible one yields a Farkas polynomial which, when certified
/// nonnegative on the whole interval, rejects the prefix outright. When the
/// polynomial dips negative off-grid, the dip locations are added to the
/// grid and the solve repeats; if the loop cannot decide within its cap the
/// honest verdict is PASSES_NECESSARY.
inline AdmissibilityReport certify_truncated(const PrimitiveSeq& ps,
                                             std::size_t grid_size,
                                             std::vector<Rational> extra_points = {},
                                             std::size_t max_refinements = 60) {
    const std::size_t m = ps.order();
    if (grid_size < m + 1)
        throw DomainError("certify_truncated: grid_size must be at least m+1");
    const Rational& a = ps.interval().a;
    const Rational& b = ps.interval().b;
    Rational len = b - a;

    // Work in normalized coordinates y = (b - x)/(b - a) on [0, 1].
    NormalizedSeq g = gamma_unchecked(ps);
    std::vector<Rational> grid;
    for (std::size_t k = 0; k < grid_size; ++k)
        grid.push_back(Rational(k) / Rational(grid_size - 1));
    for (const Rational& x : extra_points) {
        if (x < a || x > b)
            throw DomainError("certify_truncated: injected point outside interval");
        grid.push_back((b - x) / len);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    AdmissibilityReport report;
    bool tried_kernel_support = false;
    for (std::size_t round = 0; round <= max_refinements; ++round) {
        LinearProgram lp;
        lp.sense = Sense::Minimize;
        lp.objective.assign(grid.size(), Rational(0));
        for (std::size_t j = 0; j <= m; ++j) {
            LpRow row;
            row.rel = Relation::Equal;
            row.rhs = g.gamma[j];
            row.coeffs.resize(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i)
                row.coeffs[i] = pow_int(grid[i], static_cast<long>(j));
            lp.rows.push_back(std::move(row));
        }
        LpSolution sol = solve_lp(lp);
        report.refinements = round;
        if (sol.status == LpStatus::Optimal) {
            std::vector<Rational> pts, ws;
            for (std::size_t i = grid.size(); i-- > 0;) {
                if (sol.primal[i] > 0) {
                    pts.push_back(b - len * grid[i]);  // descending y is ascending x
                    ws.push_back(sol.primal[i]);
                }
            }
            FiniteAtomic witness(ps.interval(), std::move(pts), std::move(ws));
            if (!(eps_atomic(witness, m) == ps))
                throw DomainError("certify_truncated: witness failed to reproduce the prefix");
            report.verdict = Verdict::CertifiedTruncated;
            report.witness = std::move(witness);
            return report;
        }

        // Infeasible on this grid. Boundary prefixes may need atoms the
        // grid lacks; the Hankel kernel polynomial names them when they
        // are rational.
        if (!tried_kernel_support) {
            tried_kernel_support = true;
            std::vector<Rational> ys = hankel_kernel_support(g);
            if (!ys.empty()) {
                grid.insert(grid.end(), ys.begin(), ys.end());
                std::sort(grid.begin(), grid.end());
                grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
                continue;
            }
        }
        // Farkas weights f_j over the moment rows give q(y) = -sum f_j y^j
        // with q >= 0 on the grid and <q, gamma> < 0. Off-grid dips are fixed
        // by shifting q up by a certified bound on its minimum; when the
        // shifted pairing stays negative the rejection is proven, otherwise
        // the dips refine the grid for the next round.
        std::vector<Rational> qc(m + 1);
        for (std::size_t j = 0; j <= m; ++j) qc[j] = -sol.farkas[j];
        Polynomial q_y(qc);
        std::vector<Rational> dips =
            poly_negative_witnesses(q_y, Rational(0), Rational(1));
        Rational shift = 0;
        if (!dips.empty()) {
            Rational width =
                Rational(1) / pow_int(Rational(2), 6 + static_cast<long>(round));
            PolyMinResult mr =
                poly_min_on_interval(q_y, Rational(0), Rational(1), width);
            shift = -mr.value_lower_bound;  // > 0 here
        }
        Rational pairing_y = shift;  // gamma_0 = 1 pairs with the shift
        for (std::size_t j = 0; j <= m; ++j) pairing_y += qc[j] * g.gamma[j];
        if (pairing_y < 0) {
            // q + shift is nonnegative on the whole interval and still pairs
            // negatively; express it in the (b-x) basis.
            qc[0] += shift;
            std::vector<Rational> cx(m + 1);
            for (std::size_t j = 0; j <= m; ++j)
                cx[j] = qc[j] / pow_int(len, static_cast<long>(j));
            Rational pairing = 0;
            for (std::size_t j = 0; j <= m; ++j)
                pairing += cx[j] * Rational(factorial(static_cast<unsigned>(j))) *
                           ps.eps(j);
            report.verdict = Verdict::Rejected;
            report.certificate = Polynomial(std::move(cx), Basis::BMinusX, b);
            report.certificate_pairing = std::move(pairing);
            return report;
        }
        grid.insert(grid.end(), dips.begin(), dips.end());
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }
    report.verdict = Verdict::PassesNecessary;
    return report;
}

/// Line-oriented text form of the reports, used by the CLI.
inline std::string format_report(const ElementaryReport& er) {
    std::ostringstream os;
    for (const auto& v : er.violations) {
        const char* what = v.kind == ElementaryViolation::Kind::NegativeTerm
                               ? "negative-term"
                           : v.kind == ElementaryViolation::Kind::UpperBound
                               ? "upper-bound"
                               : "log-convexity";
        os << "elementary " << what << " at " << v.index << '\n';
    }
    if (er.violations.empty()) os << "elementary ok\n";
    return os.str();
}

inline std::string format_report(const std::vector<CmViolation>& cm) {
    std::ostringstream os;
    for (const auto& v : cm)
        os << "cm violation at n=" << v.n << " k=" << v.k << " value "
           << format_rational(v.value) << '\n';
    if (cm.empty()) os << "cm ok\n";
    return os.str();
}

inline std::string format_report(const HankelReport& hr) {
    std::ostringstream os;
    for (const auto& mrep : hr.matrices)
        os << "hankel " << mrep.name << ' ' << (mrep.psd ? "psd" : "not-psd")
           << '\n';
    return os.str();
}

inline std::string format_report(const AdmissibilityReport& ar) {
    std::ostringstream os;
    os << "verdict " << verdict_name(ar.verdict) << '\n';
    if (ar.witness) {
        os << "witness";
        for (std::size_t i = 0; i < ar.witness->points.size(); ++i)
            os << ' ' << format_rational(ar.witness->points[i]) << ':'
               << format_rational(ar.witness->weights[i]);
        os << '\n';
    }
    if (ar.certificate) {
        os << "certificate";
        int deg = ar.certificate->degree();
        for (int j = 0; j <= deg; ++j)
            os << ' ' << format_rational(ar.certificate->coefficient(
                            static_cast<std::size_t>(j)));
        os << '\n';
        os << "pairing " << format_rational(*ar.certificate_pairing) << '\n';
    }
    return os.str();
}

}  // namespace primseq
