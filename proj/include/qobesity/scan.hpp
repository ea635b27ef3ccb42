#pragma once

// Parameter sweeps over the Ising coupling lambda and the XXZ anisotropy
// Delta: obesity, steering-ellipsoid volume, optimal filtering, numerical
// derivatives and kink detection.

#include "qobesity/csv.hpp"
#include "qobesity/ed_oracle.hpp"
#include "qobesity/ellipsoid.hpp"
#include "qobesity/filtering.hpp"
#include "qobesity/ising_thermo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace qobesity::scan {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Grids and derivatives

/// lo, lo + step, ..., up to hi (inclusive within step / 1000).
inline std::vector<double> uniform_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi > lo))
        throw Error(ErrorCode::InvalidGrid, "need lo < hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-3)) + 1;
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i)
        xs[i] = lo + static_cast<double>(i) * step;
    return xs;
}

inline double grid_step(std::span<const double> xs) {
    if (xs.size() < 3)
        throw Error(ErrorCode::InvalidGrid, "need at least 3 grid points");
    const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    if (!(h > 0.0))
        throw Error(ErrorCode::InvalidGrid, "grid must be increasing");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (std::abs(xs[i + 1] - xs[i] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw Error(ErrorCode::InvalidGrid, "grid is not uniform at index " + std::to_string(i));
    return h;
}

/// Central differences inside, second-order one-sided differences at the ends.
inline std::vector<double> finite_difference(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw Error(ErrorCode::InvalidGrid, "xs and ys differ in length");
    const double h = grid_step(xs);
    const std::size_t n = ys.size();
    std::vector<double> d(n);
    d[0] = (-3.0 * ys[0] + 4.0 * ys[1] - ys[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (ys[i + 1] - ys[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * ys[n - 1] - 4.0 * ys[n - 2] + ys[n - 3]) / (2.0 * h);
    return d;
}

struct KinkReport {
    double param_hat = 0.0;
    double score = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

/// Locates the largest jump of the derivative samples between neighbouring
/// grid points. Pairs touching a NaN are skipped. The score is the jump
/// divided by the median jump.
inline KinkReport detect_kink(std::span<const double> xs, std::span<const double> dys) {
    if (xs.size() != dys.size() || xs.size() < 5)
        throw Error(ErrorCode::InvalidGrid, "kink detection needs at least 5 points");
    std::vector<double> jumps;
    std::size_t best = 0;
    double best_jump = -1.0;
    for (std::size_t i = 0; i + 1 < dys.size(); ++i) {
        if (!std::isfinite(dys[i]) || !std::isfinite(dys[i + 1]))
            continue;
        const double j = std::abs(dys[i + 1] - dys[i]);
        jumps.push_back(j);
        if (j > best_jump) {
            best_jump = j;
            best = i;
        }
    }
    if (jumps.size() < 3 || best_jump <= 0.0)
        throw Error(ErrorCode::DegenerateInput, "derivative is constant; no kink to locate");
    std::nth_element(jumps.begin(), jumps.begin() + static_cast<std::ptrdiff_t>(jumps.size() / 2), jumps.end());
    const double median = jumps[jumps.size() / 2];
    KinkReport r;
    r.lo = xs[best];
    r.hi = xs[best + 1];
    r.param_hat = 0.5 * (r.lo + r.hi);
    r.score = median > 0.0 ? best_jump / median : std::numeric_limits<double>::infinity();
    return r;
}

// ---------------------------------------------------------------------------
// Records

struct ScanRecord {
    double param = 0.0;
    double omega = kNaN;
    double d_omega = kNaN;
    double gamma_b = kNaN;
    double d_gamma_b = kNaN;
    double volume = kNaN;
    double d_volume = kNaN;
    double omega_filtered = kNaN;
    double d_omega_filtered = kNaN;
    double filter_fn_direct = kNaN;  // Omega^F / Omega from the filtered state
    double filter_fn_paper = kNaN;   // |B + sqrt(A+ A-)|^(-1/2) / sqrt(2)
    double filter_fn_theorem = kNaN; // 1 / trace norm

    // Diagnostics, not part of the CSV output.
    double trace_norm = kNaN;
    double det_product = kNaN; // |det O_A| |det O_B|
    double filtered_bloch_a = kNaN;
    double filtered_bloch_b = kNaN;
    double c1 = kNaN, c2 = kNaN, c3 = kNaN; // Bell-diagonal parameters (XXZ)
    std::string status;                     // empty when every quantity is defined
    bool numerical_failure = false;         // quadrature or eigensolver gave up
};

/// Ellipsoid-volume derivative rebuilt from Omega and gamma_b and their
/// derivatives, for V = (4 pi / 3) gamma^2 Omega^4:
///   dV = (8 pi / 3) gamma Omega^3 (Omega dgamma + 2 gamma dOmega).
inline double volume_derivative_from_parts(const ScanRecord& r) {
    return 8.0 * kPi / 3.0 * r.gamma_b * std::pow(r.omega, 3) *
           (r.omega * r.d_gamma_b + 2.0 * r.gamma_b * r.d_omega);
}

/// Decomposition (16 pi / 3) gamma^3 Omega^3 (Omega dgamma + gamma dOmega),
/// which differentiates the gamma^4 volume form.
inline double volume_derivative_gamma4(const ScanRecord& r) {
    return 16.0 * kPi / 3.0 * std::pow(r.gamma_b, 3) * std::pow(r.omega, 3) *
           (r.omega * r.d_gamma_b + r.gamma_b * r.d_omega);
}

inline void append_status(ScanRecord& r, const Error& e) {
    if (!r.status.empty())
        r.status += "; ";
    r.status += e.what();
    r.numerical_failure = r.numerical_failure || is_numerical(e.code());
}

/// Fills d_omega, d_gamma_b, d_volume and d_omega_filtered.
inline void differentiate(std::vector<ScanRecord>& recs) {
    std::vector<double> xs, om, ga, vo, of;
    for (const auto& r : recs) {
        xs.push_back(r.param);
        om.push_back(r.omega);
        ga.push_back(r.gamma_b);
        vo.push_back(r.volume);
        of.push_back(r.omega_filtered);
    }
    const auto d_om = finite_difference(xs, om);
    const auto d_ga = finite_difference(xs, ga);
    const auto d_vo = finite_difference(xs, vo);
    const auto d_of = finite_difference(xs, of);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        recs[i].d_omega = d_om[i];
        recs[i].d_gamma_b = d_ga[i];
        recs[i].d_volume = d_vo[i];
        recs[i].d_omega_filtered = d_of[i];
    }
}

/// Evaluates fn at every grid value, spreading the points over threads.
template <typename Fn>
std::vector<ScanRecord> evaluate_grid(const std::vector<double>& grid, Fn&& fn, unsigned threads = 0) {
    std::vector<ScanRecord> out(grid.size());
    if (threads == 0)
        threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t)
        jobs.push_back(std::async(std::launch::async, [&, t] {
            for (std::size_t i = t; i < grid.size(); i += threads)
                out[i] = fn(grid[i]);
        }));
    for (auto& j : jobs)
        j.get();
    return out;
}

// ---------------------------------------------------------------------------
// Ising-Lenz chain

struct IsingScanOptions {
    double lo = 0.0;
    double hi = 2.0;
    double step = 0.01;
    int k = 1;
    double quad_tol = ising::kDefaultQuadTol;
    std::size_t max_evaluations = ising::kDefaultQuadBudget;
    bool with_filter = true;
    /// Adds a 10x finer grid on [0.9, 1.1].
    bool densify = false;
    unsigned threads = 0;
};

inline ScanRecord ising_point(double lambda, int k, double quad_tol, bool with_filter,
                              std::size_t budget = ising::kDefaultQuadBudget) {
    ScanRecord r;
    r.param = lambda;
    std::optional<ising::IsingPairState> pair;
    try {
        pair = ising::ising_pair_state(lambda, k, quad_tol, budget);
    } catch (const Error& e) {
        append_status(r, e);
        return r;
    }
    const auto corr = correlation_matrix(pair->rho);
    r.omega = obesity(corr);
    try {
        r.gamma_b = gamma_b(corr);
        r.volume = ellipsoid_volume(corr);
    } catch (const Error& e) {
        append_status(r, e);
    }
    if (!with_filter)
        return r;
    r.filter_fn_paper = ising::filter_function_sqrt_form(*pair);
    try {
        const auto f = ising_optimal_filter(pair->A_plus, pair->A_minus);
        const auto filtered = apply_filter(pair->rho, f);
        const auto rf = correlation_matrix(filtered.state);
        r.omega_filtered = obesity(rf);
        r.trace_norm = filtered.trace_norm;
        r.det_product = f.det_a() * f.det_b();
        r.filter_fn_theorem = 1.0 / filtered.trace_norm;
        r.filter_fn_direct = r.omega > 0.0 ? r.omega_filtered / r.omega : kNaN;
        r.filtered_bloch_a = rf.a().norm();
        r.filtered_bloch_b = rf.b().norm();
    } catch (const Error& e) {
        append_status(r, e);
    }
    return r;
}

inline std::vector<ScanRecord> ising_scan_uniform(const std::vector<double>& grid, const IsingScanOptions& opt) {
    auto recs = evaluate_grid(
        grid, [&](double x) { return ising_point(x, opt.k, opt.quad_tol, opt.with_filter, opt.max_evaluations); }, opt.threads);
    differentiate(recs);
    return recs;
}

inline std::vector<ScanRecord> ising_scan(const IsingScanOptions& opt = {}) {
    if (opt.lo < 0.0)
        throw Error(ErrorCode::InvalidGrid, "lambda range must start at >= 0");
    auto recs = ising_scan_uniform(uniform_grid(opt.lo, opt.hi, opt.step), opt);
    if (!opt.densify)
        return recs;
    const double flo = std::max(opt.lo, 0.9), fhi = std::min(opt.hi, 1.1);
    if (fhi - flo < 3 * opt.step / 10.0)
        return recs;
    auto fine = ising_scan_uniform(uniform_grid(flo, fhi, opt.step / 10.0), opt);
    std::erase_if(recs, [&](const ScanRecord& r) { return r.param >= flo - 1e-12 && r.param <= fhi + 1e-12; });
    recs.insert(recs.end(), fine.begin(), fine.end());
    std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) { return a.param < b.param; });
    return recs;
}

inline constexpr const char* kIsingHeader =
    "lambda,omega,d_omega,gamma_b,d_gamma_b,volume,d_volume,omega_filtered,d_omega_filtered,"
    "filter_fn_direct,filter_fn_paper,filter_fn_theorem";

inline void write_ising_csv(std::ostream& out, const std::vector<ScanRecord>& recs) {
    out << kIsingHeader << '\n';
    for (const auto& r : recs) {
        const double v[] = {r.param, r.omega, r.d_omega, r.gamma_b, r.d_gamma_b, r.volume, r.d_volume,
                            r.omega_filtered, r.d_omega_filtered, r.filter_fn_direct, r.filter_fn_paper,
                            r.filter_fn_theorem};
        for (std::size_t i = 0; i < std::size(v); ++i)
            out << (i ? "," : "") << csv::format_double(v[i]);
        out << '\n';
    }
}

inline std::vector<ScanRecord> read_ising_csv(std::istream& in) {
    std::vector<ScanRecord> recs;
    for (const auto& f : csv::read_table(in, kIsingHeader)) {
        ScanRecord r;
        double* dst[] = {&r.param, &r.omega, &r.d_omega, &r.gamma_b, &r.d_gamma_b, &r.volume, &r.d_volume,
                         &r.omega_filtered, &r.d_omega_filtered, &r.filter_fn_direct, &r.filter_fn_paper,
                         &r.filter_fn_theorem};
        for (std::size_t i = 0; i < std::size(dst); ++i)
            *dst[i] = csv::parse_double(f[i]);
        recs.push_back(r);
    }
    return recs;
}

// ---------------------------------------------------------------------------
// XXZ chain

enum class XxzSource { ED, Table };

struct XxzScanOptions {
    double lo = -2.0;
    double hi = 0.0;
    double step = 0.05;
    int n = 12;
    XxzSource source = XxzSource::ED;
    std::vector<ed::CorrelatorRow> table; // used when source == Table
    ed::SolverOptions solver{};
    unsigned threads = 0;
};

/// Record for Bell-diagonal parameters: Omega = |c1 c2 c3|^(1/4), gamma_b = 1,
/// V = (4 pi / 3) |c1 c2 c3|.
inline ScanRecord bell_diagonal_record(double delta, const BellDiagonalParams& c) {
    ScanRecord r;
    r.param = delta;
    r.c1 = c.c1;
    r.c2 = c.c2;
    r.c3 = c.c3;
    r.omega = obesity_bell_diagonal(c);
    r.gamma_b = 1.0;
    r.volume = 4.0 * kPi / 3.0 * std::abs(c.c1 * c.c2 * c.c3);
    return r;
}

inline ScanRecord xxz_point(double delta, const XxzScanOptions& opt) {
    try {
        if (opt.source == XxzSource::ED) {
            const ed::ChainSpec spec{ed::Model::XXZ, opt.n, delta};
            return bell_diagonal_record(delta, ed::ed_bell_diagonal_params(spec, 0, 1, opt.solver));
        }
        for (const auto& row : opt.table) {
            if (row.model != ed::Model::XXZ || row.n != opt.n || row.k != 1 ||
                std::abs(row.param - delta) > 1e-9)
                continue;
            if (std::abs(row.sz) >= ed::kBellDiagonalTol)
                throw Error(ErrorCode::NotBellDiagonal, "table row has sz=" + std::to_string(row.sz));
            return bell_diagonal_record(delta, {row.xx, row.yy, row.zz});
        }
        throw Error(ErrorCode::MalformedInput, "no table row for Delta=" + std::to_string(delta));
    } catch (const Error& e) {
        ScanRecord r;
        r.param = delta;
        append_status(r, e);
        return r;
    }
}

inline std::vector<ScanRecord> xxz_scan(const XxzScanOptions& opt = {}) {
    if (opt.source == XxzSource::ED && (opt.n < 2 || opt.n > ed::kMaxSites))
        throw Error(ErrorCode::InvalidChain, "ED source needs 2 <= N <= 14");
    auto recs = evaluate_grid(
        uniform_grid(opt.lo, opt.hi, opt.step), [&](double d) { return xxz_point(d, opt); }, opt.threads);
    differentiate(recs);
    return recs;
}

inline constexpr const char* kXxzHeader = "delta,c1,c2,c3,omega,d_omega,gamma_b,d_gamma_b,volume,d_volume";

inline void write_xxz_csv(std::ostream& out, const std::vector<ScanRecord>& recs) {
    out << kXxzHeader << '\n';
    for (const auto& r : recs) {
        const double v[] = {r.param, r.c1, r.c2, r.c3, r.omega, r.d_omega, r.gamma_b, r.d_gamma_b,
                            r.volume, r.d_volume};
        for (std::size_t i = 0; i < std::size(v); ++i)
            out << (i ? "," : "") << csv::format_double(v[i]);
        out << '\n';
    }
}

inline std::vector<ScanRecord> read_xxz_csv(std::istream& in) {
    std::vector<ScanRecord> recs;
    for (const auto& f : csv::read_table(in, kXxzHeader)) {
        ScanRecord r;
        double* dst[] = {&r.param, &r.c1, &r.c2, &r.c3, &r.omega, &r.d_omega, &r.gamma_b, &r.d_gamma_b,
                         &r.volume, &r.d_volume};
        for (std::size_t i = 0; i < std::size(dst); ++i)
            *dst[i] = csv::parse_double(f[i]);
        recs.push_back(r);
    }
    return recs;
}

// ---------------------------------------------------------------------------

/// Kink of a derivative column, restricted to params in [lo, hi].
inline KinkReport kink_of(const std::vector<ScanRecord>& recs, double ScanRecord::*field,
                          double lo = -std::numeric_limits<double>::infinity(),
                          double hi = std::numeric_limits<double>::infinity()) {
    std::vector<double> xs, ys;
    for (const auto& r : recs)
        if (r.param >= lo && r.param <= hi) {
            xs.push_back(r.param);
            ys.push_back(r.*field);
        }
    return detect_kink(xs, ys);
}

} // namespace qobesity::scan
