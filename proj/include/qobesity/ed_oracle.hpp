#pragma once

// Exact diagonalization of periodic spin-1/2 chains:
//   Ising-Lenz  H = -sum_i (lambda sigma^x_i sigma^x_{i+1} + sigma^z_i)
//   XXZ         H =  sum_i (sigma^x_i sigma^x_{i+1} + sigma^y_i sigma^y_{i+1} + Delta sigma^z_i sigma^z_{i+1})
// with site N wrapping to site 1 (for N = 2 the bond therefore appears twice).
//
// Both Hamiltonians conserve a diagonal quantum number (number of down spins
// for XXZ, its parity for Ising), so each block is solved separately and the
// ground space is collected across blocks.

#include "qobesity/csv.hpp"
#include "qobesity/obesity.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace qobesity::ed {

enum class Model { IsingLenz, XXZ };

inline std::string to_string(Model m) { return m == Model::IsingLenz ? "ising" : "xxz"; }

inline Model parse_model(const std::string& s) {
    if (s == "ising" || s == "ising-lenz")
        return Model::IsingLenz;
    if (s == "xxz")
        return Model::XXZ;
    throw Error(ErrorCode::MalformedInput, "unknown model '" + s + "' (expected ising or xxz)");
}

inline constexpr int kMaxSites = 14;
inline constexpr int kDenseSites = 12;

struct ChainSpec {
    Model model = Model::IsingLenz;
    int n = 8;
    double param = 0.0; // lambda (Ising) or Delta (XXZ)

    void validate() const {
        if (n < 2 || n > kMaxSites)
            throw Error(ErrorCode::InvalidChain, "chain length must be in [2, 14], got " + std::to_string(n));
    }

    std::size_t dim() const { return std::size_t{1} << n; }
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

namespace detail {

inline int spin_z(std::uint32_t state, int site, int n) {
    return ((state >> (n - 1 - site)) & 1U) ? -1 : 1;
}

/// Calls emit(target_state, amplitude) for every nonzero <target|H|state>.
template <typename Emit>
void apply_to_basis_state(const ChainSpec& spec, std::uint32_t state, Emit&& emit) {
    const int n = spec.n;
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const std::uint32_t flip = (1U << (n - 1 - i)) | (1U << (n - 1 - j));
        const int zi = spin_z(state, i, n), zj = spin_z(state, j, n);
        if (spec.model == Model::IsingLenz) {
            diag -= zi;
            emit(state ^ flip, -spec.param);
        } else {
            diag += spec.param * zi * zj;
            if (zi != zj)
                emit(state ^ flip, 2.0);
        }
    }
    emit(state, diag);
}

inline int quantum_number(const ChainSpec& spec, std::uint32_t state) {
    const int downs = std::popcount(state);
    return spec.model == Model::XXZ ? downs : (downs & 1);
}

} // namespace detail

/// Full 2^N x 2^N Hamiltonian.
inline SparseMatrix build_hamiltonian(const ChainSpec& spec) {
    spec.validate();
    std::vector<Eigen::Triplet<double>> trips;
    for (std::uint32_t s = 0; s < spec.dim(); ++s)
        detail::apply_to_basis_state(spec, s, [&](std::uint32_t t, double v) {
            trips.emplace_back(static_cast<int>(t), static_cast<int>(s), v);
        });
    SparseMatrix h(static_cast<Eigen::Index>(spec.dim()), static_cast<Eigen::Index>(spec.dim()));
    h.setFromTriplets(trips.begin(), trips.end());
    h.prune(0.0);
    return h;
}

/// Maximum absolute row sum.
inline double hamiltonian_norm(const SparseMatrix& h) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < h.outerSize(); ++r) {
        double sum = 0.0;
        for (SparseMatrix::InnerIterator it(h, r); it; ++it)
            sum += std::abs(it.value());
        best = std::max(best, sum);
    }
    return best;
}

struct Sector {
    int quantum_number = 0;
    std::vector<std::uint32_t> states;
    SparseMatrix h;
};

inline std::vector<Sector> build_sectors(const ChainSpec& spec) {
    spec.validate();
    std::map<int, Sector> by_q;
    std::vector<std::int32_t> position(spec.dim());
    for (std::uint32_t s = 0; s < spec.dim(); ++s) {
        auto& sec = by_q[detail::quantum_number(spec, s)];
        position[s] = static_cast<std::int32_t>(sec.states.size());
        sec.states.push_back(s);
    }
    std::vector<Sector> out;
    for (auto& [q, sec] : by_q) {
        sec.quantum_number = q;
        std::vector<Eigen::Triplet<double>> trips;
        for (std::size_t col = 0; col < sec.states.size(); ++col)
            detail::apply_to_basis_state(spec, sec.states[col], [&](std::uint32_t t, double v) {
                trips.emplace_back(position[t], static_cast<int>(col), v);
            });
        const auto d = static_cast<Eigen::Index>(sec.states.size());
        sec.h.resize(d, d);
        sec.h.setFromTriplets(trips.begin(), trips.end());
        sec.h.prune(0.0);
        out.push_back(std::move(sec));
    }
    return out;
}

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;
};

struct LanczosOptions {
    int krylov_dim = 120;
    int max_restarts = 40;
    double residual_tol = 1e-11; // relative to the norm scale passed in
    std::uint64_t seed = 12345;
};

/// Lowest eigenpair of `h` restricted to the orthogonal complement of
/// `deflate`, by restarted Lanczos with full reorthogonalization.
inline EigenPair lanczos_lowest(const SparseMatrix& h, const std::vector<EigenPair>& deflate, double norm,
                                const LanczosOptions& opt = {}) {
    const Eigen::Index dim = h.rows();
    auto project_out = [&](Eigen::VectorXd& w) {
        for (const auto& d : deflate)
            w -= d.vector.dot(w) * d.vector;
    };

    std::mt19937_64 rng(opt.seed + deflate.size());
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd start(dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        start[k] = g(rng);
    project_out(start);
    start.normalize();

    const Eigen::Index room = dim - static_cast<Eigen::Index>(deflate.size());
    const int m_max = static_cast<int>(std::min<Eigen::Index>(opt.krylov_dim, std::max<Eigen::Index>(room, 1)));
    const double target = opt.residual_tol * std::max(norm, 1.0);

    EigenPair best;
    double best_residual = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart <= opt.max_restarts; ++restart) {
        std::vector<Eigen::VectorXd> basis{start};
        std::vector<double> alpha, beta;
        Eigen::VectorXd ritz_coeffs;
        double theta = 0.0;
        for (int m = 0; m < m_max; ++m) {
            Eigen::VectorXd w = h * basis[static_cast<std::size_t>(m)];
            alpha.push_back(basis[static_cast<std::size_t>(m)].dot(w));
            for (int pass = 0; pass < 2; ++pass) {
                project_out(w);
                for (const auto& v : basis)
                    w -= v.dot(w) * v;
            }
            const double b = w.norm();
            const int size = m + 1;
            if (size % 5 == 0 || size == m_max || b < 1e-13 * std::max(norm, 1.0)) {
                Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), size);
                Eigen::VectorXd sub(std::max(size - 1, 0));
                for (int k = 0; k + 1 < size; ++k)
                    sub[k] = beta[static_cast<std::size_t>(k)];
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
                tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
                theta = tri.eigenvalues()[0];
                ritz_coeffs = tri.eigenvectors().col(0);
                if (b * std::abs(ritz_coeffs[size - 1]) < 0.1 * target || b < 1e-13 * std::max(norm, 1.0))
                    break;
            }
            if (m + 1 == m_max)
                break;
            beta.push_back(b);
            basis.push_back(w / b);
        }
        Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
        for (Eigen::Index k = 0; k < ritz_coeffs.size(); ++k)
            x += ritz_coeffs[k] * basis[static_cast<std::size_t>(k)];
        project_out(x);
        x.normalize();
        const double rq = x.dot(h * x);
        const double res = (h * x - rq * x).norm();
        if (res < best_residual) {
            best_residual = res;
            best = {rq, x};
        }
        if (res <= target)
            return best;
        start = x;
    }
    if (best_residual <= 1e-8 * std::max(norm, 1.0))
        return best;
    throw Error(ErrorCode::EigensolverFailure,
                "Lanczos did not converge (residual " + std::to_string(best_residual) + ")");
}

struct SolverOptions {
    /// N > 12 needs the iterative path.
    bool allow_iterative = false;
    /// Blocks up to this dimension are diagonalized densely, larger ones by Lanczos.
    Eigen::Index dense_limit = 512;
    /// Levels within gap_tol * ||H|| of the ground energy are degenerate.
    double gap_tol = 1e-8;
    LanczosOptions lanczos{};
};

struct GroundSpace {
    int n = 0;
    double energy = 0.0;
    double norm = 0.0;
    std::vector<Eigen::VectorXd> vectors; // full 2^N basis, orthonormal
    std::vector<double> residuals;

    int degeneracy() const { return static_cast<int>(vectors.size()); }

    /// Uniform mixture over the ground vectors (dense 2^N x 2^N).
    Eigen::MatrixXcd density_matrix() const {
        if (n > 10)
            throw Error(ErrorCode::InvalidChain, "dense ground-space density matrix limited to N <= 10");
        const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
        for (const auto& v : vectors)
            m += v * v.transpose();
        return (m / static_cast<double>(vectors.size())).cast<cplx>();
    }
};

/// Lowest block levels: everything within `window` of the block minimum.
inline std::vector<EigenPair> lowest_levels(const SparseMatrix& h, double window, double norm,
                                            const SolverOptions& opt) {
    std::vector<EigenPair> out;
    const Eigen::Index dim = h.rows();
    if (dim <= opt.dense_limit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(h)};
        if (es.info() != Eigen::Success)
            throw Error(ErrorCode::EigensolverFailure, "dense eigensolver failed");
        const double e0 = es.eigenvalues()[0];
        for (Eigen::Index k = 0; k < dim && es.eigenvalues()[k] <= e0 + window; ++k)
            out.push_back({es.eigenvalues()[k], es.eigenvectors().col(k)});
        return out;
    }
    while (static_cast<Eigen::Index>(out.size()) < dim) {
        EigenPair p = lanczos_lowest(h, out, norm, opt.lanczos);
        if (!out.empty() && p.value > out.front().value + window)
            break;
        out.push_back(std::move(p));
    }
    return out;
}

inline GroundSpace ground_space(const ChainSpec& spec, const SolverOptions& opt = {}) {
    spec.validate();
    if (spec.n > kDenseSites && !opt.allow_iterative)
        throw Error(ErrorCode::InvalidChain, "N > 12 requires the iterative solver (allow_iterative)");

    const auto sectors = build_sectors(spec);
    double norm = 0.0;
    for (const auto& s : sectors)
        norm = std::max(norm, hamiltonian_norm(s.h));
    const double window = opt.gap_tol * norm;

    struct Candidate {
        const Sector* sector;
        EigenPair pair;
    };
    std::vector<Candidate> candidates;
    for (const auto& s : sectors)
        for (auto& p : lowest_levels(s.h, window, norm, opt))
            candidates.push_back({&s, std::move(p)});

    double e0 = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates)
        e0 = std::min(e0, c.pair.value);

    GroundSpace gs;
    gs.n = spec.n;
    gs.energy = e0;
    gs.norm = norm;
    for (const auto& c : candidates) {
        if (c.pair.value > e0 + window)
            continue;
        const double res = (c.sector->h * c.pair.vector - c.pair.value * c.pair.vector).norm();
        if (res > 1e-8 * norm)
            throw Error(ErrorCode::EigensolverFailure, "ground vector residual " + std::to_string(res));
        Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.dim()));
        for (std::size_t k = 0; k < c.sector->states.size(); ++k)
            full[c.sector->states[k]] = c.pair.vector[static_cast<Eigen::Index>(k)];
        gs.vectors.push_back(std::move(full));
        gs.residuals.push_back(res);
    }
    return gs;
}

/// Pair reduced state of the uniform ground-space mixture, site i on the left.
inline DensityMatrix2Q pair_reduced_state(const GroundSpace& gs, int i, int j) {
    Mat4c m = Mat4c::Zero();
    for (const auto& v : gs.vectors)
        m += pair_reduced_matrix_pure(v, i, j, gs.n);
    m /= static_cast<double>(gs.vectors.size());
    return DensityMatrix2Q::from_matrix(m, 1e-9);
}

struct PairCorrelators {
    double xx = 0.0;
    double yy = 0.0;
    double zz = 0.0;
    double sz_i = 0.0;
    double sz_j = 0.0;
};

inline PairCorrelators pair_correlators(const GroundSpace& gs, int i, int j) {
    const auto r = correlation_matrix(pair_reduced_state(gs, i, j));
    return {r(1, 1), r(2, 2), r(3, 3), r.a()[2], r.b()[2]};
}

inline PairCorrelators ed_pair_correlators(const ChainSpec& spec, int i, int j, const SolverOptions& opt = {}) {
    return pair_correlators(ground_space(spec, opt), i, j);
}

inline constexpr double kBellDiagonalTol = 1e-8;

/// (c1, c2, c3) read off the diagonal of T, axes (x, y, z). Throws
/// NotBellDiagonal when the local Bloch vectors or off-diagonal T entries
/// exceed the tolerance.
inline BellDiagonalParams bell_diagonal_params(const CorrelationMatrix& r, double tol = kBellDiagonalTol) {
    const Mat3 t = r.T();
    const double off = (t - Mat3(t.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
    const double na = r.a().norm(), nb = r.b().norm();
    if (na >= tol || nb >= tol || off >= tol) {
        std::ostringstream os;
        os << "pair state is not Bell-diagonal: |a|=" << na << " |b|=" << nb << " max|T_offdiag|=" << off;
        throw Error(ErrorCode::NotBellDiagonal, os.str());
    }
    return {t(0, 0), t(1, 1), t(2, 2)};
}

inline BellDiagonalParams ed_bell_diagonal_params(const GroundSpace& gs, int i, int j) {
    return bell_diagonal_params(correlation_matrix(pair_reduced_state(gs, i, j)));
}

inline BellDiagonalParams ed_bell_diagonal_params(const ChainSpec& spec, int i, int j,
                                                  const SolverOptions& opt = {}) {
    return ed_bell_diagonal_params(ground_space(spec, opt), i, j);
}

// ---------------------------------------------------------------------------
// Correlator tables: model,N,param,k,xx,yy,zz,sz

struct CorrelatorRow {
    Model model = Model::XXZ;
    int n = 0;
    double param = 0.0;
    int k = 1;
    double xx = 0.0;
    double yy = 0.0;
    double zz = 0.0;
    double sz = 0.0;
};

inline constexpr const char* kCorrelatorHeader = "model,N,param,k,xx,yy,zz,sz";

/// One row per separation k = 1 .. N/2 for the bulk pair (0, k).
inline std::vector<CorrelatorRow> correlator_rows(const ChainSpec& spec, const GroundSpace& gs) {
    std::vector<CorrelatorRow> rows;
    for (int k = 1; k <= spec.n / 2; ++k) {
        const auto c = pair_correlators(gs, 0, k);
        rows.push_back({spec.model, spec.n, spec.param, k, c.xx, c.yy, c.zz, c.sz_i});
    }
    return rows;
}

inline void write_correlator_table(std::ostream& out, const std::vector<CorrelatorRow>& rows) {
    out << kCorrelatorHeader << '\n';
    for (const auto& r : rows)
        out << to_string(r.model) << ',' << r.n << ',' << csv::format_double(r.param) << ',' << r.k << ','
            << csv::format_double(r.xx) << ',' << csv::format_double(r.yy) << ',' << csv::format_double(r.zz)
            << ',' << csv::format_double(r.sz) << '\n';
}

inline std::vector<CorrelatorRow> read_correlator_table(std::istream& in) {
    std::vector<CorrelatorRow> rows;
    for (const auto& f : csv::read_table(in, kCorrelatorHeader))
        rows.push_back({parse_model(f[0]), csv::parse_int(f[1]), csv::parse_double(f[2]), csv::parse_int(f[3]),
                        csv::parse_double(f[4]), csv::parse_double(f[5]), csv::parse_double(f[6]),
                        csv::parse_double(f[7])});
    return rows;
}

} // namespace qobesity::ed
