#pragma once

// JSON state and filter files, and the single-state analysis report.
//
//   state:  {"rho": [[[re, im] x 4] x 4]}          row-major, |uu>,|ud>,|du>,|dd>
//   filter: {"O_A": [[[re, im] x 2] x 2], "O_B": ...}

#include "qobesity/ellipsoid.hpp"
#include "qobesity/filtering.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace qobesity::io {

using nlohmann::json;

namespace detail {

template <int N>
Eigen::Matrix<cplx, N, N> parse_complex_matrix(const json& j, const std::string& name) {
    if (!j.is_array() || j.size() != N)
        throw Error(ErrorCode::MalformedInput, name + " must have " + std::to_string(N) + " rows");
    Eigen::Matrix<cplx, N, N> m;
    for (int r = 0; r < N; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != N)
            throw Error(ErrorCode::MalformedInput, name + " row " + std::to_string(r) + " must have " +
                                                       std::to_string(N) + " entries");
        for (int c = 0; c < N; ++c) {
            const auto& e = row[static_cast<std::size_t>(c)];
            if (e.is_number()) {
                m(r, c) = cplx(e.get<double>(), 0.0);
            } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
            } else {
                throw Error(ErrorCode::MalformedInput,
                            name + " entry (" + std::to_string(r) + "," + std::to_string(c) + ") must be [re, im]");
            }
        }
    }
    return m;
}

template <typename M>
json complex_matrix_json(const M& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        out.push_back(row);
    }
    return out;
}

template <typename M>
json real_matrix_json(const M& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

inline json vector_json(const Vec3& v) { return {v[0], v[1], v[2]}; }

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::MalformedInput, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
    }
}

} // namespace detail

/// Raw matrix from a state document; no physicality check.
inline Mat4c parse_state_matrix(const json& doc) {
    if (!doc.is_object() || !doc.contains("rho"))
        throw Error(ErrorCode::MalformedInput, "state file needs a \"rho\" member");
    return detail::parse_complex_matrix<4>(doc["rho"], "rho");
}

inline json state_json(const DensityMatrix2Q& rho) { return {{"rho", detail::complex_matrix_json(rho.matrix())}}; }

inline LocalFilter parse_filter(const json& doc) {
    if (!doc.is_object() || !doc.contains("O_A") || !doc.contains("O_B"))
        throw Error(ErrorCode::MalformedInput, "filter file needs \"O_A\" and \"O_B\" members");
    return {detail::parse_complex_matrix<2>(doc["O_A"], "O_A"), detail::parse_complex_matrix<2>(doc["O_B"], "O_B")};
}

inline json filter_json(const LocalFilter& f) {
    return {{"O_A", detail::complex_matrix_json(f.A)}, {"O_B", detail::complex_matrix_json(f.B)}};
}

inline Mat4c load_state_matrix(const std::string& path) { return parse_state_matrix(detail::read_json_file(path)); }
inline LocalFilter load_filter(const std::string& path) { return parse_filter(detail::read_json_file(path)); }

inline json ellipsoid_json(const SteeringEllipsoid& e) {
    return {{"center", detail::vector_json(e.center)},
            {"Q", detail::real_matrix_json(e.Q)},
            {"semiaxes", detail::vector_json(e.semiaxes)},
            {"orientation", detail::real_matrix_json(e.orientation)},
            {"gamma", e.gamma},
            {"volume_from_semiaxes", e.volume()}};
}

/// Full report for one state: correlation matrix, obesity, concurrence,
/// steering ellipsoids of both parties and, if given, the filtered state.
/// Throws InvalidState (with the validation report) for unphysical input.
inline json analyze_state(const Mat4c& m, const LocalFilter* filter = nullptr) {
    const auto validation = validate_matrix(m);
    if (!validation.ok())
        throw Error(ErrorCode::InvalidState, validation.summary());
    const auto rho = DensityMatrix2Q::unchecked(m);
    const auto r = correlation_matrix(rho);

    json out;
    out["eigenvalues"] = std::vector<double>(validation.eigenvalues.data(),
                                             validation.eigenvalues.data() + validation.eigenvalues.size());
    out["R"] = detail::real_matrix_json(r.matrix());
    out["a"] = detail::vector_json(r.a());
    out["b"] = detail::vector_json(r.b());
    out["det_R"] = r.determinant();
    const double om = obesity(r);
    const double conc = concurrence(rho);
    out["omega"] = om;
    out["concurrence"] = conc;
    out["concurrence_bound_holds"] = om >= conc - 1e-9;

    for (const auto& [party, key] : {std::pair{Party::A, "ellipsoid_A"}, std::pair{Party::B, "ellipsoid_B"}}) {
        try {
            out[key] = ellipsoid_json(steering_ellipsoid(r, party));
        } catch (const Error& e) {
            out[key] = {{"error", e.what()}};
        }
    }
    try {
        out["gamma_b"] = gamma_b(r);
        out["volume"] = ellipsoid_volume(r);
    } catch (const Error& e) {
        out["gamma_b"] = nullptr;
        out["volume"] = nullptr;
        out["volume_error"] = e.what();
    }

    if (filter) {
        const auto filtered = apply_filter(rho, *filter);
        json f;
        f["state"] = detail::complex_matrix_json(filtered.state.matrix());
        f["trace_norm"] = filtered.trace_norm;
        f["filtering_function"] = 1.0 / filtered.trace_norm;
        f["det_product"] = filter->det_a() * filter->det_b();
        f["omega"] = obesity(filtered.state);
        f["omega_predicted"] = filtered_obesity_general(rho, *filter);
        f["sub_normalized"] = filter->sub_normalized();
        out["filtered"] = f;
    }
    return out;
}

} // namespace qobesity::io
