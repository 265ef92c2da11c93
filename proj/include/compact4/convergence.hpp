#pragma once

#include <cmath>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "closure.hpp"
#include "grid.hpp"
#include "operators.hpp"
#include "problems.hpp"
#include "solver.hpp"

namespace compact4 {

enum class Field { u, d1, d2, d3, d4 };

inline const char* field_name(Field f) {
    switch (f) {
        case Field::u: return "u";
        case Field::d1: return "d1";
        case Field::d2: return "d2";
        case Field::d3: return "d3";
        case Field::d4: return "d4";
    }
    return "?";
}

struct ErrorRecord {
    int n = 0;
    Field field = Field::u;
    double norm_h = 0.0;
    double norm_sup = 0.0;
};

// Error records for a mesh sequence, ordered field-major then by n.
struct ConvergenceReport {
    std::vector<int> ns;
    std::vector<Field> fields;
    std::vector<ErrorRecord> records;

    const ErrorRecord& at(Field f, int n) const {
        for (const ErrorRecord& r : records)
            if (r.field == f && r.n == n) return r;
        throw std::out_of_range("ConvergenceReport: no record for requested (field, n)");
    }
};

// convergence rate log(e1/e2) / log(n2/n1) between consecutive meshes.
// Returns the undefined-rate marker (nullopt) when either error is at the
// exactness floor (<= 1e-15).
inline std::optional<double> rate(double e1, double e2, int n1, int n2) {
    if (n2 <= n1) throw std::invalid_argument("rate: requires n2 > n1");
    if (e1 <= 1e-15 || e2 <= 1e-15) return std::nullopt;
    return std::log(e1 / e2) / std::log(static_cast<double>(n2) / n1);
}

// Truncation errors of the four discrete derivatives on exact samples:
// p from the Hermitian solve with exact endpoint derivatives, boundary slots
// of d2/d3/d4 filled by the closure driven by exact samples and exact f.
// Error vectors cover the full grid; the d1 slots are exactly zero.
struct TruncationErrors {
    Grid grid;
    GridFunction e1, e2, e3, e4;
};

inline TruncationErrors truncation_errors(const ExactSolution& exact, const CoefficientSet& coeffs,
                                          double a, double b, int n) {
    const Grid g(a, b, n);
    const double h = g.h();
    const GridFunction us = sample(exact.u, g);
    const GridFunction p = hermitian_derivative(us, h, {exact.u1(a), exact.u1(b)});
    const BoundaryTriple L =
        close_boundary(us, p, h, detail::coefficients_at(coeffs, a), Side::left);
    const BoundaryTriple R =
        close_boundary(us, p, h, detail::coefficients_at(coeffs, b), Side::right);
    const GridFunction d2 = tilde_delta2(us, p, h, {L.d2, R.d2});
    const GridFunction d3v = delta3(us, p, d2, h, {L.d3, R.d3});
    const GridFunction d4v = delta4(us, p, h, {L.d4, R.d4});

    TruncationErrors out{g, {}, {}, {}, {}};
    out.e1 = p;
    out.e2 = d2;
    out.e3 = d3v;
    out.e4 = d4v;
    for (int j = 0; j <= n; ++j) {
        const double x = g.x(j);
        const std::size_t k = detail::uz(j);
        out.e1[k] -= exact.u1(x);
        out.e2[k] -= exact.u2(x);
        out.e3[k] -= exact.u3(x);
        out.e4[k] -= exact.u4(x);
    }
    return out;
}

// Truncation study: operators applied to exact samples per mesh.  Norms are
// measured over the interior nodes j = 1..n-1; the closure-filled boundary
// slots are reported through the pointwise profile instead.
inline ConvergenceReport truncation_study(const ExactSolution& exact, const CoefficientSet& coeffs,
                                          double a, double b, const std::vector<int>& ns) {
    if (ns.empty()) throw std::invalid_argument("truncation_study: empty mesh list");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (ns[i] < 4) throw std::invalid_argument("truncation_study: requires n >= 4");
        if (i > 0 && ns[i] <= ns[i - 1])
            throw std::invalid_argument("truncation_study: mesh list must be ascending");
    }
    std::vector<std::future<std::vector<ErrorRecord>>> jobs;
    for (const int n : ns)
        jobs.push_back(std::async(std::launch::async, [&exact, &coeffs, a, b, n] {
            const TruncationErrors t = truncation_errors(exact, coeffs, a, b, n);
            const double h = t.grid.h();
            std::vector<ErrorRecord> recs;
            const std::pair<Field, const GridFunction*> fields[] = {
                {Field::d1, &t.e1}, {Field::d2, &t.e2}, {Field::d3, &t.e3}, {Field::d4, &t.e4}};
            for (const auto& [f, e] : fields) {
                const NormReport nr = norms(*e, h, 1, n - 1);
                recs.push_back({n, f, nr.norm_h, nr.norm_sup});
            }
            return recs;
        }));

    ConvergenceReport report;
    report.ns = ns;
    report.fields = {Field::d1, Field::d2, Field::d3, Field::d4};
    std::vector<std::vector<ErrorRecord>> per_n;
    per_n.reserve(jobs.size());
    for (auto& j : jobs) per_n.push_back(j.get());
    for (const Field f : report.fields)
        for (std::size_t i = 0; i < per_n.size(); ++i)
            for (const ErrorRecord& r : per_n[i])
                if (r.field == f) report.records.push_back(r);
    return report;
}

// Accuracy study: solve_bvp per mesh, errors of all five fields against the
// exact solution.  Norms cover the full grid including the closure slots.
inline ConvergenceReport accuracy_study(const NamedProblem& prob, const std::vector<int>& ns) {
    if (ns.empty()) throw std::invalid_argument("accuracy_study: empty mesh list");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (ns[i] < 4) throw std::invalid_argument("accuracy_study: requires n >= 4");
        if (i > 0 && ns[i] <= ns[i - 1])
            throw std::invalid_argument("accuracy_study: mesh list must be ascending");
    }
    std::vector<std::future<std::vector<ErrorRecord>>> jobs;
    for (const int n : ns)
        jobs.push_back(std::async(std::launch::async, [&prob, n] {
            const DiscreteSolution sol = solve_bvp(prob.make(n));
            const Grid& g = sol.grid;
            const double h = g.h();
            const RealFn* exact[] = {&prob.exact.u, &prob.exact.u1, &prob.exact.u2, &prob.exact.u3,
                                     &prob.exact.u4};
            const GridFunction* computed[] = {&sol.u, &sol.p, &sol.d2, &sol.d3, &sol.d4};
            const Field fields[] = {Field::u, Field::d1, Field::d2, Field::d3, Field::d4};
            std::vector<ErrorRecord> recs;
            for (int fi = 0; fi < 5; ++fi) {
                GridFunction err = *computed[fi];
                for (int j = 0; j <= n; ++j) err[detail::uz(j)] -= (*exact[fi])(g.x(j));
                const NormReport nr = norms(err, h);
                recs.push_back({n, fields[fi], nr.norm_h, nr.norm_sup});
            }
            return recs;
        }));

    ConvergenceReport report;
    report.ns = ns;
    report.fields = {Field::u, Field::d1, Field::d2, Field::d3, Field::d4};
    std::vector<std::vector<ErrorRecord>> per_n;
    per_n.reserve(jobs.size());
    for (auto& j : jobs) per_n.push_back(j.get());
    for (const Field f : report.fields)
        for (std::size_t i = 0; i < per_n.size(); ++i)
            for (const ErrorRecord& r : per_n[i])
                if (r.field == f) report.records.push_back(r);
    return report;
}

// Per-node truncation-error slopes between meshes n and 2n.  At the boundary
// and first-off-boundary indices (j in {0, 1, n-1, n}) the comparison is by
// index, tracking the documented closure/near-boundary orders; elsewhere it
// compares errors at the common physical node x_j = x_{2j}^fine.  Nodes at
// the exactness floor carry the undefined-rate marker.
struct PointwiseReport {
    struct Series {
        Field field;
        std::vector<std::optional<double>> slope;
    };
    int n = 0;
    std::vector<double> x;
    std::vector<Series> series;
};

inline PointwiseReport pointwise_rates(const ExactSolution& exact, const CoefficientSet& coeffs,
                                       double a, double b, int n) {
    const TruncationErrors coarse = truncation_errors(exact, coeffs, a, b, n);
    const TruncationErrors fine = truncation_errors(exact, coeffs, a, b, 2 * n);

    PointwiseReport report;
    report.n = n;
    for (int j = 0; j <= n; ++j) report.x.push_back(coarse.grid.x(j));
    const std::pair<Field, std::pair<const GridFunction*, const GridFunction*>> fields[] = {
        {Field::d1, {&coarse.e1, &fine.e1}},
        {Field::d2, {&coarse.e2, &fine.e2}},
        {Field::d3, {&coarse.e3, &fine.e3}},
        {Field::d4, {&coarse.e4, &fine.e4}}};
    for (const auto& [f, pair] : fields) {
        PointwiseReport::Series s{f, {}};
        for (int j = 0; j <= n; ++j) {
            const bool boundary_zone = (j <= 1 || j >= n - 1);
            const double ec = std::abs((*pair.first)[detail::uz(j)]);
            const double ef = std::abs((*pair.second)[detail::uz(boundary_zone ? j : 2 * j)]);
            s.slope.push_back(rate(ec, ef, n, 2 * n));
        }
        report.series.push_back(std::move(s));
    }
    return report;
}

}  // namespace compact4
