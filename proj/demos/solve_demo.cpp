// Minimal end-to-end example: pick a bundled problem, solve it on one mesh,
// and compare the discrete fields against the known exact solution.
#include <compact4/compact4.hpp>

#include <cmath>
#include <cstdio>

int main() {
    using namespace compact4;

    const NamedProblem prob = problem1();
    const int n = 64;
    const DiscreteSolution sol = solve_bvp(prob.make(n));
    const Grid& g = sol.grid;

    std::printf("problem %s on [%g, %g], n = %d (h = %g)\n", prob.name.c_str(), g.a(), g.b(),
                n, g.h());
    std::printf("estimated reciprocal condition number: %.3e\n\n", sol.rcond);

    std::printf("%10s %14s %14s %12s\n", "x", "u_h", "u_exact", "error");
    for (int j = 0; j <= n; j += 8) {
        const auto k = static_cast<std::size_t>(j);
        const double x = g.x(j);
        std::printf("%10.4f %14.6e %14.6e %12.2e\n", x, sol.u[k], prob.exact.u(x),
                    sol.u[k] - prob.exact.u(x));
    }

    std::printf("\nrecovered boundary triples (u'', u''', u'''') vs exact:\n");
    std::printf("  left : (%.6e, %.6e, %.6e)\n", sol.left.d2, sol.left.d3, sol.left.d4);
    std::printf("  exact: (%.6e, %.6e, %.6e)\n", prob.exact.u2(g.a()), prob.exact.u3(g.a()),
                prob.exact.u4(g.a()));
    std::printf("  right: (%.6e, %.6e, %.6e)\n", sol.right.d2, sol.right.d3, sol.right.d4);
    std::printf("  exact: (%.6e, %.6e, %.6e)\n", prob.exact.u2(g.b()), prob.exact.u3(g.b()),
                prob.exact.u4(g.b()));

    GridFunction err(sol.u.size());
    for (int j = 0; j <= n; ++j) {
        const auto k = static_cast<std::size_t>(j);
        err[k] = sol.u[k] - prob.exact.u(g.x(j));
    }
    const NormReport norms = compact4::norms(err, g.h());
    std::printf("\n|e_u|_h = %.4e, |e_u|_sup = %.4e\n", norms.norm_h, norms.norm_sup);
    return 0;
}
