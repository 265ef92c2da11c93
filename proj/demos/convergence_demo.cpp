// Convergence-study example: accuracy table with observed rates for the
// interior-layer problem, plus the pointwise rate profile that separates the
// boundary closure from the interior stencils.
#include <compact4/compact4.hpp>

#include <cstdio>
#include <vector>

int main() {
    using namespace compact4;

    const NamedProblem prob = problem1();
    const std::vector<int> ns{8, 16, 32, 64, 128};
    const ConvergenceReport rep = accuracy_study(prob, ns);

    std::printf("accuracy study for %s\n\n", prob.name.c_str());
    std::printf("%-6s", "n");
    for (Field f : rep.fields) std::printf("  %10s %6s", field_name(f), "rate");
    std::printf("\n");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        std::printf("%-6d", ns[i]);
        for (Field f : rep.fields) {
            const ErrorRecord& r = rep.at(f, ns[i]);
            std::printf("  %10.3e", r.norm_h);
            if (i > 0) {
                const ErrorRecord& prev = rep.at(f, ns[i - 1]);
                if (const auto rt = rate(prev.norm_h, r.norm_h, prev.n, r.n))
                    std::printf(" %6.2f", *rt);
                else
                    std::printf(" %6s", "-");
            } else {
                std::printf(" %6s", "");
            }
        }
        std::printf("\n");
    }

    const int n = 32;
    const PointwiseReport pw = pointwise_rates(prob.exact, prob.coeffs, prob.a, prob.b, n);
    std::printf("\npointwise rates (meshes %d vs %d)\n\n", n, 2 * n);
    std::printf("%-6s %10s", "node", "x");
    for (const auto& s : pw.series) std::printf(" %6s", field_name(s.field));
    std::printf("\n");
    for (int j : {0, 1, 2, 8, 16, 24, 30, 31, 32}) {
        const auto k = static_cast<std::size_t>(j);
        std::printf("%-6d %10.4f", j, pw.x[k]);
        for (const auto& s : pw.series) {
            if (s.slope[k])
                std::printf(" %6.2f", *s.slope[k]);
            else
                std::printf(" %6s", "exact");
        }
        std::printf("\n");
    }
    std::printf("\nboundary nodes show the designed closure orders; interior nodes run at\n"
                "the scheme's fourth order.\n");
    return 0;
}
