// Evaluates (x - 0.7)(x - 1.3)(x + 2.1) expanded in binary32 at points
// walking toward the root near 0.7, with Horner and through one plan.

#include "nearpoly/nearpoly.hpp"

#include <cmath>
#include <cstdio>

int main()
{
    using namespace nearpoly;

    const auto gen = poly_from_roots({0.7f, 1.3f, -2.1f});
    const polynomial& p = gen.poly;
    const float root = gen.roots[0];
    const auto plan = build_plan(p, root);

    std::printf("plan at %a: m_hat=%d r=%d x_hat=%a\n", root, plan.m_hat, plan.r, plan.x_hat);
    std::printf("%-16s %-16s %-12s %-12s\n", "x", "reference", "horner/emax", "plan/emax");
    for (int k = 0; k <= 6; ++k) {
        const float x = root + static_cast<float>(k) * 0x1p-22f;
        const double truth = reference_eval(p, x);
        const double scale = e_max(p, x);
        const double h = std::fabs(horner_eval(p, x) - truth) / scale;
        const double a = std::fabs(eval_plan(plan, x) - truth) / scale;
        std::printf("%-16a %-16.8e %-12.3e %-12.3e\n", x, truth, h, a);
    }
}
