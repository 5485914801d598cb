#pragma once

#include "qcae/layout.hpp"

#include <cmath>
#include <vector>

namespace oracle
{

// Independent reference: each cell carries +e/2 on all four dots and two
// electrons on one diagonal; the interaction is the plain Coulomb double sum.
struct Charge
{
    long double x, y, z, q;
};

// `a` is the dot offset from the cell centre along x and y, in nm.
inline std::vector<Charge> cell_charges(double cx, double cy, double cz, int p, long double a)
{
    const long double e = 1.602176634e-19L;
    std::vector<Charge> out;
    const long double corners[4][2] = {{a, a}, {-a, a}, {-a, -a}, {a, -a}};
    for (const auto& c : corners)
    {
        out.push_back({cx + c[0], cy + c[1], static_cast<long double>(cz), e / 2});
    }
    // P = +1 fills top-right and bottom-left
    const int occupied[2] = {p > 0 ? 0 : 1, p > 0 ? 2 : 3};
    for (const int k : occupied)
    {
        out.push_back({cx + corners[k][0], cy + corners[k][1], static_cast<long double>(cz), -e});
    }
    return out;
}

inline double interaction(const std::vector<Charge>& a, const std::vector<Charge>& b, double eps_r)
{
    const long double pi = 3.141592653589793238462643383279503L;
    const long double k = 1.0L / (4.0L * pi * 8.8541878128e-12L * eps_r);
    long double u = 0;
    for (const auto& i : a)
    {
        for (const auto& j : b)
        {
            const long double dx = i.x - j.x;
            const long double dy = i.y - j.y;
            const long double dz = i.z - j.z;
            const long double r = std::sqrt(dx * dx + dy * dy + dz * dz) * 1e-9L;
            u += k * i.q * j.q / r;
        }
    }
    return static_cast<double>(u);
}

inline double kink(const qcae::Cell& a, const qcae::Cell& b, const qcae::TechnologyParams& t)
{
    const long double d = (static_cast<long double>(t.cell_width) - t.qd_size) / 2;
    const double za = a.layer * t.layer_distance;
    const double zb = b.layer * t.layer_distance;
    const double same = interaction(cell_charges(a.x, a.y, za, 1, d), cell_charges(b.x, b.y, zb, 1, d), t.epsilon_r);
    const double opp = interaction(cell_charges(a.x, a.y, za, 1, d), cell_charges(b.x, b.y, zb, -1, d), t.epsilon_r);
    return opp - same;
}

}  // namespace oracle
