#include "qcae/electrostatics.hpp"

#include "qcae/constants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qcae
{

DotChargeModel::DotChargeModel(const TechnologyParams& tech)
{
    const double dx = tech.cell_width / 2.0 - tech.qd_size / 2.0;
    const double dy = tech.cell_height / 2.0 - tech.qd_size / 2.0;
    dot_offsets = {{{dx, dy}, {-dx, dy}, {-dx, -dy}, {dx, -dy}}};
}

std::array<double, 4> DotChargeModel::dot_charges(int p)
{
    constexpr double half = constants::elementary_charge / 2.0;
    // occupied dot: -e + e/2, empty dot: +e/2
    return p > 0 ? std::array<double, 4>{-half, half, -half, half} : std::array<double, 4>{half, -half, half, -half};
}

double center_distance(const Cell& a, const Cell& b, const TechnologyParams& tech)
{
    const double dz = tech.layer_distance * std::abs(a.layer - b.layer);
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + dz * dz);
}

double kink_energy(const Cell& a, const Cell& b, const TechnologyParams& tech)
{
    const double d = center_distance(a, b, tech);
    if (d > tech.r_effect)
    {
        throw std::domain_error("kink_energy: cells " + std::to_string(a.id) + " and " + std::to_string(b.id) +
                                " are beyond r_effect");
    }
    const DotChargeModel model(tech);
    const auto plus = DotChargeModel::dot_charges(+1);
    const double dz = tech.layer_distance * (b.layer - a.layer) * constants::nm;

    // With q(-1) = -q(+1), U(+,-) = -U(+,+), so U_opp - U_same = -2 U(+,+).
    // The 16 terms cancel to a few parts in 10^4, hence the extended precision.
    long double same = 0.0L;
    for (std::size_t i = 0; i < 4; ++i)
    {
        for (std::size_t j = 0; j < 4; ++j)
        {
            const long double rx = (static_cast<long double>(b.x) + model.dot_offsets[j][0] - a.x -
                                    model.dot_offsets[i][0]) * constants::nm;
            const long double ry = (static_cast<long double>(b.y) + model.dot_offsets[j][1] - a.y -
                                    model.dot_offsets[i][1]) * constants::nm;
            const long double r = std::sqrt(rx * rx + ry * ry + static_cast<long double>(dz) * dz);
            if (r == 0.0L)
            {
                throw std::domain_error("kink_energy: coincident quantum dots");
            }
            same += static_cast<long double>(plus[i]) * plus[j] / r;
        }
    }
    same *= static_cast<long double>(constants::coulomb_prefactor) / tech.epsilon_r;
    return static_cast<double>(-2.0L * same);
}

double NeighborGraph::kink_between(std::size_t i, std::size_t j) const
{
    for (auto k = offsets[i]; k < offsets[i + 1]; ++k)
    {
        if (neighbors[k] == j)
        {
            return kink[k];
        }
    }
    return 0.0;
}

NeighborGraph build_neighbor_graph(const Layout& layout, const TechnologyParams& tech)
{
    const auto n = layout.cells.size();
    struct Edge
    {
        std::size_t j;
        double ek;
        double d;
    };
    std::vector<std::vector<Edge>> adjacency(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = i + 1; j < n; ++j)
        {
            const double d = center_distance(layout.cells[i], layout.cells[j], tech);
            if (d > tech.r_effect)
            {
                continue;
            }
            // computed once per unordered pair so both directions are bit-identical
            const double ek = kink_energy(layout.cells[i], layout.cells[j], tech);
            adjacency[i].push_back({j, ek, d});
            adjacency[j].push_back({i, ek, d});
        }
    }
    NeighborGraph g;
    g.offsets.reserve(n + 1);
    g.offsets.push_back(0);
    for (auto& edges : adjacency)
    {
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.j < b.j; });
        for (const auto& e : edges)
        {
            g.neighbors.push_back(e.j);
            g.kink.push_back(e.ek);
            g.distance_nm.push_back(e.d);
        }
        g.offsets.push_back(g.neighbors.size());
    }
    return g;
}

double coulomb_term(std::size_t cell, const NeighborGraph& graph, std::span<const double> lambda_z)
{
    double phi = 0.0;
    for (auto k = graph.offsets[cell]; k < graph.offsets[cell + 1]; ++k)
    {
        phi -= graph.kink[k] * lambda_z[graph.neighbors[k]];
    }
    return phi;
}

std::string neighbor_graph_csv(const Layout& layout, const NeighborGraph& graph)
{
    std::string out = "cell_i,cell_j,distance_nm,kink_energy_J\n";
    char buf[160];
    for (std::size_t i = 0; i < graph.cell_count(); ++i)
    {
        for (auto k = graph.offsets[i]; k < graph.offsets[i + 1]; ++k)
        {
            const auto j = graph.neighbors[k];
            if (j < i)
            {
                continue;
            }
            std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.9e\n", layout.cells[i].id, layout.cells[j].id,
                          graph.distance_nm[k], graph.kink[k]);
            out += buf;
        }
    }
    return out;
}

}  // namespace qcae
