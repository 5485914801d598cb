#pragma once

#include "qcae/layout.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcae
{

/// Point-charge picture of a cell: four dots at the corners, two electrons on
/// one diagonal and a neutralising +e/2 on every dot. Dot order is top-right,
/// top-left, bottom-left, bottom-right; P = +1 occupies top-right/bottom-left.
struct DotChargeModel
{
    std::array<std::array<double, 2>, 4> dot_offsets{};  // nm, relative to center

    explicit DotChargeModel(const TechnologyParams& tech);

    /// Net charge (C) on each dot for polarization `p` ∈ {-1, +1}.
    [[nodiscard]] static std::array<double, 4> dot_charges(int p);
};

/// Euclidean center distance in nm, counting layer_distance per layer step.
double center_distance(const Cell& a, const Cell& b, const TechnologyParams& tech);

/// Configuration energy difference U(opposite) − U(same) between two cells, in J.
/// Positive for side-by-side cells; negative for diagonal and stacked ones.
double kink_energy(const Cell& a, const Cell& b, const TechnologyParams& tech);

struct NeighborGraph
{
    // CSR adjacency, symmetric. Edge k of cell i is (neighbors[k], kink[k]) for
    // k in [offsets[i], offsets[i+1]).
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> neighbors;
    std::vector<double> kink;
    std::vector<double> distance_nm;

    [[nodiscard]] std::size_t cell_count() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return neighbors.size(); }
    [[nodiscard]] std::size_t degree(std::size_t i) const { return offsets[i + 1] - offsets[i]; }

    /// Kink energy between cells i and j, zero when they are not neighbours.
    [[nodiscard]] double kink_between(std::size_t i, std::size_t j) const;
};

/// Cells are addressed by their index in `layout.cells`.
NeighborGraph build_neighbor_graph(const Layout& layout, const TechnologyParams& tech);

/// Coulomb term Φ_i = −Σ_j E_k(i,j)·λ_z(j) in J; `lambda_z` is indexed like the
/// layout's cells. The minus sign makes a positive-kink neighbour pull the cell
/// toward its own polarization under Γ = (1/ħ)[−2γ, 0, Φ].
double coulomb_term(std::size_t cell, const NeighborGraph& graph, std::span<const double> lambda_z);

/// CSV `cell_i,cell_j,distance_nm,kink_energy_J`, one row per unordered pair.
std::string neighbor_graph_csv(const Layout& layout, const NeighborGraph& graph);

}  // namespace qcae
